"""The R-matrix of quantized sl2 on pairs of truncated highest-weight modules.

Three routes to the same operator:

* ``r_verma_direct``    -- the weightwise sum with q-binomial coefficients,
                           finite at generic q and at roots of unity;
* ``r_generic_universal`` -- exp_{q^-2}((q-q^-1) E(x)F) times the Cartan
                           weight factor, generic q only;
* ``r_reshetikhin_product`` -- at a root of unity, a finite product of
                           fractional powers of (1 - const * E(x)F) times a
                           terminating exponential in the renormalized
                           N-th power of E.

Verifiers for the intertwining property, the Yang-Baxter equation and
quasitriangularity, all restricted to safe source windows of the
truncations, round out the module.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qnum import (DEFAULT_TOL, QParam, matrix_fractional_power, nilpotent_expm,
                   qbinom, qexp_truncated, qnumber)
from .reps import Rep, coproduct, opposite_coproduct, tensor_rep
from .tensorop import TensorOperator, embed_two_site, kron2, masked_max_abs, safe_mask


@dataclass(frozen=True)
class RFiniteOptions:
    safe_margin: int = 1
    include_cartan_factor: bool = True
    tolerance: float = DEFAULT_TOL


def cartan_weight_vector(rep1: Rep, rep2: Rep) -> np.ndarray:
    """Diagonal of q^{H(x)H/2}: q^{h_i h_j / 2} over weight pairs."""
    qp = rep1.qp
    out = np.empty(rep1.dim * rep2.dim, dtype=complex)
    k = 0
    for hi in rep1.hvec:
        for hj in rep2.hvec:
            out[k] = qp.qpow(0.5 * hi * hj)
            k += 1
    return out


def renormalized_raising_power(rep: Rep, n: int) -> np.ndarray:
    """Matrix of E^n / (n)_{q^-2}! on a ladder module, valid at roots of unity.

    Entry at (s-n, s) is q^{n(n-1)/2} qbinom(s, n) prod_{r=1}^n [lam - s + r];
    the q-binomial is the root-of-unity limit value where applicable, so the
    expression is never assembled from vanishing factorials.
    """
    if rep.kind not in ("verma", "semicyclic"):
        raise ValueError("renormalized raising powers need a ladder module")
    qp = rep.qp
    d = rep.dim
    out = np.zeros((d, d), dtype=complex)
    if n == 0:
        return np.eye(d, dtype=complex)
    pref = qp.qpow(0.5 * n * (n - 1))
    for s in range(n, d):
        prod = 1.0 + 0j
        for r in range(1, n + 1):
            prod *= qnumber(rep.lam - s + r, qp)
        coeff = pref * qbinom(s, n, qp) * prod
        out[s - n, s] = coeff
    return out


def e_derivation_matrix(rep: Rep) -> np.ndarray:
    """The renormalized limit of E^N / (N)_{q^-2}! at a root of unity."""
    if not rep.qp.is_root:
        raise ValueError("the renormalized N-th power lives at roots of unity")
    return renormalized_raising_power(rep, rep.qp.N)


def r_verma_direct(rep1: Rep, rep2: Rep, opts: RFiniteOptions | None = None) -> TensorOperator:
    """Weightwise R-matrix on V1 (x) V2.

    R(v_s (x) v_s') = sum_n q^{(l1-2s)(l2-2s')/2} q^{n(n-1)/2} (q-q^-1)^n
                      qbinom(s,n) prod_{r=1}^n [l1-s+r]  v_{s-n} (x) v_{s'+n},
    terms leaving the second truncation dropped.
    """
    opts = opts or RFiniteOptions()
    if rep1.qp != rep2.qp:
        raise ValueError("both modules must share the deformation parameter")
    qp = rep1.qp
    q = qp.q
    d1, d2 = rep1.dim, rep2.dim
    mat = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for s in range(d1):
        for sp in range(d2):
            col = s * d2 + sp
            cart = qp.qpow(0.5 * rep1.hvec[s] * rep2.hvec[sp]) \
                if opts.include_cartan_factor else 1.0
            prod = 1.0 + 0j
            for n in range(0, min(s, d2 - 1 - sp) + 1):
                if n > 0:
                    prod *= qnumber(rep1.lam - s + n, qp)
                coeff = (qp.qpow(0.5 * n * (n - 1)) * (q - 1 / q) ** n
                         * qbinom(s, n, qp) * prod)
                mat[(s - n) * d2 + (sp + n), col] += cart * coeff
    return TensorOperator((d1, d2), mat)


def r_generic_universal(rep1: Rep, rep2: Rep, terms: int | None = None,
                        opts: RFiniteOptions | None = None) -> TensorOperator:
    """exp_{q^-2}((q - q^-1) E (x) F) times the Cartan weight factor; generic q only."""
    opts = opts or RFiniteOptions()
    qp = rep1.qp
    if qp.is_root:
        raise ValueError("the q-exponential form is singular at roots of unity")
    if terms is None:
        terms = min(rep1.dim, rep2.dim)
    q = qp.q
    X = kron2(rep1.E, rep2.F)
    mat = qexp_truncated((q - 1 / q) * X, qp.qpow(-2), terms)
    if opts.include_cartan_factor:
        mat = mat * cartan_weight_vector(rep1, rep2)[None, :]
    return TensorOperator((rep1.dim, rep2.dim), mat)


#: wrap-constant choices for the product form at a root of unity.  "auto" is the
#: value (eps - 1/eps)^N calibrated against r_verma_direct; "plus"/"minus" are
#: +-(1 - eps^-2)^-N, retained for inspection of the alternative convention.
WRAP_CONSTANTS = ("auto", "plus", "minus")


def _wrap_constant(qp: QParam, choice: str) -> complex:
    eps = qp.q
    if choice == "auto":
        return (eps - 1 / eps) ** qp.N
    base = (1 - eps**-2) ** (-qp.N)
    if choice == "plus":
        return base
    if choice == "minus":
        return -base
    raise ValueError(f"unknown wrap constant choice {choice!r}")


def r_reshetikhin_product(rep1: Rep, rep2: Rep, opts: RFiniteOptions | None = None,
                          wrap_constant: str = "auto",
                          literal_factors: bool = False) -> TensorOperator:
    """Finite product form of the R-matrix at a root of unity.

    Calibrated form (default): with X = E (x) F and zeta = eps^-2,

        prod_{r=0}^{N-1} (1 - zeta^r eps^-1 (eps-1/eps)^2 X)^{r/N}
        * exp(wrap_const * (E^N/(N)_{q^-2}!) (x) F^N)
        * q^{H(x)H/2}.

    ``literal_factors=True`` switches to the factors (1 - eps^m X)^{-m/N}
    of the alternative normalization, which does not reproduce the direct
    form; it is kept as a negative control.
    """
    opts = opts or RFiniteOptions()
    qp = rep1.qp
    if not qp.is_root:
        raise ValueError("the product form is a root-of-unity construction")
    N = qp.N
    eps = qp.q
    X = kron2(rep1.E, rep2.F)
    d = X.shape[0]
    mat = np.eye(d, dtype=complex)
    for r in range(N):
        if literal_factors:
            if r == 0:
                continue
            mat = mat @ matrix_fractional_power(qp.qpow(r), X, -r / N)
        else:
            a = qp.qpow(-2 * r - 1) * (eps - 1 / eps) ** 2
            mat = mat @ matrix_fractional_power(a, X, r / N)
    FN = np.linalg.matrix_power(rep2.F, N)
    if FN.any():
        e1 = e_derivation_matrix(rep1)
        if e1.any():
            C = _wrap_constant(qp, wrap_constant)
            mat = mat @ nilpotent_expm(C * kron2(e1, FN))
    if opts.include_cartan_factor:
        mat = mat * cartan_weight_vector(rep1, rep2)[None, :]
    return TensorOperator((rep1.dim, rep2.dim), mat)


def intertwine_residual(R: TensorOperator, rep1: Rep, rep2: Rep,
                        margin: int = 1) -> float:
    """max_a || R D(a) - D'(a) R || over a in {E, F, K}, on safe source columns."""
    mask = safe_mask((rep1.dim, rep2.dim), margin)
    out = 0.0
    for gen in ("E", "F", "K"):
        lhs = R.mat @ coproduct(rep1, rep2, gen).mat
        rhs = opposite_coproduct(rep1, rep2, gen).mat @ R.mat
        out = max(out, masked_max_abs(lhs - rhs, mask))
    return out


def ybe_residual(rep1: Rep, rep2: Rep, rep3: Rep, builder=None,
                 margin: int = 1) -> float:
    """|| R12 R13 R23 - R23 R13 R12 || on the threefold product, safe window."""
    if builder is None:
        builder = r_verma_direct
    dims = (rep1.dim, rep2.dim, rep3.dim)
    R12 = embed_two_site(builder(rep1, rep2).mat, dims, (0, 1))
    R13 = embed_two_site(builder(rep1, rep3).mat, dims, (0, 2))
    R23 = embed_two_site(builder(rep2, rep3).mat, dims, (1, 2))
    diff = R12 @ R13 @ R23 - R23 @ R13 @ R12
    return masked_max_abs(diff, safe_mask(dims, margin))


def quasitriangularity_residual(rep1: Rep, rep2: Rep, rep3: Rep,
                                margin: int = 1) -> float:
    """Residuals of (D(x)1)R = R13 R23 and (1(x)D)R = R13 R12 at generic q."""
    if rep1.qp.is_root:
        raise ValueError("quasitriangularity checks run at generic q only")
    dims = (rep1.dim, rep2.dim, rep3.dim)
    mask = safe_mask(dims, margin)
    R12 = embed_two_site(r_generic_universal(rep1, rep2).mat, dims, (0, 1))
    R13 = embed_two_site(r_generic_universal(rep1, rep3).mat, dims, (0, 2))
    R23 = embed_two_site(r_generic_universal(rep2, rep3).mat, dims, (1, 2))
    lhs1 = r_generic_universal(tensor_rep(rep1, rep2), rep3).mat
    res1 = masked_max_abs(lhs1 - R13 @ R23, mask)
    lhs2 = r_generic_universal(rep1, tensor_rep(rep2, rep3)).mat
    res2 = masked_max_abs(lhs2 - R13 @ R12, mask)
    return max(res1, res2)
