"""Restriction of the spectral R-matrix to (semi)cyclic modules.

The N-dimensional semicyclic module is the quotient of the highest-weight
module by (F^N - alpha).  The spectral R-matrix descends to a pair of such
quotients exactly when the parameters lie on the integrability curve

    alpha_1 / (1 - L_1) = alpha_2 / (1 - L_2),     z^N = 1,

where L_i is the central value of K^N on module i, i.e. q^{N lam_i}
(a raw-power convention L_i = lam_i^N is kept behind a flag for
comparison).  The restricted operator is realized by evaluating the
spectral R-matrix on a depth-2N truncation and projecting through the
quotient identification v_{i+N} = alpha v_i; folding the module matrices
first does not work, because the diagonal factor is graded by the
unquotiented degree.

A nullspace solver recovers intertwiners of arbitrary module pairs
directly from the coproduct constraints; on cyclic modules it probes
the curve empirically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qnum import QParam
from .reps import Rep, truncated_verma
from .raffine import affine_coproduct_images, r_spectral
from .tensorop import TensorOperator, kron2

CURVE_CONVENTIONS = ("central", "raw")


@dataclass(frozen=True)
class CurveSpec:
    """Parameter tuple of a (semi)cyclic module pair with its curve residuals."""

    z: complex
    lambda1: complex
    lambda2: complex
    alpha1: complex
    alpha2: complex
    beta1: complex | None = None
    beta2: complex | None = None
    N: int = 0

    def to_json(self) -> dict:
        def c(v):
            return None if v is None else [complex(v).real, complex(v).imag]

        return {
            "z": c(self.z), "lambda1": c(self.lambda1), "lambda2": c(self.lambda2),
            "alpha1": c(self.alpha1), "alpha2": c(self.alpha2),
            "beta1": c(self.beta1), "beta2": c(self.beta2), "N": self.N,
        }


def _central_powers(spec: CurveSpec, qp: QParam, convention: str):
    if convention == "central":
        return qp.qpow(qp.N * spec.lambda1), qp.qpow(qp.N * spec.lambda2)
    if convention == "raw":
        return spec.lambda1 ** qp.N, spec.lambda2 ** qp.N
    raise ValueError(f"unknown curve convention {convention!r}")


def curve_residual(spec: CurveSpec, qp: QParam, convention: str = "central") -> tuple:
    """Residuals (r1, r2[, r3]) of the integrability curve.

    r1 = |a1/(1-L1) - a2/(1-L2)|, r2 = |z^N - 1| and, when both beta's are
    given, r3 = |b1/(1-1/L1) - b2/(1-1/L2)|.
    """
    L1, L2 = _central_powers(spec, qp, convention)
    if abs(1 - L1) < 1e-12 or abs(1 - L2) < 1e-12:
        raise ValueError("degenerate curve denominator: K^N takes the value 1")
    r1 = abs(spec.alpha1 / (1 - L1) - spec.alpha2 / (1 - L2))
    r2 = abs(spec.z ** qp.N - 1)
    if spec.beta1 is None or spec.beta2 is None:
        return (r1, r2)
    r3 = abs(spec.beta1 / (1 - 1 / L1) - spec.beta2 / (1 - 1 / L2))
    return (r1, r2, r3)


def on_curve_partner(alpha1: complex, lam1: complex, lam2: complex, qp: QParam,
                     convention: str = "central") -> complex:
    """The alpha2 that puts (alpha1, lam1; alpha2, lam2) on the curve."""
    spec = CurveSpec(1.0, lam1, lam2, alpha1, 0.0, N=qp.N)
    L1, L2 = _central_powers(spec, qp, convention)
    return alpha1 * (1 - L2) / (1 - L1)


def _quotient_maps(alpha: complex, N: int, depth: int):
    P = np.zeros((N, depth), dtype=complex)
    for i in range(depth):
        P[i % N, i] = alpha ** (i // N)
    S = np.zeros((depth, N), dtype=complex)
    for i in range(N):
        S[i, i] = 1.0
    return P, S


def r_semicyclic(z: complex, sc1: Rep, sc2: Rep, cartan: str = "normalized",
                 pole_tol: float = 1e-12) -> TensorOperator:
    """Spectral R-matrix carried to the semicyclic quotient pair.

    Evaluates R(z) on depth-2N truncations of the parent highest-weight
    modules and conjugates by the quotient identification v_{i+N} = alpha v_i.
    On the curve this is the intertwiner of the semicyclic pair; off the
    curve it is representative-dependent and fails the intertwining check,
    which is the detection contract.
    """
    if sc1.kind != "semicyclic" or sc2.kind != "semicyclic":
        raise ValueError("both modules must be semicyclic quotients")
    if sc1.qp != sc2.qp:
        raise ValueError("modules must share the deformation parameter")
    qp = sc1.qp
    N = qp.N
    depth = 2 * N
    v1 = truncated_verma(sc1.lam, depth, qp)
    v2 = truncated_verma(sc2.lam, depth, qp)
    Rv = r_spectral(z, v1, v2, cartan=cartan, pole_tol=pole_tol)
    P1, S1 = _quotient_maps(sc1.params["alpha"], N, depth)
    P2, S2 = _quotient_maps(sc2.params["alpha"], N, depth)
    mat = kron2(P1, P2) @ Rv.mat @ kron2(S1, S2)
    return TensorOperator((N, N), mat)


def fn_commutation_residual(z: complex, sc1: Rep, sc2: Rep, R: TensorOperator,
                            convention: str = "central", tol: float = 1e-9) -> dict:
    """Residuals of the two exchange relations between R and the N-th power of F.

    rel1: R (L2 F^N (x) 1 + 1 (x) F^N) = (L1 1 (x) F^N + F^N (x) 1) R
    rel2: R (x^N F^N (x) 1 + y^N L1 1 (x) F^N)
            = (y^N 1 (x) F^N + x^N L2 F^N (x) 1) R, with x/y = z.

    Also reports whether z^N differs from L1 L2, the solvability condition
    for expressing the mixed products one way around the other.
    """
    qp = sc1.qp
    N = qp.N
    spec = CurveSpec(z, sc1.lam, sc2.lam, sc1.params.get("alpha", 0),
                     sc2.params.get("alpha", 0), N=N)
    L1, L2 = _central_powers(spec, qp, convention)
    I1 = np.eye(sc1.dim, dtype=complex)
    I2 = np.eye(sc2.dim, dtype=complex)
    F1N = np.linalg.matrix_power(sc1.F, N)
    F2N = np.linalg.matrix_power(sc2.F, N)
    A = kron2(F1N, I2)
    B = kron2(I1, F2N)
    xN, yN = z**N, 1.0
    rel1 = R.mat @ (L2 * A + B) - (L1 * B + A) @ R.mat
    rel2 = R.mat @ (xN * A + yN * L1 * B) - (yN * B + xN * L2 * A) @ R.mat
    return {
        "ideal_exchange": float(np.max(np.abs(rel1))),
        "spectral_exchange": float(np.max(np.abs(rel2))),
        "solvable": bool(abs(xN / yN - L1 * L2) > tol),
    }


def solve_intertwiner(rep1: Rep, rep2: Rep, x: complex, y: complex,
                      sv_ratio: float = 1e-7) -> tuple:
    """Nullspace solve of R D(a) = D'(a) R over the affine generator images.

    Builds the Gram matrix of the stacked constraints for
    a in {E0, F0, E1, F1, K0} and counts near-zero eigenvalues (eigenvalue
    below (sv_ratio)^2 times the largest counts as zero).  Returns
    (R, nullspace_dim) with R normalized so its largest entry is 1, or
    (None, 0) when no intertwiner exists.
    """
    if rep1.qp != rep2.qp:
        raise ValueError("modules must share the deformation parameter")
    D = rep1.dim * rep2.dim
    left = affine_coproduct_images(rep1, rep2, x, y, opposite=False)
    right = affine_coproduct_images(rep1, rep2, x, y, opposite=True)
    gram = np.zeros((D * D, D * D), dtype=complex)
    for name in ("E0", "F0", "E1", "F1", "K0"):
        A = np.kron(np.eye(D), left[name].T) - np.kron(right[name], np.eye(D))
        gram += A.conj().T @ A
    from scipy.linalg import eigh
    w, v = eigh(gram)
    wmax = float(w[-1]) if w[-1] > 0 else 1.0
    null = w < (sv_ratio**2) * wmax
    dim = int(null.sum())
    if dim == 0:
        return None, 0
    vec = v[:, 0]
    R = vec.reshape(D, D)
    k = int(np.argmax(np.abs(R)))
    R = R / R.flat[k]
    return TensorOperator((rep1.dim, rep2.dim), R), dim


def export_boltzmann(R: TensorOperator, meta: CurveSpec, qp: QParam,
                     convention: str = "central") -> dict:
    """Weight table of the restricted R-matrix with curve metadata.

    Entries are listed as [i, j, i', j', [re, im]] in row-major order; the
    normalization field records the eigenvalue on v_0 (x) v_0.
    """
    d1, d2 = R.dims
    res = curve_residual(meta, qp, convention)
    residuals = {"curve_alpha": res[0], "unimodularity": res[1]}
    if len(res) > 2:
        residuals["curve_beta"] = res[2]
    weights = []
    for ip in range(d1):
        for jp in range(d2):
            for i in range(d1):
                for j in range(d2):
                    v = R.mat[ip * d2 + jp, i * d2 + j]
                    weights.append([i, j, ip, jp, [v.real, v.imag]])
    return {
        "schema_version": "1",
        "nprime": qp.nprime,
        "N": qp.N,
        "dims": [d1, d2],
        "parameters": meta.to_json(),
        "residuals": residuals,
        "normalization": [R.mat[0, 0].real, R.mat[0, 0].imag],
        "weights": weights,
    }


def import_boltzmann(doc: dict) -> TensorOperator:
    """Rebuild the weight table exported by export_boltzmann, bit-exactly."""
    d1, d2 = doc["dims"]
    mat = np.zeros((d1 * d2, d1 * d2), dtype=complex)
    for i, j, ip, jp, (re, im) in doc["weights"]:
        mat[ip * d2 + jp, i * d2 + j] = complex(re, im)
    return TensorOperator((d1, d2), mat)
