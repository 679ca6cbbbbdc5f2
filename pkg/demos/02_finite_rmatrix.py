#!/usr/bin/env python3
"""The finite R-matrix on highest-weight modules, three ways.

At generic q the operator exp_{q^-2}((q - q^-1) E (x) F) q^{H(x)H/2}
intertwines the two coproducts of the quantized sl2 algebra and solves the
Yang-Baxter equation.  At a root of unity the q-exponential is singular,
but the weightwise sum of its matrix elements stays finite, and a closed
product of fractional powers

    prod_{r=0}^{N-1} (1 - eps^{-2r-1}(eps - 1/eps)^2 E(x)F)^{r/N}
      * exp((eps - 1/eps)^N  (E^N/(N)_{q^-2}!) (x) F^N) * q^{H(x)H/2}

reproduces it exactly.  The wrap constant (eps - 1/eps)^N was calibrated
against the direct form and is frozen by the test suite.
"""

import numpy as np

from uqsl2 import (QParam, intertwine_residual, r_generic_universal,
                   r_reshetikhin_product, r_verma_direct, truncated_verma,
                   ybe_residual)

print(__doc__)

qp = QParam.generic(1.17 + 0.06j)
lams = (0.43 + 0.11j, 1.27 - 0.23j, 0.9 + 0.05j)
reps = [truncated_verma(lam, 4, qp) for lam in lams]

Rd = r_verma_direct(reps[0], reps[1])
Ru = r_generic_universal(reps[0], reps[1])
print("generic q:")
print("  weightwise sum vs q-exponential form:",
      np.max(np.abs(Rd.mat - Ru.mat)))
print("  intertwining residual:", intertwine_residual(Rd, reps[0], reps[1]))
print("  Yang-Baxter residual:", ybe_residual(*reps))

print()
qp6 = QParam.root_of_unity(6)
depth = 2 * qp6.N + 1
r1 = truncated_verma(0.77 + 0.21j, depth, qp6)
r2 = truncated_verma(1.55 - 0.12j, depth, qp6)
Rd = r_verma_direct(r1, r2)
print(f"root of unity (N' = 6, N = {qp6.N}), depth {depth} > 2N:")
print("  direct vs fractional-power product:",
      np.max(np.abs(Rd.mat - r_reshetikhin_product(r1, r2).mat)))
for wc in ("plus", "minus"):
    alt = r_reshetikhin_product(r1, r2, wrap_constant=wc)
    print(f"  alternative wrap constant {wc!r} misses by:",
          round(float(np.max(np.abs(Rd.mat - alt.mat))), 3))
print("  (the alternative constants belong to another normalization of the")
print("   same construction and are kept only as a calibration record)")
