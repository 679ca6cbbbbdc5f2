#!/usr/bin/env python3
"""q-integers and q-binomials, and what survives at a root of unity.

The symmetric bracket [n] = (q^n - q^-n)/(q - q^-1) behaves like a plain
integer while q is generic.  At a primitive N'-th root of unity the brackets
[N], [2N], ... all vanish (N is the order of q^2), factorials die with them,
and yet the binomial [s choose n] keeps a perfectly finite limit.  This
script walks the limit numerically.
"""

from uqsl2 import QParam, qbinom, qfact, qint, qnumber

print(__doc__)

qp = QParam.generic(1.3)
print("generic q = 1.3:")
print("  [1], [2], [3], [4] =", [round(qint(n, qp).real, 6) for n in range(1, 5)])
print("  [4]! =", qfact(4, qp))
print("  [4 choose 2] =", qbinom(4, 2, qp))

print()
qp5 = QParam.root_of_unity(5)
print("q = exp(2*pi*i/5), so N = 5:")
print("  [5] =", abs(qint(5, qp5)), " (vanishes)")
print("  [5]! =", abs(qfact(5, qp5)), " (vanishes with it)")
print("  but [6 choose 1] =", qbinom(6, 1, qp5), " (finite limit)")

print()
print("The limit matches a radial approach q = eps * e^h, h -> 0:")
for s, n in ((6, 1), (7, 2), (12, 5)):
    exact = qbinom(s, n, qp5)
    for h in (1e-2, 1e-3, 1e-4):
        qh = qp5.perturbed(h)
        approx = 1 + 0j
        for k in range(1, n + 1):
            approx *= qnumber(s - n + k, qh) / qnumber(k, qh)
        print(f"  [{s} choose {n}]  h={h:.0e}: {approx:.6f}   limit value: {exact:.6f}")

print()
print("Interior columns of row N collapse entirely: "
      f"[5 choose 1..4] = {[abs(qbinom(5, n, qp5)) for n in range(1, 5)]}")
print("while the corners stay 1, which is the familiar Pascal picture mod N.")
