"""Analytic continuation by contour shifting, seen from a few angles.

Run: python3 demos/continuation_tour.py   (about half a minute)
"""
import math

import mpmath

from mzeta import (ContinuationConfig, Shape, SingularPoint, eval_auto, mt_base_continuation,
                   shifted_eval_zeta)
from mzeta.suites import residue_at_one

# 1. The Tornheim sum at (1,1,1) is outside the convergence region of the
#    independent-sum chain used by the evaluator, yet its value is 2 zeta(3).
tor = mt_base_continuation(2, [1, 1, 1])
print(f"continued value at (1,1,1): {tor.value.real:.13f}   2 zeta(3) = {2 * float(mpmath.zeta(3)):.13f}")

# 2. Off the region the shift depth N is a free parameter; the answer must not care.
s = [2, 2, -0.5]
for N in (4, 6, 8):
    r = shifted_eval_zeta(Shape(1, 2), s, ContinuationConfig(N=N))
    print(f"N={N}: {r.value.real:+.14f} {r.value.imag:+.2e}i  ({len(r.terms)} terms)")

# 3. The first residue term carries the pole at s_3 = 1; its residue is zeta(4).
res = residue_at_one(Shape(1, 2), [2.0, 2.0])
print(f"\nresidue at s_3 = 1: {res.real:.12f}   zeta(4) = {math.pi ** 4 / 90:.12f}")

# 4. Asking for a value on a singular hyperplane is an error that names the plane.
try:
    eval_auto("zeta", Shape(1, 2), [2, 2, 1])
except SingularPoint as exc:
    print("\nrefused:", ", ".join(f"sum s{list(p.subset)} = {p.constant}" for p in exc.planes))
