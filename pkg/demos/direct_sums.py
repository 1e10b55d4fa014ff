"""Direct summation inside the region of absolute convergence.

Run: python3 demos/direct_sums.py
"""
import math

from mzeta import Shape, riemann_zeta, zeta_ez_direct, zeta_mt_direct, zeta_mt_hat_direct

# The generalized class interpolates between the nested (j = 1) and the
# independent (j = r) sums. At (2,2,2) the two extremes are classical numbers.
ez = zeta_mt_hat_direct(Shape(1, 2), [2, 2, 2])
mt = zeta_mt_hat_direct(Shape(2, 2), [2, 2, 2])
print(f"j=1 at (2,2,2): {ez.value.real:.15f}  (err_est {ez.err_est:.1e})")
print(f"  same as the double zeta at (4,2): {zeta_ez_direct([4, 2]).value.real:.15f}")
print(f"j=2 at (2,2,2): {mt.value.real:.15f}  vs pi^6/2835 = {math.pi ** 6 / 2835:.15f}")

# Complex arguments work the same way; the result carries an error estimate
# and the truncation bound of the plain partial sum.
s = [2.3 + 0.5j, 1.7 - 0.2j, 1.4 + 1.0j]
res = zeta_mt_direct(s)
print(f"\nMordell-Tornheim at {s}:\n  {res.value:.14f}  err_est {res.err_est:.1e}  tail_bound {res.tail_bound:.1e}")

# Depth one collapses to a single zeta value.
print(f"\n(1,1) at (1.5, 2): {zeta_mt_hat_direct(Shape(1, 1), [1.5, 2]).value.real:.15f}"
      f"  zeta(3.5) = {riemann_zeta(3.5).real:.15f}")
