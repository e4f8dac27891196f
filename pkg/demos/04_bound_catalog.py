"""
The bound catalog on one integrand
==================================

For f = x^4 on [0, 1] the true Simpson error is 1/120.  Each bound only needs
|f'''| at the endpoints (or sup |f''''| for the classical one).
"""

from simpcert import (
    HSpec, Interval, am_moment_integrals, bound_am_holder, bound_am_powermean, bound_h_holder,
    bound_h_L1, bound_h_powermean, bound_sA, classical_bound,
)

iv = Interval(0.0, 1.0)
fa3, fb3 = 0.0, 24.0

print(f"classical          {classical_bound(24.0, iv):.6f}")
print(f"s-convex, s=1      {bound_sA(1.0, iv, fa3, fb3):.6f}")
for name in ("t", "1", "t^0.5", "1/t"):
    h = HSpec.from_name(name, 0.5)
    print(f"h={name:6s} L1 {bound_h_L1(h, iv, fa3, fb3):.6f}  "
          f"Holder(q=2) {bound_h_holder(h, 2.0, iv, fa3, fb3):.6f}  "
          f"power-mean(q=2) {bound_h_powermean(h, 2.0, iv, fa3, fb3):.6f}")

# (alpha, m) bounds live on [a, m b]
for alpha in (0.0, 0.5, 1.0):
    print(f"alpha={alpha}: Holder {bound_am_holder(alpha, 1.0, 2.0, iv, fa3, fb3):.6f}  "
          f"power-mean {bound_am_powermean(alpha, 1.0, 2.0, iv, fa3, fb3):.6f}  "
          f"moments {[round(v, 8) for v in am_moment_integrals(alpha)]}")
print(f"true error         {1 / 120:.6f}")
