"""
End-to-end certificates
=======================

``certify`` checks the hypothesis on |f'''|, evaluates the bound and compares
it with the true error from an adaptive reference integral.
"""

import logging

from simpcert import FunctionModel, Interval, Theorem, certify

logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")

params = {"s": 0.5, "q": 2.0, "h": "t", "alpha": 0.5, "m": 0.9}
for source, a, b in (("exp(x)", 0.0, 1.0), ("x*exp(x)", 0.5, 2.0), ("sin(x)", 2.2, 2.8)):
    f = FunctionModel.parse(source)
    print(f"\n{source} on [{a}, {b}]")
    for theorem in Theorem:
        r = certify(f, Interval(a, b), theorem, params)
        ratio = "-" if r.ratio is None else f"{r.ratio:.3f}"
        print(f"  {theorem.value:9s} bound={r.bound:.3e} actual={r.actual_error:.3e} "
              f"ratio={ratio:6s} {r.status}")

# a hypothesis that does not hold gives a warning instead of a verdict
r = certify(FunctionModel.parse("-x^4"), Interval(0.0, 1.0), "T2_1", {"h": "t^2"})
print("\n-x^4 with h=t^2:", r.status, r.hypothesis.counterexample)
