"""
Simpson's rule, its true error and the kernel behind it
========================================================

The three point rule integrates cubics exactly.  The first polynomial it
misses is x^4, and the miss is captured by a piecewise cubic kernel p(t)
weighted against f'''.
"""

import numpy as np

from simpcert import FunctionModel, Interval, kernel_p, simpson_error, verify_kernel_identity

for source in ("x^3", "x^4", "exp(x)"):
    res = simpson_error(FunctionModel.parse(source), Interval(0.0, 1.0))
    print(f"{source:7s} simpson={res.simpson_value:.15f} reference={res.reference_value:.15f} "
          f"error={res.actual_error:.3e}")

# the kernel is odd about t = 1/2
t = np.linspace(0.0, 1.0, 9)
print("p(t)      =", kernel_p(t))
print("p(1 - t)  =", kernel_p(1.0 - t))

# on [a, m b] the error equals (m b - a)^4 times the kernel integral of f'''
f = FunctionModel.parse("x^4 + sin(3*x)")
for m in (0.5, 0.75, 1.0):
    print(f"m={m}: kernel identity residual {verify_kernel_identity(f, Interval(0.2, 1.4), m):.2e}")
