"""
Parsing and differentiating integrands
======================================

Every certificate starts from a text expression.  The parser builds a small
tree, and the differentiator produces f''' and f'''' symbolically.
"""

import numpy as np

from simpcert import ExprSyntaxError, FunctionModel, to_source

f = FunctionModel.parse("x^5 - 3*x^2")
print("f      =", f)
print("f'''   =", to_source(f.derivative(3)))
print("f''''  =", to_source(f.derivative(4)))

# derivatives are plain expressions, evaluated on scalars or arrays
g = FunctionModel.parse("sin(x)*exp(-x) + 2")
xs = np.linspace(0.0, 1.0, 5)
print("g(xs)     =", g(xs))
print("g'''(xs)  =", g.d(3)(xs))

# the hypotheses are stated for |f'''|^q, which is again an expression
print("|f'''|^2 =", to_source(f.abs_derivative(3, 2.0)))

# syntax errors point at the offending byte
try:
    FunctionModel.parse("x^2 +* 1")
except ExprSyntaxError as err:
    print("error:", err)
