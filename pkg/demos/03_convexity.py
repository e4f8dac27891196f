"""
Falsifying convexity hypotheses on a grid
=========================================

The bounds assume |f'''| (or a power of it) lies in some convexity class.
The checker samples the defining inequality on an (x, y, t) grid and either
reports "not falsified" or returns the worst violating triple.
"""

from simpcert import (
    AlphaMConvex, ConvexityHypothesis, HConvex, HSpec, Interval, PFunction, check_hypothesis,
    class_inclusion_probe, parse_expr,
)

unit = Interval(0.0, 1.0)

# a concave function fails ordinary convexity near the midpoint of [0, 1]
v = check_hypothesis(ConvexityHypothesis(HConvex(HSpec.identity()), parse_expr("-x^2"), unit))
print(v.status, v.counterexample, f"slack_min={v.slack_min:.4f}")

# |f'''| = 24x for f = x^4 passes several classes
for kind in (HConvex(HSpec.identity()), AlphaMConvex(1.0, 1.0), PFunction()):
    v = check_hypothesis(ConvexityHypothesis(kind, parse_expr("24*x"), unit))
    print(f"{v.hypothesis:32s} {v.status}")

# one call runs the h = t, 1, 1/t, t^s checks and the named classes
for label, verdict in class_inclusion_probe(parse_expr("x^0.5"), unit, s=0.5).items():
    print(f"sqrt(x) in {label:12s}: {verdict.status}")
