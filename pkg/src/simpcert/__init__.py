"""Simpson's rule error certificates under generalised convexity of |f'''|."""

import logging

from .bounds import (
    BoundReport, Theorem, am_moment_integrals, bound_am_holder, bound_am_powermean,
    bound_h_holder, bound_h_L1, bound_h_powermean, bound_sA, bound_sB, bound_sC,
    bound_value, certify, classical_bound,
)
from .convexity import (
    AlphaMConvex, ConvexityHypothesis, ConvexityVerdict, GodunovaLevin, HConvex, MConvex,
    PFunction, SConvex, check_hypothesis, class_inclusion_probe,
)
from .expr import ExprSyntaxError, FunctionModel, differentiate, evaluate, parse_expr, to_source
from .quad import (
    Interval, kernel_holder_integral, kernel_p, reference_integral, simpson_error,
    simpson_estimate, verify_kernel_identity, weighted_kernel_integral,
)
from .special import log_gamma
from .weights import HSpec

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())
