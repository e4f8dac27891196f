"""A-priori error bounds for Simpson's rule and the certification pipeline."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .convexity import (
    DEFAULT_GRID_N, DEFAULT_TOL, AlphaMConvex, ConvexityHypothesis, ConvexityVerdict,
    HConvex, SConvex, check_hypothesis,
)
from .expr import FunctionModel, evaluate
from .quad import (
    KERNEL_MASS, IntegrationError, Interval, kernel_holder_integral, simpson_error,
    weight_integral, weighted_kernel_integral,
)
from .weights import HSpec

log = logging.getLogger(__name__)

DOMINATION_SLACK = 1e-12


class Theorem(str, Enum):
    Classical = "Classical"
    A = "A"
    B = "B"
    C = "C"
    T2_1 = "T2_1"
    T2_2 = "T2_2"
    T2_3 = "T2_3"
    T3_1 = "T3_1"
    T3_2 = "T3_2"

    def __str__(self):
        return self.value


#: parameters each theorem needs, in addition to f and [a, b]
REQUIRED_PARAMS = {
    Theorem.Classical: (),
    Theorem.A: ("s",),
    Theorem.B: ("s", "q"),
    Theorem.C: ("s", "q"),
    Theorem.T2_1: ("h",),
    Theorem.T2_2: ("h", "q"),
    Theorem.T2_3: ("h", "q"),
    Theorem.T3_1: ("alpha", "m", "q"),
    Theorem.T3_2: ("alpha", "m", "q"),
}
#: theorems whose Hölder step needs q > 1 strictly
STRICT_Q = {Theorem.B, Theorem.T2_2, Theorem.T3_1}
AM_THEOREMS = {Theorem.T3_1, Theorem.T3_2}


def conjugate(q: float) -> float:
    """Hölder conjugate p of q > 1."""
    if not q > 1.0:
        raise ValueError(f"q must exceed 1 for the Hölder estimate, got {q!r}")
    return q / (q - 1.0)


def _check_q(q, strict):
    if not math.isfinite(q) or q < 1.0 or (strict and q == 1.0):
        raise ValueError(f"q must be {'>' if strict else '>='} 1, got {q!r}")


def _check_endpoint_values(fa3, fb3):
    if fa3 < 0 or fb3 < 0 or not (math.isfinite(fa3) and math.isfinite(fb3)):
        raise ValueError(f"|f'''| endpoint values must be finite and >= 0, got {fa3}, {fb3}")


def _check_am(alpha, m, iv):
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    if not 0.0 < m <= 1.0:
        raise ValueError(f"m must lie in (0, 1], got {m!r}")
    if not iv.a < m * iv.b:
        raise ValueError(f"(alpha, m) bounds need a < m*b, got a={iv.a}, m*b={m * iv.b}")


def holder_kernel_factor(p: float) -> float:
    """(Gamma(2p+1) Gamma(p+1) / Gamma(3p+2))^(1/p), i.e. (2^(3p+1) K(p))^(1/p)."""
    return (kernel_holder_integral(p) * 2.0 ** (3 * p + 1)) ** (1.0 / p)


# ---------------------------------------------------------------------------
# classical and s-convex closed forms


def classical_bound(sup_f4: float, iv: Interval) -> float:
    if not (math.isfinite(sup_f4) and sup_f4 >= 0):
        raise ValueError(f"sup |f''''| must be finite and >= 0, got {sup_f4!r}")
    return sup_f4 * iv.length ** 5 / 2880.0


def _sA_bracket(s: float) -> float:
    num = (1 + s) * (2 + s) + 34 + 2.0 ** (4 + s) * (-2 + s) + 11 * s + s * s
    return 2.0 ** (-4 - s) * num / ((1 + s) * (2 + s) * (3 + s) * (4 + s))


def _check_s(s):
    if not 0.0 < s <= 1.0:
        raise ValueError(f"s must lie in (0, 1], got {s!r}")


def bound_sA(s: float, iv: Interval, fa3: float, fb3: float) -> float:
    _check_s(s)
    _check_endpoint_values(fa3, fb3)
    return iv.length ** 4 / 6.0 * _sA_bracket(s) * (fa3 + fb3)


def bound_sB(s: float, q: float, iv: Interval, fa3: float, fb3: float) -> float:
    _check_s(s)
    _check_q(q, strict=True)
    _check_endpoint_values(fa3, fb3)
    p = conjugate(q)
    c0 = 1.0 / (2.0 ** (s + 1) * (s + 1))
    c1 = (2.0 ** (s + 1) - 1) / (2.0 ** (s + 1) * (s + 1))
    A, B = fa3 ** q, fb3 ** q
    brackets = (c0 * A + c1 * B) ** (1 / q) + (c1 * A + c0 * B) ** (1 / q)
    return iv.length ** 4 / 48.0 * 0.5 ** (1 / p) * holder_kernel_factor(p) * brackets


def bound_sC(s: float, q: float, iv: Interval, fa3: float, fb3: float) -> float:
    _check_s(s)
    _check_q(q, strict=False)
    _check_endpoint_values(fa3, fb3)
    prod = (1 + s) * (2 + s) * (3 + s) * (4 + s)
    c0 = 2.0 ** (-4 - s) / ((3 + s) * (4 + s))
    c1 = 2.0 ** (-4 - s) * (34 + 2.0 ** (4 + s) * (-2 + s) + 11 * s + s * s) / prod
    A, B = fa3 ** q, fb3 ** q
    brackets = (c0 * A + c1 * B) ** (1 / q) + (c1 * A + c0 * B) ** (1 / q)
    return iv.length ** 4 / 6.0 * (1 / 192) ** (1 - 1 / q) * brackets


# ---------------------------------------------------------------------------
# h-convex bounds


@lru_cache(maxsize=256)
def _kernel_weights(h: HSpec) -> tuple[float, float]:
    try:
        return weighted_kernel_integral(h, "t"), weighted_kernel_integral(h, "1-t")
    except IntegrationError:
        return math.inf, math.inf


@lru_cache(maxsize=256)
def _plain_weights(h: HSpec) -> tuple[float, float]:
    return weight_integral(h, "t"), weight_integral(h, "1-t")


def bound_h_L1(h: HSpec, iv: Interval, fa3: float, fb3: float) -> float:
    _check_endpoint_values(fa3, fb3)
    w0, w1 = _kernel_weights(h)
    w = w0 + w1
    if not math.isfinite(w):
        return math.inf
    return iv.length ** 4 / 6.0 * w * (fa3 + fb3)


def bound_h_holder(h: HSpec, q: float, iv: Interval, fa3: float, fb3: float) -> float:
    """Hölder-type bound; ``math.inf`` when an integral of h over [0, 1/2] diverges."""
    _check_q(q, strict=True)
    _check_endpoint_values(fa3, fb3)
    h0, h1 = _plain_weights(h)
    if not (math.isfinite(h0) and math.isfinite(h1)):
        return math.inf
    p = conjugate(q)
    A, B = fa3 ** q, fb3 ** q
    brackets = (h0 * A + h1 * B) ** (1 / q) + (h1 * A + h0 * B) ** (1 / q)
    return iv.length ** 4 / 48.0 * 0.5 ** (1 / p) * holder_kernel_factor(p) * brackets


def bound_h_powermean(h: HSpec, q: float, iv: Interval, fa3: float, fb3: float) -> float:
    _check_q(q, strict=False)
    if q == 1.0:
        return bound_h_L1(h, iv, fa3, fb3)
    _check_endpoint_values(fa3, fb3)
    w0, w1 = _kernel_weights(h)
    if not (math.isfinite(w0) and math.isfinite(w1)):
        return math.inf
    A, B = fa3 ** q, fb3 ** q
    brackets = (w0 * A + w1 * B) ** (1 / q) + (w1 * A + w0 * B) ** (1 / q)
    return iv.length ** 4 / 6.0 * KERNEL_MASS ** (1 - 1 / q) * brackets


# ---------------------------------------------------------------------------
# (alpha, m)-convex bounds


def am_moment_integrals(alpha: float) -> tuple[float, float, float, float]:
    """Kernel moments against t^alpha and 1 - t^alpha on both halves of [0, 1].

    Returns, in order, the integrals of
    t^2 (1/2 - t) t^alpha and t^2 (1/2 - t) (1 - t^alpha) over [0, 1/2], then
    (t - 1)^2 (t - 1/2) t^alpha and (t - 1)^2 (t - 1/2) (1 - t^alpha) over [1/2, 1].
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha!r}")
    a = alpha
    d_left = 2.0 ** a * (3 + a) * (4 + a)
    d_right = 2.0 ** a * (1 + a) * (2 + a) * (3 + a) * (4 + a)
    poly = a * a + 11 * a + 34 - 2.0 ** (4 + a) * (2 - a)
    left_t = 1.0 / (16 * d_left)
    left_c = (d_left - 12) / (192 * d_left)
    right_t = poly / (16 * d_right)
    right_c = (d_right - 12 * poly) / (192 * d_right)
    return left_t, left_c, right_t, right_c


def bound_am_holder(alpha: float, m: float, q: float, iv: Interval, fa3: float, fb3: float) -> float:
    """Hölder-type bound on [a, m b] when |f'''|^q is (alpha, m)-convex.

    ``fb3`` is |f'''(b)| at the original right endpoint b.
    """
    _check_am(alpha, m, iv)
    _check_q(q, strict=True)
    _check_endpoint_values(fa3, fb3)
    p = conjugate(q)
    A, B = fa3 ** q, fb3 ** q
    d = 2.0 ** alpha * (1 + alpha)
    e = 2.0 ** (1 + alpha) - 1
    first = (A + m * (d - 1) * B) / d
    second = (e * A + m * (d - e) * B) / d
    length = m * iv.b - iv.a
    return length ** 4 / 96.0 * holder_kernel_factor(p) * (first ** (1 / q) + second ** (1 / q))


def bound_am_powermean(alpha: float, m: float, q: float, iv: Interval, fa3: float, fb3: float) -> float:
    """Power-mean bound on [a, m b], in its /1152 closed form."""
    _check_am(alpha, m, iv)
    _check_q(q, strict=False)
    _check_endpoint_values(fa3, fb3)
    A, B = fa3 ** q, fb3 ** q
    d_left = 2.0 ** alpha * (3 + alpha) * (4 + alpha)
    poly = alpha ** 2 + 11 * alpha + 34 - 2.0 ** (4 + alpha) * (2 - alpha)
    c = 12 * poly / (2.0 ** alpha * (1 + alpha) * (2 + alpha) * (3 + alpha) * (4 + alpha))
    first = (12 * A + m * (d_left - 12) * B) / d_left
    second = c * A + m * (1 - c) * B
    length = m * iv.b - iv.a
    return length ** 4 / 1152.0 * (first ** (1 / q) + second ** (1 / q))


def bound_am_powermean_assembled(alpha: float, m: float, q: float, iv: Interval,
                                 fa3: float, fb3: float) -> float:
    """The same bound built directly from the four moment integrals."""
    _check_am(alpha, m, iv)
    _check_q(q, strict=False)
    lt, lc, rt, rc = am_moment_integrals(alpha)
    A, B = fa3 ** q, fb3 ** q
    brackets = (lt * A + m * lc * B) ** (1 / q) + (rt * A + m * rc * B) ** (1 / q)
    return (m * iv.b - iv.a) ** 4 / 6.0 * KERNEL_MASS ** (1 - 1 / q) * brackets


# ---------------------------------------------------------------------------
# certification


@dataclass(frozen=True)
class BoundReport:
    theorem: Theorem
    params: dict
    bound: float
    actual_error: float
    hypothesis: ConvexityVerdict
    dominates: bool | None
    ratio: float | None
    interval: tuple[float, float] = (0.0, 1.0)
    simpson_value: float = math.nan
    reference_value: float = math.nan
    status: str = "ok"

    @property
    def informative(self) -> bool:
        return math.isfinite(self.bound)


def sup_abs(expr, iv: Interval, samples: int = 4097) -> float:
    """Sup of |expr| on [a, b]: dense sampling refined by a bounded local search."""
    xs = np.linspace(iv.a, iv.b, samples)
    vals = np.abs(evaluate(expr, xs))
    i = int(np.argmax(vals))
    best = float(vals[i])
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, samples - 1)]
    if hi > lo:
        res = minimize_scalar(lambda x: -abs(evaluate(expr, float(x))), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-12})
        best = max(best, -float(res.fun))
    return best


def _trivial_verdict(label):
    return ConvexityVerdict(True, None, 0, math.inf, label)


def _endpoint_abs(f: FunctionModel, x: float) -> float:
    return abs(evaluate(f.derivative(3), x))


def normalize_params(theorem: Theorem, params: dict) -> dict:
    """Validate and complete the parameter set of ``theorem``."""
    theorem = Theorem(theorem)
    params = dict(params)
    missing = [k for k in REQUIRED_PARAMS[theorem] if params.get(k) is None]
    if missing:
        raise ValueError(f"theorem {theorem} needs parameter(s): {', '.join(missing)}")
    if "q" in REQUIRED_PARAMS[theorem]:
        _check_q(float(params["q"]), strict=theorem in STRICT_Q)
    if "s" in REQUIRED_PARAMS[theorem]:
        _check_s(float(params["s"]))
    if "h" in REQUIRED_PARAMS[theorem] and not isinstance(params["h"], HSpec):
        params["h"] = HSpec.from_name(str(params["h"]), params.get("s"))
    keep = set(REQUIRED_PARAMS[theorem]) | {"sup_f4", "b_star"}
    return {k: v for k, v in params.items() if k in keep and v is not None}


def certify(f: FunctionModel, iv: Interval, theorem, params: dict | None = None,
            grid_n: int = DEFAULT_GRID_N, tol: float = DEFAULT_TOL) -> BoundReport:
    """Check the hypothesis on |f'''|, evaluate the bound and compare with the true error."""
    theorem = Theorem(theorem)
    params = normalize_params(theorem, params or {})
    q = float(params.get("q", 1.0))

    if theorem is not Theorem.Classical and iv.a < 0:
        raise ValueError(f"theorem {theorem} is stated for intervals inside [0, inf), got a={iv.a}")
    if "b_star" in params and iv.b > params["b_star"]:
        raise ValueError(f"interval [{iv.a}, {iv.b}] leaves the admissible domain [0, {params['b_star']}]")

    if theorem in AM_THEOREMS:
        alpha, m = float(params["alpha"]), float(params["m"])
        _check_am(alpha, m, iv)
        governed = iv.scaled(m)
    else:
        governed = iv

    quad = simpson_error(f, governed)
    fa3, fb3 = _endpoint_abs(f, iv.a), _endpoint_abs(f, iv.b)

    if theorem is Theorem.Classical:
        sup_f4 = params.get("sup_f4")
        if sup_f4 is None:
            sup_f4 = sup_abs(f.derivative(4), iv)
            params["sup_f4"] = sup_f4
        verdict = _trivial_verdict("BoundedFourthDerivative")
        bound = classical_bound(float(sup_f4), iv)
    else:
        power = 1.0 if theorem in (Theorem.A, Theorem.T2_1) else q
        target = f.abs_derivative(3, power)
        if theorem in (Theorem.A, Theorem.B, Theorem.C):
            kind = SConvex(float(params["s"]))
        elif theorem in AM_THEOREMS:
            kind = AlphaMConvex(alpha, m)
        else:
            kind = HConvex(params["h"])
        verdict = check_hypothesis(ConvexityHypothesis(kind, target, iv), grid_n, tol)
        bound = _bound_value(theorem, params, iv, fa3, fb3)

    actual = quad.actual_error
    if not verdict.passed:
        dominates, status = None, "warning: hypothesis falsified"
        log.warning("%s: hypothesis %s falsified at %s", theorem, verdict.hypothesis, verdict.counterexample)
    else:
        dominates = actual <= bound + DOMINATION_SLACK * (1.0 + bound)
        status = "ok" if math.isfinite(bound) else "bound not informative"
        if not dominates:
            status = "error: bound violated"
    ratio = actual / bound if math.isfinite(bound) and bound > 0 else None
    return BoundReport(theorem, params, bound, actual, verdict, dominates, ratio,
                       (governed.a, governed.b), quad.simpson_value, quad.reference_value, status)


def _bound_value(theorem: Theorem, params: dict, iv: Interval, fa3: float, fb3: float) -> float:
    q = float(params.get("q", 1.0))
    if theorem is Theorem.A:
        return bound_sA(params["s"], iv, fa3, fb3)
    if theorem is Theorem.B:
        return bound_sB(params["s"], q, iv, fa3, fb3)
    if theorem is Theorem.C:
        return bound_sC(params["s"], q, iv, fa3, fb3)
    if theorem is Theorem.T2_1:
        return bound_h_L1(params["h"], iv, fa3, fb3)
    if theorem is Theorem.T2_2:
        return bound_h_holder(params["h"], q, iv, fa3, fb3)
    if theorem is Theorem.T2_3:
        return bound_h_powermean(params["h"], q, iv, fa3, fb3)
    if theorem is Theorem.T3_1:
        return bound_am_holder(params["alpha"], params["m"], q, iv, fa3, fb3)
    if theorem is Theorem.T3_2:
        return bound_am_powermean(params["alpha"], params["m"], q, iv, fa3, fb3)
    raise ValueError(f"no closed-form bound for {theorem}")


def bound_value(theorem, iv: Interval, fa3: float, fb3: float, **params) -> float:
    """Evaluate one theorem's bound from endpoint values of |f'''| alone."""
    theorem = Theorem(theorem)
    params = normalize_params(theorem, params)
    if theorem is Theorem.Classical:
        return classical_bound(params["sup_f4"], iv)
    return _bound_value(theorem, params, iv, fa3, fb3)
