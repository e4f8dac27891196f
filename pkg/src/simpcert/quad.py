"""Simpson's rule, a Gauss-Kronrod reference integrator and the Simpson kernel."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .expr import DomainError, FunctionModel, evaluate
from .special import log_gamma

__all__ = [
    "Interval", "QuadratureResult", "IntegrationError",
    "simpson_estimate", "reference_integral", "integrate", "simpson_error",
    "kernel_p", "kernel_identity_sides", "verify_kernel_identity",
    "weighted_kernel_integral", "weight_integral", "kernel_holder_integral",
    "KERNEL_MASS",
]

# Kronrod 15 / Gauss 7 abscissae and weights on [-1, 1] (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]
GAUSS_WEIGHTS[[9, 11, 13]] = _WG[2::-1]

MAX_PANELS = 1_000_000
MAX_DEPTH = 200
_EPS = np.finfo(float).eps

#: integral of t^2 (1/2 - t) over [0, 1/2]
KERNEL_MASS = 1.0 / 192.0


class IntegrationError(ArithmeticError):
    """The adaptive integrator could not reach the requested tolerance."""


@dataclass(frozen=True)
class Interval:
    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError(f"interval endpoints must be finite, got [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise ValueError(f"interval requires a < b, got [{self.a}, {self.b}]")

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def scaled(self, m: float) -> "Interval":
        """The interval [a, m*b] governed by the (alpha, m) estimates."""
        return Interval(self.a, m * self.b)

    def __iter__(self):
        yield self.a
        yield self.b


@dataclass(frozen=True)
class QuadratureResult:
    simpson_value: float
    reference_value: float
    reference_abs_error_estimate: float
    actual_error: float


def _as_callable(f) -> Callable:
    if isinstance(f, FunctionModel):
        return f
    if callable(f):
        return f
    return lambda x: evaluate(f, x)


def simpson_estimate(f, iv: Interval) -> float:
    """Three-point Simpson rule (b-a)/6 [f(a) + 4 f(mid) + f(b)]."""
    g = _as_callable(f)
    a, b = iv.a, iv.b
    return (b - a) / 6.0 * (float(g(a)) + 4.0 * float(g(0.5 * (a + b))) + float(g(b)))


def _panel(g, lo, hi):
    half = 0.5 * (hi - lo)
    center = 0.5 * (hi + lo)
    y = np.asarray(g(center + half * NODES), dtype=float)
    if y.shape != NODES.shape:
        y = np.broadcast_to(y, NODES.shape)
    if not np.all(np.isfinite(y)):
        raise DomainError("integrand is not finite", float(center + half * NODES[np.argmin(np.isfinite(y))]))
    k = half * float(KRONROD_WEIGHTS @ y)
    gs = half * float(GAUSS_WEIGHTS @ y)
    resabs = abs(half) * float(KRONROD_WEIGHTS @ np.abs(y))
    return k, abs(k - gs), resabs


def integrate(g: Callable, a: float, b: float, tol: float = 1e-12,
              points: Iterable[float] = ()) -> tuple[float, float]:
    """Globally adaptive G7/K15 quadrature of a vectorised callable.

    Returns ``(value, abs_error_estimate)``.  Only interior nodes are sampled,
    so integrable endpoint singularities are tolerated.  The error target is
    ``max(tol, 50 eps * integral of |g|)``.
    """
    cuts = sorted({a, b, *(p for p in points if a < p < b)})
    heap = []
    total = {}
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        total[(lo, hi)] = _panel(g, lo, hi)
        heapq.heappush(heap, (-total[(lo, hi)][1], lo, hi, 0))
    err_sum = math.fsum(v[1] for v in total.values())
    abs_sum = math.fsum(v[2] for v in total.values())
    while err_sum > max(tol, 50.0 * _EPS * abs_sum):
        if len(total) >= MAX_PANELS or heap[0][3] >= MAX_DEPTH:
            raise IntegrationError(
                f"no convergence on [{a}, {b}]: error estimate {err_sum:.3g} > {tol:.3g} "
                f"after {len(total)} panels (singular integrand?)")
        _, lo, hi, depth = heapq.heappop(heap)
        _, old_err, old_abs = total.pop((lo, hi))
        err_sum -= old_err
        abs_sum -= old_abs
        mid = 0.5 * (lo + hi)
        for sub in ((lo, mid), (mid, hi)):
            total[sub] = res = _panel(g, *sub)
            err_sum += res[1]
            abs_sum += res[2]
            heapq.heappush(heap, (-res[1], sub[0], sub[1], depth + 1))
        if err_sum <= max(tol, 50.0 * _EPS * abs_sum):
            # guard against drift in the running sums
            err_sum = math.fsum(v[1] for v in total.values())
            abs_sum = math.fsum(v[2] for v in total.values())
    value = math.fsum(v[0] for v in total.values())
    return value, err_sum


def reference_integral(f, iv: Interval, tol: float = 1e-12, points: Iterable[float] = ()) -> float:
    """High-accuracy integral of ``f`` over ``iv`` (oracle for Simpson errors)."""
    if not 1e-14 <= tol <= 1e-6:
        raise ValueError(f"tol must lie in [1e-14, 1e-6], got {tol!r}")
    value, _ = integrate(_as_callable(f), iv.a, iv.b, tol, points)
    return value


def simpson_error(f, iv: Interval, tol: float = 1e-12) -> QuadratureResult:
    g = _as_callable(f)
    simpson = simpson_estimate(g, iv)
    ref, err = integrate(g, iv.a, iv.b, tol)
    return QuadratureResult(simpson, ref, err, abs(ref - simpson))


# ---------------------------------------------------------------------------
# kernel


def kernel_p(t):
    """Piecewise-cubic Simpson kernel on [0, 1]; accepts floats or arrays."""
    arr = np.asarray(t, dtype=float)
    if np.any((arr < 0.0) | (arr > 1.0)) or np.any(np.isnan(arr)):
        raise ValueError("kernel_p is defined on [0, 1] only")
    left = arr * arr * (arr - 0.5) / 6.0
    right = (arr - 1.0) ** 2 * (arr - 0.5) / 6.0
    out = np.where(arr <= 0.5, left, right)
    return float(out) if out.ndim == 0 else out


def kernel_identity_sides(f: FunctionModel, iv: Interval, m: float = 1.0,
                          tol: float = 1e-12) -> tuple[float, float]:
    """Both sides of the kernel representation of the Simpson error on [a, m b].

    left  = integral of f over [a, mb] minus Simpson's rule there
    right = (mb - a)^4 * integral over [0, 1] of p(t) f'''(t a + m (1 - t) b)
    """
    if not 0.0 < m <= 1.0:
        raise ValueError(f"m must lie in (0, 1], got {m!r}")
    a, b = iv.a, iv.b
    mb = m * b
    if not a < mb:
        raise ValueError(f"kernel identity requires a < m*b, got a={a}, m*b={mb}")
    sub = Interval(a, mb)
    lhs = reference_integral(f, sub, tol) - simpson_estimate(f, sub)
    f3 = f.derivative(3)

    def integrand(t):
        return kernel_p(t) * evaluate(f3, t * a + m * (1.0 - t) * b)

    rhs = (mb - a) ** 4 * reference_integral(integrand, Interval(0.0, 1.0), tol, points=(0.5,))
    return lhs, rhs


def verify_kernel_identity(f: FunctionModel, iv: Interval, m: float = 1.0) -> float:
    """Residual |lhs - rhs| of the kernel identity; both sides at tol 1e-12."""
    lhs, rhs = kernel_identity_sides(f, iv, m)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# weighted kernel integrals

SINGULAR_EPS = 1e-12


def _singular_at_zero(w) -> bool:
    try:
        v = w(np.array([0.0]))
    except (DomainError, ZeroDivisionError, FloatingPointError):
        return True
    return not np.all(np.isfinite(v))


def weighted_kernel_integral(h, side: str = "t") -> float:
    """Integral over [0, 1/2] of t^2 (1/2 - t) h(t) (side "t") or h(1 - t) (side "1-t").

    ``h`` is an :class:`~simpcert.weights.HSpec` or a vectorised callable.
    """
    if side not in ("t", "1-t"):
        raise ValueError(f"side must be 't' or '1-t', got {side!r}")
    hf = h if callable(h) else h.__call__
    if side == "t":
        w = hf
    else:
        def w(t):
            return hf(1.0 - np.asarray(t, dtype=float))

    def g(t):
        t = np.asarray(t, dtype=float)
        return t * t * (0.5 - t) * w(t)

    lo = 0.0
    tail = 0.0
    if _singular_at_zero(w):
        # integrand extends continuously to 0; trapezoid tail on [0, eps]
        lo = SINGULAR_EPS
        g_eps = float(g(np.array([SINGULAR_EPS]))[0])
        if not abs(g_eps) < 1e-6:
            raise IntegrationError("weighted kernel integrand does not vanish at 0; integral diverges")
        tail = 0.5 * SINGULAR_EPS * g_eps
    value, _ = integrate(g, lo, 0.5, 1e-12)
    return value + tail


def weight_integral(h, side: str = "t") -> float:
    """Integral over [0, 1/2] of h(t) (side "t") or h(1 - t) (side "1-t").

    Returns ``math.inf`` when the integral diverges.
    """
    if side not in ("t", "1-t"):
        raise ValueError(f"side must be 't' or '1-t', got {side!r}")
    hf = h if callable(h) else h.__call__
    if side == "t":
        w = hf
    else:
        def w(t):
            return hf(1.0 - np.asarray(t, dtype=float))
    try:
        value, _ = integrate(w, 0.0, 0.5, 1e-12)
    except IntegrationError:
        return math.inf
    return value


def kernel_holder_integral(p: float) -> float:
    """Closed form of the integral over [0, 1/2] of (t^2 (1/2 - t))^p.

    Gamma(2p+1) Gamma(p+1) / (2^(3p+1) Gamma(3p+2)), assembled in log space.
    """
    p = float(p)
    if not math.isfinite(p) or p < 1.0:
        raise ValueError(f"p must be finite and >= 1, got {p!r}")
    return math.exp(log_gamma(2 * p + 1) + log_gamma(p + 1) - log_gamma(3 * p + 2)
                    - (3 * p + 1) * math.log(2.0))
