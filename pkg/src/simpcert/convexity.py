"""Grid falsification of generalised convexity classes.

A verdict that passes means "not falsified on this grid", never a proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .expr import DomainError, Expr, evaluate
from .quad import Interval
from .weights import HSpec

DEFAULT_GRID_N = 64
DEFAULT_TOL = 1e-9


# Each class maps (x, y, t) to the point tx + c(1-t)y and the two weights of the
# defining inequality f(point) <= wx(t) f(x) + wy(t) f(y).

@dataclass(frozen=True)
class GodunovaLevin:
    open_t = True
    nonnegative = True
    scale = 1.0

    def weights(self, t):
        return 1.0 / t, 1.0 / (1.0 - t)


@dataclass(frozen=True)
class PFunction:
    open_t = False
    nonnegative = True
    scale = 1.0

    def weights(self, t):
        one = np.ones_like(t)
        return one, one


@dataclass(frozen=True)
class SConvex:
    """s-convex in the second sense."""

    s: float
    open_t = False
    nonnegative = True
    scale = 1.0

    def __post_init__(self):
        if not 0.0 < self.s <= 1.0:
            raise ValueError(f"s must lie in (0, 1], got {self.s!r}")

    def weights(self, t):
        return np.power(t, self.s), np.power(1.0 - t, self.s)


@dataclass(frozen=True)
class HConvex:
    h: HSpec
    open_t = False
    nonnegative = True
    scale = 1.0

    def __post_init__(self):
        if self.h.singular_at_zero:
            object.__setattr__(self, "open_t", True)

    def weights(self, t):
        return self.h(t), self.h(1.0 - t)


@dataclass(frozen=True)
class MConvex:
    m: float
    open_t = False
    nonnegative = False

    def __post_init__(self):
        if not 0.0 <= self.m <= 1.0:
            raise ValueError(f"m must lie in [0, 1], got {self.m!r}")

    @property
    def scale(self):
        return self.m

    def weights(self, t):
        return t, self.m * (1.0 - t)


@dataclass(frozen=True)
class AlphaMConvex:
    alpha: float
    m: float
    open_t = False
    nonnegative = False

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not 0.0 <= self.m <= 1.0:
            raise ValueError(f"m must lie in [0, 1], got {self.m!r}")

    @property
    def scale(self):
        return self.m

    def weights(self, t):
        ta = np.power(t, self.alpha)
        return ta, self.m * (1.0 - ta)


ConvexityKind = GodunovaLevin | PFunction | SConvex | HConvex | MConvex | AlphaMConvex


@dataclass(frozen=True)
class ConvexityHypothesis:
    kind: ConvexityKind
    target: Expr | Callable
    domain: Interval

    def evaluate_target(self, x):
        if callable(self.target):
            out = np.asarray(self.target(x), dtype=float)
            if not np.all(np.isfinite(out)):
                bad = np.ravel(np.asarray(x, dtype=float))[np.argmin(np.isfinite(np.ravel(out)))]
                raise DomainError("target is not finite", float(bad))
            return out
        return evaluate(self.target, x)


@dataclass(frozen=True)
class Counterexample:
    x: float
    y: float
    t: float
    lhs: float
    rhs: float
    reason: str = "inequality"

    def as_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "t": self.t, "lhs": self.lhs, "rhs": self.rhs,
                "reason": self.reason}


@dataclass(frozen=True)
class ConvexityVerdict:
    passed: bool
    counterexample: Counterexample | None
    grid_density: int
    slack_min: float
    hypothesis: str = ""
    notes: tuple = field(default=())

    def __post_init__(self):
        if self.passed != (self.counterexample is None):
            raise ValueError("passed must be equivalent to the absence of a counterexample")

    @property
    def status(self) -> str:
        return "not falsified" if self.passed else "falsified"


def symmetric_grid(n: int, open_ends: bool = False) -> np.ndarray:
    """Points of [0, 1] (or of (0, 1)) closed under t -> 1 - t exactly.

    Values are snapped to multiples of 2**-52 so that 1 - t is exact.
    """
    if open_ends:
        raw = np.arange(1, n + 1) / (n + 1)
    else:
        raw = np.arange(n) / (n - 1)
    grid = np.round(raw * 2.0**52) / 2.0**52
    half = len(grid) // 2
    grid[len(grid) - half:] = 1.0 - grid[:half][::-1]
    return grid


def describe(kind) -> str:
    name = type(kind).__name__
    if isinstance(kind, SConvex):
        return f"{name}(s={kind.s!r})"
    if isinstance(kind, HConvex):
        return f"{name}(h={kind.h.describe()})"
    if isinstance(kind, MConvex):
        return f"{name}(m={kind.m!r})"
    if isinstance(kind, AlphaMConvex):
        return f"{name}(alpha={kind.alpha!r}, m={kind.m!r})"
    return name


def check_hypothesis(hyp: ConvexityHypothesis, grid_n: int = DEFAULT_GRID_N,
                     tol: float = DEFAULT_TOL, x_grid=None, t_grid=None) -> ConvexityVerdict:
    """Test the defining inequality of ``hyp.kind`` on an (x, y, t) grid.

    ``x`` and ``y`` share one grid over the domain.  A triple violates the
    inequality when ``rhs - lhs < -tol * max(1, |lhs|, |rhs|)``; the worst one
    (ties broken by the smallest (x, y, t)) becomes the counterexample.  Classes that require a non-negative function also fail
    when the target dips below ``-tol`` at a grid point.
    """
    if grid_n < 16:
        raise ValueError(f"grid_n must be at least 16, got {grid_n}")
    kind = hyp.kind
    a, b = hyp.domain.a, hyp.domain.b
    xs = np.linspace(a, b, grid_n) if x_grid is None else np.asarray(x_grid, dtype=float)
    ts = symmetric_grid(grid_n, kind.open_t) if t_grid is None else np.asarray(t_grid, dtype=float)

    fx = hyp.evaluate_target(xs)
    with np.errstate(divide="ignore", invalid="ignore"):
        wx, wy = kind.weights(ts)
    wx = np.broadcast_to(wx, ts.shape)
    wy = np.broadcast_to(wy, ts.shape)

    X = xs[:, None, None]
    Y = xs[None, :, None]
    T = ts[None, None, :]
    points = T * X + kind.scale * (1.0 - T) * Y
    lhs = hyp.evaluate_target(points)
    rhs = wx[None, None, :] * fx[:, None, None] + wy[None, None, :] * fx[None, :, None]
    slack = rhs - lhs
    label = describe(kind)

    # rounding in lhs and rhs grows with their size, so violations are measured
    # relative to max(1, |lhs|, |rhs|)
    scale = np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    slack_min = float(np.min(slack))
    idx = int(np.argmin(slack / scale))
    i, j, k = np.unravel_index(idx, slack.shape)
    if slack[i, j, k] < -tol * scale[i, j, k]:
        cex = Counterexample(float(xs[i]), float(xs[j]), float(ts[k]),
                             float(lhs[i, j, k]), float(rhs[i, j, k]))
        return ConvexityVerdict(False, cex, grid_n, slack_min, label)

    if kind.nonnegative and np.min(fx) < -tol:
        i = int(np.argmin(fx))
        v = float(fx[i])
        cex = Counterexample(float(xs[i]), float(xs[i]), math.nan, v, 0.0, reason="negative value")
        return ConvexityVerdict(False, cex, grid_n, slack_min, label)

    return ConvexityVerdict(True, None, grid_n, slack_min, label)


_PROBE_ORDER = ("identity", "one", "reciprocal", "power")


def class_inclusion_probe(target, domain: Interval, grid_n: int = DEFAULT_GRID_N,
                          tol: float = DEFAULT_TOL, s: float = 0.5) -> dict:
    """Run the h-convexity check for h in {t, 1, 1/t, t^s} and the named classes.

    Returns a mapping from class label to its verdict.
    """
    kinds = {
        "SX(h=t)": HConvex(HSpec.identity()),
        "SX(h=1)": HConvex(HSpec.one()),
        "SX(h=1/t)": HConvex(HSpec.reciprocal()),
        f"SX(h=t^{s})": HConvex(HSpec.power(s)),
        "Q(I)": GodunovaLevin(),
        "P(I)": PFunction(),
        f"K_{s}^2": SConvex(s),
    }
    return {label: check_hypothesis(ConvexityHypothesis(kind, target, domain), grid_n, tol)
            for label, kind in kinds.items()}
