"""Weight functions h for h-convexity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .expr import Expr, evaluate, parse_expr, to_source

FAMILIES = ("power", "one", "reciprocal", "identity", "custom")


@dataclass(frozen=True)
class HSpec:
    """A positive weight h on (0, 1).

    ``power`` is t^s with s in (0, 1]; ``one`` is the constant 1 (P-functions);
    ``reciprocal`` is 1/t (Godunova-Levin); ``identity`` is t (ordinary
    convexity); ``custom`` carries an expression in ``t``.
    """

    family: str
    s: float | None = None
    expr: Expr | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown h family {self.family!r}")
        if self.family == "power":
            if self.s is None or not 0.0 < self.s <= 1.0:
                raise ValueError(f"power weight needs s in (0, 1], got {self.s!r}")
        if self.family == "custom":
            if self.expr is None:
                raise ValueError("custom weight needs an expression")
            probe = np.linspace(0.0, 1.0, 1025)[1:-1]
            vals = evaluate(self.expr, probe)
            if np.any(vals <= 0.0):
                bad = float(probe[np.argmax(vals <= 0.0)])
                raise ValueError(f"h must be positive on (0, 1); h({bad}) = {evaluate(self.expr, bad)}")

    @classmethod
    def power(cls, s: float) -> "HSpec":
        return cls("power", s=float(s))

    @classmethod
    def one(cls) -> "HSpec":
        return cls("one")

    @classmethod
    def reciprocal(cls) -> "HSpec":
        return cls("reciprocal")

    @classmethod
    def identity(cls) -> "HSpec":
        return cls("identity")

    @classmethod
    def custom(cls, source) -> "HSpec":
        expr = parse_expr(source, "t") if isinstance(source, str) else source
        return cls("custom", expr=expr)

    @classmethod
    def from_name(cls, name: str, s: float | None = None) -> "HSpec":
        """Builtin names ("t", "1", "1/t", "t^s", ...) or a custom expression in t."""
        key = name.strip().replace(" ", "").lower()
        if key in ("t", "identity", "convex"):
            return cls.identity()
        if key in ("1", "one", "p"):
            return cls.one()
        if key in ("1/t", "reciprocal", "godunova-levin", "q"):
            return cls.reciprocal()
        if key in ("t^s", "power", "t**s"):
            if s is None:
                raise ValueError("h=t^s requires a value for s")
            return cls.power(s)
        return cls.custom(name)

    @property
    def exponent(self) -> float | None:
        """The s with h(t) = t^s, when h belongs to the power family."""
        return {"power": self.s, "identity": 1.0, "one": 0.0, "reciprocal": -1.0}.get(self.family)

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        if self.family == "custom":
            out = evaluate(self.expr, arr)
        elif self.family == "one":
            out = np.ones_like(arr)
        else:
            with np.errstate(divide="ignore"):
                out = np.power(arr, self.exponent)
        return float(out) if np.ndim(out) == 0 else out

    def describe(self) -> str:
        if self.family == "power":
            return f"t^{self.s!r}"
        if self.family == "custom":
            return to_source(self.expr)
        return {"one": "1", "reciprocal": "1/t", "identity": "t"}[self.family]

    @property
    def singular_at_zero(self) -> bool:
        if self.family == "reciprocal":
            return True
        if self.family == "custom":
            try:
                return not math.isfinite(evaluate(self.expr, 0.0))
            except ArithmeticError:
                return True
        return False
