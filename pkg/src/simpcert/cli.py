"""Command line front end: ``simpcert eval`` and ``simpcert sweep``.

Exit status: 0 when every hypothesis passed and every bound dominates the
true error, 1 when a hypothesis was falsified (or a bound was violated),
2 on usage and parse errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field

from .bounds import AM_THEOREMS, REQUIRED_PARAMS, STRICT_Q, Theorem, am_moment_integrals, certify
from .convexity import DEFAULT_GRID_N, DEFAULT_TOL
from .expr import ExprError, ExprSyntaxError, FunctionModel
from .quad import Interval, simpson_error
from .report import reports_to_csv, reports_to_json, reports_to_table, rows_to_csv
from .weights import HSpec

EXIT_OK, EXIT_HYPOTHESIS, EXIT_USAGE = 0, 1, 2
SWEEP_AXES = ("s", "q", "alpha", "m")


class UsageError(Exception):
    def __init__(self, problems):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


@dataclass
class RunConfig:
    f_source: str
    a: float
    b: float
    theorems: list = field(default_factory=lambda: ["all"])
    h_source: str | None = None
    s: float | None = None
    q: float | None = None
    m: float | None = None
    alpha: float | None = None
    grid_n: int = DEFAULT_GRID_N
    tol: float = DEFAULT_TOL
    format: str = "table"
    out: str | None = None

    def params(self) -> dict:
        return {"h": self.h_source, "s": self.s, "q": self.q, "m": self.m, "alpha": self.alpha}


def _syntax_message(label: str, err: ExprSyntaxError) -> str:
    caret = " " * len(err.source.encode("utf-8")[:err.offset].decode("utf-8", "ignore")) + "^"
    return f"{label}: {err}\n    {err.source}\n    {caret}"


def validate(cfg: RunConfig, free_params=()) -> tuple[FunctionModel, Interval, list[Theorem]]:
    """Check a RunConfig; every problem is collected before raising UsageError.

    ``free_params`` names parameters supplied later (by a sweep axis).
    """
    problems = []
    f = iv = None
    try:
        f = FunctionModel.parse(cfg.f_source, "x")
    except ExprSyntaxError as err:
        problems.append(_syntax_message("--f", err))
    except ExprError as err:
        problems.append(f"--f: {err}")
    for name in ("a", "b"):
        if not math.isfinite(getattr(cfg, name)):
            problems.append(f"--{name} must be finite")
    if not cfg.a < cfg.b:
        problems.append(f"need a < b, got a={cfg.a}, b={cfg.b}")
    else:
        iv = Interval(cfg.a, cfg.b)

    theorems = []
    for t in cfg.theorems or ["all"]:
        if t == "all":
            theorems.extend(Theorem)
            continue
        try:
            theorems.append(Theorem(t))
        except ValueError:
            problems.append(f"unknown theorem {t!r} (choose from {', '.join(x.value for x in Theorem)}, all)")
    theorems = list(dict.fromkeys(theorems))

    params = cfg.params()
    needed = {p for t in theorems for p in REQUIRED_PARAMS[t]}
    for p in sorted(needed):
        if params[p] is None and p not in free_params:
            users = ", ".join(t.value for t in theorems if p in REQUIRED_PARAMS[t])
            problems.append(f"--{p} is required by {users}")
    if cfg.s is not None and not 0.0 < cfg.s <= 1.0:
        problems.append(f"--s must lie in (0, 1], got {cfg.s}")
    if cfg.q is not None:
        strict = [t.value for t in theorems if t in STRICT_Q]
        if cfg.q < 1.0:
            problems.append(f"--q must be >= 1, got {cfg.q}")
        elif cfg.q == 1.0 and strict:
            problems.append(f"--q must exceed 1 for {', '.join(strict)}")
    if cfg.alpha is not None and not 0.0 <= cfg.alpha <= 1.0:
        problems.append(f"--alpha must lie in [0, 1], got {cfg.alpha}")
    if cfg.m is not None:
        if not 0.0 < cfg.m <= 1.0:
            problems.append(f"--m must lie in (0, 1], got {cfg.m}")
        elif any(t in AM_THEOREMS for t in theorems) and not cfg.a < cfg.m * cfg.b:
            problems.append(f"(alpha, m) theorems need a < m*b, got a={cfg.a}, m*b={cfg.m * cfg.b}")
    if any(t is not Theorem.Classical for t in theorems) and cfg.a < 0:
        problems.append(f"convexity-based theorems need a >= 0, got a={cfg.a}")
    if cfg.h_source is not None and "h" in needed:
        try:
            HSpec.from_name(cfg.h_source, cfg.s if cfg.s is not None else (0.5 if "s" in free_params else None))
        except ExprSyntaxError as err:
            problems.append(_syntax_message("--h", err))
        except (ExprError, ValueError) as err:
            problems.append(f"--h: {err}")
    if cfg.grid_n < 16:
        problems.append(f"--grid-n must be >= 16, got {cfg.grid_n}")
    if not cfg.tol >= 0:
        problems.append(f"--tol must be >= 0, got {cfg.tol}")
    if problems:
        raise UsageError(problems)
    return f, iv, theorems


def _params_for(theorem: Theorem, cfg_params: dict) -> dict:
    out = {k: cfg_params[k] for k in REQUIRED_PARAMS[theorem]}
    if "h" in out and cfg_params.get("s") is not None:
        out["s"] = cfg_params["s"]
    return out


def run(cfg: RunConfig):
    """Certify every selected theorem; returns (exit_status, reports)."""
    f, iv, theorems = validate(cfg)
    params = cfg.params()
    reports = [certify(f, iv, t, _params_for(t, params), cfg.grid_n, cfg.tol) for t in theorems]
    return _status(reports), reports


def _status(reports) -> int:
    if all(r.hypothesis.passed and r.dominates for r in reports):
        return EXIT_OK
    return EXIT_HYPOTHESIS


def render(reports, fmt: str) -> str:
    if fmt == "json":
        return reports_to_json(reports)
    if fmt == "csv":
        return reports_to_csv(reports)
    return reports_to_table(reports)


def parse_axis_values(values: str | None, range_spec: str | None) -> list[float]:
    if values:
        out = [float(v) for v in values.split(",") if v.strip()]
    elif range_spec:
        parts = [float(v) for v in range_spec.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"--range needs start:stop:step with step > 0, got {range_spec!r}")
        start, stop, step = parts
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        out = [round(start + i * step, 12) for i in range(max(n, 0))]
    else:
        out = []
    if not out:
        raise ValueError("sweep axis range is empty")
    return out


def sweep(cfg: RunConfig, axis: str, values: list[float]):
    """Certify the selected theorems at each axis value; returns (status, header, rows)."""
    if axis not in SWEEP_AXES:
        raise UsageError([f"sweep axis must be one of {', '.join(SWEEP_AXES)}, got {axis!r}"])
    if not values:
        raise UsageError(["sweep axis range is empty"])
    f, iv, theorems = validate(cfg, free_params=(axis,))
    problems = []
    for v in values:
        row_cfg = RunConfig(**{**cfg.__dict__, axis: v})
        try:
            validate(row_cfg)
        except UsageError as err:
            problems.extend(f"{axis}={v}: {p}" for p in err.problems)
    if problems:
        raise UsageError(problems)

    has_am = any(t in AM_THEOREMS for t in theorems)
    header = [axis] + [f"bound_{t.value}" for t in theorems] + ["actual_error"]
    if has_am:
        header.append("actual_error_am")
    if axis == "alpha" and Theorem.T3_2 in theorems:
        header += ["left_moment_sum", "right_moment_sum"]
    header.append("tightest")

    status = EXIT_OK
    rows = []
    for v in values:
        params = {**cfg.params(), axis: v}
        reports = [certify(f, iv, t, _params_for(t, params), cfg.grid_n, cfg.tol) for t in theorems]
        status = max(status, _status(reports))
        actual = next((r.actual_error for r in reports if r.theorem not in AM_THEOREMS), None)
        if actual is None:
            actual = simpson_error(f, iv).actual_error
        row = [v] + [r.bound for r in reports] + [actual]
        if has_am:
            row.append(next(r.actual_error for r in reports if r.theorem in AM_THEOREMS))
        if axis == "alpha" and Theorem.T3_2 in theorems:
            lt, lc, rt, rc = am_moment_integrals(v)
            row += [lt + lc, rt + rc]
        candidates = [r for r in reports if r.hypothesis.passed and math.isfinite(r.bound)]
        row.append(min(candidates, key=lambda r: r.bound).theorem.value if candidates else "")
        rows.append(row)
    return status, header, rows


# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--f", required=True, dest="f_source", help="integrand, an expression in x")
    p.add_argument("--a", required=True, type=float)
    p.add_argument("--b", required=True, type=float)
    p.add_argument("--h", dest="h_source", help="weight: t, 1, 1/t, t^s or an expression in t")
    p.add_argument("--s", type=float)
    p.add_argument("--q", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--theorem", action="append", dest="theorems",
                   help="theorem id (repeatable): " + ", ".join(t.value for t in Theorem) + " or all")
    p.add_argument("--grid-n", type=int, default=DEFAULT_GRID_N)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--out", help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="simpcert", description="Certify Simpson's rule error bounds.")
    sub = parser.add_subparsers(dest="command", required=True)
    ev = sub.add_parser("eval", help="certify one function against one or more theorems")
    _add_common(ev)
    ev.add_argument("--format", choices=("table", "json", "csv"), default="table")
    sw = sub.add_parser("sweep", help="tabulate bounds along one parameter axis (CSV)")
    _add_common(sw)
    sw.add_argument("--axis", required=True, choices=SWEEP_AXES)
    sw.add_argument("--values", help="comma separated axis values")
    sw.add_argument("--range", dest="range_spec", help="start:stop:step (inclusive)")
    return parser


def _write(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        f_source=args.f_source, a=args.a, b=args.b, theorems=args.theorems or ["all"],
        h_source=args.h_source, s=args.s, q=args.q, m=args.m, alpha=args.alpha,
        grid_n=args.grid_n, tol=args.tol, format=getattr(args, "format", "csv"), out=args.out,
    )
    try:
        if args.command == "eval":
            status, reports = run(cfg)
            _write(render(reports, cfg.format), cfg.out)
        else:
            try:
                values = parse_axis_values(args.values, args.range_spec)
            except ValueError as err:
                raise UsageError([str(err)]) from None
            status, header, rows = sweep(cfg, args.axis, values)
            _write(rows_to_csv(header, rows), cfg.out)
    except UsageError as err:
        for problem in err.problems:
            print(f"simpcert: error: {problem}", file=sys.stderr)
        return EXIT_USAGE
    except (ExprError, ArithmeticError, ValueError) as err:
        print(f"simpcert: error: {err}", file=sys.stderr)
        return EXIT_USAGE
    return status


if __name__ == "__main__":
    sys.exit(main())
