"""JSON / CSV / table rendering of bound reports.

Floats are written with 17 significant digits so that parsing the output
reproduces every value bit for bit.
"""

from __future__ import annotations

import csv
import io
import json
import math

from .bounds import BoundReport
from .weights import HSpec


def format_float(x: float) -> str:
    return "%.17g" % x


def _number(x):
    """Encode a float, using "inf" / "-inf" strings and null for NaN."""
    if x is None:
        return None
    x = float(x)
    if math.isnan(x):
        return None
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _param_value(v):
    if isinstance(v, HSpec):
        return v.describe()
    if isinstance(v, float):
        return _number(v)
    return v


def report_to_dict(r: BoundReport) -> dict:
    cex = r.hypothesis.counterexample
    return {
        "theorem": str(r.theorem),
        "params": {k: _param_value(v) for k, v in sorted(r.params.items())},
        "bound": _number(r.bound),
        "actual_error": _number(r.actual_error),
        "hypothesis": {
            "passed": r.hypothesis.passed,
            "counterexample": None if cex is None else {k: _number(v) if k != "reason" else v
                                                        for k, v in cex.as_dict().items()},
            "class": r.hypothesis.hypothesis,
            "grid_density": r.hypothesis.grid_density,
            "slack_min": _number(r.hypothesis.slack_min),
        },
        "dominates": r.dominates,
        "ratio": _number(r.ratio),
        "interval": [_number(r.interval[0]), _number(r.interval[1])],
        "simpson_value": _number(r.simpson_value),
        "reference_value": _number(r.reference_value),
        "status": r.status,
    }


def _emit(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_emit(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _emit(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj, indent: int = 2) -> str:
    return _emit(obj, indent, 0) + "\n"


def reports_to_json(reports) -> str:
    return dumps_json([report_to_dict(r) for r in reports])


def loads_reports(text: str) -> list[dict]:
    """Parse JSON emitted by :func:`reports_to_json`; "inf" strings become math.inf."""
    data = json.loads(text)
    for d in data:
        for key in ("bound", "actual_error", "ratio"):
            if isinstance(d.get(key), str):
                d[key] = float(d[key])
        hyp = d.get("hypothesis", {})
        if isinstance(hyp.get("slack_min"), str):
            hyp["slack_min"] = float(hyp["slack_min"])
    return data


CSV_COLUMNS = ("theorem", "params", "bound", "actual_error", "passed", "dominates", "ratio", "status")


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        n = _number(v)
        return n if isinstance(n, str) else format_float(n)
    return str(v)


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in reports:
        params = ";".join(f"{k}={_csv_cell(_param_value(v))}" for k, v in sorted(r.params.items()))
        w.writerow([str(r.theorem), params, _csv_cell(r.bound), _csv_cell(r.actual_error),
                    _csv_cell(r.hypothesis.passed), _csv_cell(r.dominates), _csv_cell(r.ratio), r.status])
    return buf.getvalue()


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_csv_cell(v) for v in row])
    return buf.getvalue()


def _short(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, float):
        return "%.6g" % x
    return str(x)


def reports_to_table(reports) -> str:
    header = ("theorem", "bound", "actual", "ratio", "hypothesis", "dominates", "status")
    rows = [header]
    for r in reports:
        rows.append((str(r.theorem), _short(r.bound), _short(r.actual_error), _short(r.ratio),
                     r.hypothesis.status, _short(r.dominates), r.status))
    widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    lines.insert(1, "  ".join("-" * w for w in widths))
    for r in reports:
        cex = r.hypothesis.counterexample
        if cex is not None:
            lines.append(f"{r.theorem}: counterexample x={cex.x:.6g} y={cex.y:.6g} t={cex.t:.6g} "
                         f"lhs={cex.lhs:.6g} > rhs={cex.rhs:.6g}")
    return "\n".join(lines) + "\n"
