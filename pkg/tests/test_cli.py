import json
import math
import struct
import subprocess
import sys

import pytest

from simpcert.cli import RunConfig, UsageError, main, parse_axis_values, run, sweep
from simpcert.report import format_float, loads_reports, reports_to_json


def call(capsys, *argv):
    status = main(list(argv))
    out, err = capsys.readouterr()
    return status, out, err


def bits(x):
    return struct.pack("<d", x)


def test_eval_T2_1_json(capsys):
    status, out, _ = call(capsys, "eval", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T2_1",
                          "--h", "t", "--format", "json")
    assert status == 0
    (rep,) = loads_reports(out)
    assert rep["theorem"] == "T2_1"
    assert rep["bound"] == pytest.approx(0.0208333, abs=1e-7)
    assert rep["actual_error"] == pytest.approx(0.0083333, abs=1e-7)
    assert rep["dominates"] is True
    assert rep["hypothesis"]["passed"] is True and rep["hypothesis"]["counterexample"] is None


def test_eval_classical_cubic(capsys):
    status, out, _ = call(capsys, "eval", "--f", "x^3", "--a", "0", "--b", "1", "--theorem", "Classical",
                          "--format", "json")
    assert status == 0
    (rep,) = loads_reports(out)
    assert rep["bound"] == 0.0 and abs(rep["actual_error"]) <= 1e-15
    assert rep["ratio"] is None


def test_eval_T3_1(capsys):
    status, out, _ = call(capsys, "eval", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T3_1",
                          "--alpha", "1", "--m", "1", "--q", "2", "--format", "json")
    assert status == 0
    (rep,) = loads_reports(out)
    assert rep["bound"] == pytest.approx(0.033327, abs=1e-6)


def test_eval_table(capsys):
    status, out, _ = call(capsys, "eval", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T2_1", "--h", "t")
    assert status == 0
    assert "T2_1" in out and "0.0208333" in out and "not falsified" in out


def test_falsified_hypothesis_exit_one(capsys):
    status, out, _ = call(capsys, "eval", "--f=-x^4", "--a", "0", "--b", "1", "--theorem", "T2_1",
                          "--h", "t^2", "--format", "json")
    assert status == 1
    (rep,) = loads_reports(out)
    assert rep["hypothesis"]["passed"] is False and rep["dominates"] is None
    assert set(rep["hypothesis"]["counterexample"]) >= {"x", "y", "t", "lhs", "rhs"}


def test_json_round_trip_bit_exact():
    _, reports = run(RunConfig("exp(x)*sin(x)", 0.2, 1.3, ["all"], h_source="t", s=0.5, q=2.0,
                               m=0.9, alpha=0.5))
    text = reports_to_json(reports)
    parsed = loads_reports(text)
    assert len(parsed) == len(reports) == 9
    for r, d in zip(reports, parsed):
        for key in ("bound", "actual_error", "ratio", "simpson_value", "reference_value"):
            v = getattr(r, key)
            if v is None:
                assert d[key] is None
            else:
                assert bits(d[key]) == bits(v)
        assert bits(d["hypothesis"]["slack_min"]) == bits(r.hypothesis.slack_min)


@pytest.mark.parametrize("x", [0.1, 1 / 3, 2 / 3, 1e-300, 5e-324, 1.7976931348623157e308, -0.0, 0.0208333333])
def test_float_format_round_trip(x):
    assert bits(float(format_float(x))) == bits(x)


def test_infinite_bound_serialised_as_string(capsys):
    status, out, _ = call(capsys, "eval", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T2_2",
                          "--h", "1/t", "--q", "2", "--format", "json")
    assert status == 0
    assert '"bound": "inf"' in out
    assert loads_reports(out)[0]["bound"] == math.inf
    json.loads(out)  # still standard JSON


def test_output_is_deterministic(capsys):
    argv = ["eval", "--f", "sin(x)*exp(-x) + x^4", "--a", "0.1", "--b", "1.1", "--h", "t", "--s", "0.5",
            "--q", "2", "--alpha", "0.5", "--m", "0.9", "--format", "json"]
    outputs = {call(capsys, *argv)[1] for _ in range(3)}
    assert len(outputs) == 1


def test_csv_format(capsys):
    status, out, _ = call(capsys, "eval", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T2_1",
                          "--theorem", "Classical", "--h", "t", "--format", "csv")
    assert status == 0
    assert "\r" not in out
    lines = out.splitlines()
    assert lines[0] == "theorem,params,bound,actual_error,passed,dominates,ratio,status"
    assert lines[1].startswith("T2_1,h=t,0.020833333333333") and lines[2].startswith("Classical,")


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    status, out, _ = call(capsys, "eval", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T2_1",
                          "--h", "t", "--format", "json", "--out", str(target))
    assert status == 0 and out == ""
    assert loads_reports(target.read_text())[0]["theorem"] == "T2_1"


def test_usage_errors_listed_together(capsys):
    status, _, err = call(capsys, "eval", "--f", "x^4 +", "--a", "1", "--b", "0", "--theorem", "T2_2",
                          "--theorem", "T3_1", "--grid-n", "8")
    assert status == 2
    for needle in ("--f:", "need a < b", "--h is required by T2_2", "--q is required by T2_2, T3_1",
                   "--alpha is required by T3_1", "--m is required by T3_1", "--grid-n"):
        assert needle in err
    assert "^" in err


def test_usage_error_bad_theorem_and_ranges(capsys):
    status, _, err = call(capsys, "eval", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T9",
                          "--theorem", "B", "--s", "2", "--q", "1")
    assert status == 2
    assert "unknown theorem 'T9'" in err and "--s must lie in (0, 1]" in err and "--q must exceed 1 for B" in err


def test_usage_error_from_argparse():
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--a", "0", "--b", "1"])
    assert exc.value.code == 2


def test_sweep_s_reduction(capsys):
    status, out, _ = call(capsys, "sweep", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "T2_1",
                          "--theorem", "A", "--h", "t^s", "--axis", "s", "--range", "0.1:1.0:0.1")
    assert status == 0
    lines = out.splitlines()
    assert lines[0] == "s,bound_T2_1,bound_A,actual_error,tightest"
    assert len(lines) == 11
    for line in lines[1:]:
        _, t21, a, _, _ = line.split(",")
        assert abs(float(t21) - float(a)) <= 1e-10 * float(a)


def test_sweep_q_collapse():
    status, header, rows = sweep(RunConfig("x^4", 0, 1, ["T2_3", "T2_1"], h_source="t"), "q", [1, 2, 4, 8])
    assert status == 0
    assert header == ["q", "bound_T2_3", "bound_T2_1", "actual_error", "tightest"]
    assert rows[0][1] == rows[0][2]
    assert [r[0] for r in rows] == [1, 2, 4, 8]


def test_sweep_alpha_moment_columns():
    values = [round(0.1 * k, 1) for k in range(11)]
    status, header, rows = sweep(RunConfig("x^4", 0, 1, ["T3_2"], m=1.0, q=2.0), "alpha", values)
    assert "left_moment_sum" in header and "right_moment_sum" in header
    li, ri = header.index("left_moment_sum"), header.index("right_moment_sum")
    for row in rows:
        assert abs(row[li] - 1 / 192) <= 1e-14 and abs(row[ri] - 1 / 192) <= 1e-14


def test_sweep_validation(capsys):
    status, _, err = call(capsys, "sweep", "--f", "x^4", "--a", "0", "--b", "1", "--theorem", "A",
                          "--axis", "s", "--values", "0.5,1.5")
    assert status == 2 and "s=1.5" in err
    with pytest.raises(ValueError):
        parse_axis_values(None, "1:0:0.1")
    with pytest.raises(ValueError):
        parse_axis_values(None, "0:1:-1")
    with pytest.raises(UsageError):
        sweep(RunConfig("x^4", 0, 1, ["A"]), "s", [])
    assert parse_axis_values("1, 2,4", None) == [1.0, 2.0, 4.0]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "simpcert", "eval", "--f", "x^4", "--a", "0", "--b", "1",
                           "--theorem", "Classical", "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.startswith("theorem,params")
