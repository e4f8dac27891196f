"""Acceptance criteria, one test group per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary lists
PASS or FAIL for every criterion.
"""

import math
import struct
import time
from fractions import Fraction

import mpmath
import pytest

from simpcert.bounds import (
    DOMINATION_SLACK, am_moment_integrals, bound_am_powermean, bound_am_powermean_assembled,
    bound_h_holder, bound_h_L1, bound_h_powermean, bound_sA, bound_sB, bound_sC, certify,
)
from simpcert.cli import main
from simpcert.convexity import AlphaMConvex, ConvexityHypothesis, HConvex, PFunction, check_hypothesis
from simpcert.expr import FunctionModel, parse_expr
from simpcert.quad import Interval, kernel_holder_integral, kernel_identity_sides
from simpcert.report import loads_reports, reports_to_json
from simpcert.weights import HSpec

UNIT = Interval(0.0, 1.0)


def criterion(number, title):
    return pytest.mark.criterion(number, title)


def rel(a, b):
    return abs(a - b) / max(abs(a), abs(b))


# 1 ---------------------------------------------------------------------------


def _exact_lhs(k, a, b, m):
    """Integral minus Simpson for x^k on [a, m b], in rationals."""
    a, mb = Fraction(a), Fraction(m) * Fraction(b)
    integral = (mb ** (k + 1) - a ** (k + 1)) / (k + 1)
    simpson = (mb - a) / 6 * (a**k + 4 * ((a + mb) / 2) ** k + mb**k)
    return integral - simpson


@criterion(1, "kernel identity residual <= 1e-8 for x^k, k=0..6, two intervals, three m; < 5 s")
def test_c1_kernel_identity():
    start = time.perf_counter()
    worst = 0.0
    for k in range(7):
        f = FunctionModel.parse(f"x^{k}")
        for a, b in ((0, 1), (1, 3)):
            for m in (0.5, 0.75, 1.0):
                lhs, rhs = kernel_identity_sides(f, Interval(a, b), m)
                exact = float(_exact_lhs(k, a, b, Fraction(m)))
                worst = max(worst, abs(lhs - rhs), abs(rhs - exact))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-8
    assert elapsed < 5.0


# 2 ---------------------------------------------------------------------------


@criterion(2, "Gamma closed form vs numeric kernel integral, relative <= 1e-10")
@pytest.mark.parametrize("p", [1, 1.25, 1.5, 2, 3, 5])
def test_c2_holder_closed_form(p):
    mpmath.mp.dps = 40
    half = mpmath.mpf(1) / 2
    numeric = mpmath.quad(lambda t: (t**2 * (half - t)) ** p, [0, half])
    assert rel(kernel_holder_integral(p), float(numeric)) <= 1e-10


# 3 ---------------------------------------------------------------------------


@criterion(3, "classical sharpness: x^4 on [0,1], actual = bound = 1/120, ratio 1 within 1e-12")
def test_c3_classical_sharpness():
    r = certify(FunctionModel.parse("x^4"), UNIT, "Classical")
    assert abs(r.actual_error - 1 / 120) <= 1e-12
    assert abs(r.bound - 1 / 120) <= 1e-12
    assert abs(r.ratio - 1.0) <= 1e-12


# 4 ---------------------------------------------------------------------------


@criterion(4, "h-convex L1 fixture: x^4, [0,1], h=t gives 1/48 within 1e-12 and dominates 1/120")
def test_c4_T2_1_fixture():
    r = certify(FunctionModel.parse("x^4"), UNIT, "T2_1", {"h": "t"})
    # analytic kernel integrals 1/640 + 7/1920 = 1/192, times 24/6
    assert abs(r.bound - 1 / 48) <= 1e-12
    assert abs(r.actual_error - 1 / 120) <= 1e-12
    assert r.hypothesis.passed and r.dominates


# 5 ---------------------------------------------------------------------------

S_GRID = [round(0.1 * k, 1) for k in range(1, 11)]


@criterion(5, "reductions: h=t^s bounds equal the s-convex closed forms, relative <= 1e-10")
@pytest.mark.parametrize("s", S_GRID)
def test_c5_reductions(s):
    iv, fa3, fb3 = Interval(0.25, 1.75), 1.3, 4.2
    h = HSpec.power(s)
    assert rel(bound_h_L1(h, iv, fa3, fb3), bound_sA(s, iv, fa3, fb3)) <= 1e-10
    for q in (1.5, 2.0, 4.0):
        assert rel(bound_h_holder(h, q, iv, fa3, fb3), bound_sB(s, q, iv, fa3, fb3)) <= 1e-10
        assert rel(bound_h_powermean(h, q, iv, fa3, fb3), bound_sC(s, q, iv, fa3, fb3)) <= 1e-10


# 6 ---------------------------------------------------------------------------


@criterion(6, "moment pairs sum to 1/192 within 1e-14; alpha=1 values (1/640, 7/1920, 7/1920, 1/640)")
def test_c6_moments():
    for k in range(11):
        lt, lc, rt, rc = am_moment_integrals(k / 10)
        assert abs(lt + lc - 1 / 192) <= 1e-14
        assert abs(rt + rc - 1 / 192) <= 1e-14
    expected = (1 / 640, 7 / 1920, 7 / 1920, 1 / 640)
    for got, want in zip(am_moment_integrals(1.0), expected):
        assert abs(got - want) <= 1e-14 * want


# 7 ---------------------------------------------------------------------------


@criterion(7, "power-mean (alpha,m) bound: /1152 form equals moment assembly, relative <= 1e-12")
def test_c7_two_constructions():
    iv, fa3, fb3 = Interval(0.2, 1.8), 2.5, 6.0
    for alpha in (0.0, 0.5, 1.0):
        for m in (0.5, 1.0):
            for q in (1.0, 2.0, 4.0):
                closed = bound_am_powermean(alpha, m, q, iv, fa3, fb3)
                assembled = bound_am_powermean_assembled(alpha, m, q, iv, fa3, fb3)
                assert rel(closed, assembled) <= 1e-12


# 8 ---------------------------------------------------------------------------

CORPUS = [
    ("x^4", 0, 2), ("x^5", 0, 2), ("x^6", 0, 2), ("x^4 + 2*x^5", 0, 2), ("x^6 - x^4", 1, 2),
    ("3*x^5 + x^4", 0.5, 1.5), ("exp(x)", 0, 1), ("exp(2*x)", 0.5, 2), ("x*exp(x)", 0, 1),
    ("x*exp(x)", 0.5, 2), ("sin(x)", 0.5, 1.2), ("sin(x)", 2.2, 2.8), ("exp(-x)", 0, 1), ("x^4", 1, 3),
]
PARAM_SETS = [
    ("Classical", {}), ("A", {"s": 0.5}), ("A", {"s": 1}), ("B", {"s": 0.5, "q": 2}),
    ("C", {"s": 1, "q": 3}), ("T2_1", {"h": "t"}), ("T2_1", {"h": "1"}), ("T2_2", {"h": "t", "q": 2}),
    ("T2_3", {"h": "1", "q": 4}), ("T3_1", {"alpha": 1, "m": 1, "q": 2}),
    ("T3_1", {"alpha": 0.5, "m": 0.8, "q": 2}), ("T3_2", {"alpha": 1, "m": 1, "q": 1}),
    ("T3_2", {"alpha": 0.5, "m": 0.9, "q": 3}),
]


@criterion(8, "domination corpus: >= 12 functions, every passing certificate dominates; < 30 s")
def test_c8_domination():
    start = time.perf_counter()
    certified = set()
    for src, a, b in CORPUS:
        f = FunctionModel.parse(src)
        for theorem, params in PARAM_SETS:
            r = certify(f, Interval(a, b), theorem, params)
            if r.hypothesis.passed:
                certified.add((src, a, b))
                assert r.actual_error <= r.bound + DOMINATION_SLACK * (1 + r.bound), (src, a, b, theorem)
    elapsed = time.perf_counter() - start
    assert len(certified) >= 12
    assert elapsed < 30.0


# 9 ---------------------------------------------------------------------------


@criterion(9, "convexity checker: -x^2 counterexample (slack <= -0.2); 24x passes three classes")
def test_c9_convexity_checker():
    concave = check_hypothesis(ConvexityHypothesis(HConvex(HSpec.identity()), parse_expr("-x^2"), UNIT))
    assert not concave.passed and concave.slack_min <= -0.2
    cex = concave.counterexample
    assert {cex.x, cex.y} == {0.0, 1.0} and abs(cex.t - 0.5) <= 1 / 63
    linear = parse_expr("24*x")
    for kind in (HConvex(HSpec.identity()), AlphaMConvex(1.0, 1.0), PFunction()):
        assert check_hypothesis(ConvexityHypothesis(kind, linear, UNIT)).passed


# 10 --------------------------------------------------------------------------


def _bits(x):
    return struct.pack("<d", x)


@criterion(10, "CLI: three eval commands give the fixture numbers and exit 0; JSON round-trips bit-exactly")
def test_c10_cli(capsys):
    commands = [
        (["--theorem", "T2_1", "--h", "t"], 1 / 48, 1e-12),
        (["--theorem", "Classical"], 0.0, 0.0),
        (["--theorem", "T3_1", "--alpha", "1", "--m", "1", "--q", "2"], 0.033327, 1e-6),
    ]
    for extra, bound, tol in commands:
        f = "x^3" if "Classical" in extra else "x^4"
        status = main(["eval", "--f", f, "--a", "0", "--b", "1", *extra, "--format", "json"])
        out = capsys.readouterr().out
        assert status == 0
        (rep,) = loads_reports(out)
        assert abs(rep["bound"] - bound) <= tol
        assert rep["dominates"] is True
        if "T2_1" in extra:
            assert abs(rep["actual_error"] - 1 / 120) <= 1e-12
        if "Classical" in extra:
            assert abs(rep["actual_error"]) <= 1e-15

    status = main(["eval", "--f=-x^4", "--a", "0", "--b", "1", "--theorem", "T2_1", "--h", "t^2",
                   "--format", "json"])
    capsys.readouterr()
    assert status == 1
    assert main(["eval", "--f", "x^4 +", "--a", "0", "--b", "1"]) == 2
    capsys.readouterr()

    reports = [certify(FunctionModel.parse("exp(x)*sin(x)"), Interval(0.2, 1.3), t, p)
               for t, p in PARAM_SETS]
    parsed = loads_reports(reports_to_json(reports))
    for r, d in zip(reports, parsed):
        for key in ("bound", "actual_error", "simpson_value", "reference_value"):
            assert _bits(d[key]) == _bits(getattr(r, key))
        if r.ratio is not None:
            assert _bits(d["ratio"]) == _bits(r.ratio)
        assert math.isfinite(d["bound"]) == math.isfinite(r.bound)
