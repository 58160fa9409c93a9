import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ggwb.calculus import ChartManifold
from ggwb.errors import ChartMismatchError, ExprError, ParseError
from ggwb.symexpr import (
    ScalarExpr,
    ZeroPolicy,
    canon,
    differentiate,
    evaluate,
    is_zero,
    parse_scalar,
    random_expr,
    _POLE,
)
from ggwb.verdict import VerdictKind


@pytest.fixture(scope="module")
def chart():
    return ChartManifold("test3", ["x", "y", "z"])


# -- parser -------------------------------------------------------------


def test_parse_literals_and_precedence(chart):
    e = parse_scalar("3/2*x^2 - 0.5 + 2*x*y", chart)
    x, y = chart.symbol("x"), chart.symbol("y")
    assert e.expr == sp.Rational(3, 2) * x**2 - sp.Rational(1, 2) + 2 * x * y


def test_parse_whitespace_insensitive(chart):
    assert parse_scalar(" sin( x ) *2", chart) == parse_scalar("2*sin(x)", chart)


def test_parse_unary_and_power(chart):
    e = parse_scalar("-x^2", chart)
    assert e.expr == -chart.symbol("x") ** 2
    e = parse_scalar("(1+x)^3", chart)
    assert e.expr == sp.expand((1 + chart.symbol("x")) ** 3)


def test_parse_functions(chart):
    e = parse_scalar("sin(x)*cos(y) + exp(z)", chart)
    assert e.expr.has(sp.sin, sp.cos, sp.exp)


def test_parse_error_positions(chart):
    with pytest.raises(ParseError) as err:
        parse_scalar("x + q", chart)
    assert "unknown symbol 'q'" in str(err.value)
    assert err.value.position == 4
    with pytest.raises(ParseError):
        parse_scalar("tan(x)", chart)
    with pytest.raises(ParseError):
        parse_scalar("x^y", chart)  # exponent must be an integer literal
    with pytest.raises(ParseError):
        parse_scalar("x + ", chart)
    with pytest.raises(ParseError):
        parse_scalar("1/(x-x)", chart)


# -- constructors and canonical form -------------------------------------


def test_rational_normal_form(chart):
    x = chart.symbol("x")
    e = ScalarExpr((x**2 - 1) / (x - 1) - x - 1, chart)
    assert e.is_syntactic_zero


def test_floats_rejected(chart):
    with pytest.raises(ExprError):
        ScalarExpr(0.5, chart)
    with pytest.raises(ExprError):
        chart.scalar("x") * 0.5


def test_noninteger_power_rejected(chart):
    with pytest.raises(ExprError):
        ScalarExpr(sp.sqrt(chart.symbol("x")), chart)


def test_zero_denominator_rejected(chart):
    x = chart.scalar("x")
    with pytest.raises(ExprError):
        x / (x - x)
    with pytest.raises(ExprError):
        1 / (x * 0)


def test_chart_mismatch(chart):
    other = ChartManifold("other", ["u"])
    with pytest.raises(ChartMismatchError):
        chart.scalar("x") + other.scalar("u")
    with pytest.raises(ChartMismatchError):
        ScalarExpr(other.symbols[0], chart)


def test_exp_atoms_combine_exactly(chart):
    e = chart.scalar("exp(z)") * chart.scalar("exp(-z)")
    assert e == 1


def test_conjugate(chart):
    e = chart.scalar("x") * sp.I + chart.scalar("sin(y)")
    assert e.conjugate().expr == -sp.I * chart.symbol("x") + sp.sin(chart.symbol("y"))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10**6))
def test_canon_idempotent_random(seed):
    chart = ChartManifold("test3", ["x", "y", "z"])
    rng = random.Random(seed)
    e = random_expr(chart, rng, max_depth=6)
    assert canon(e.expr) == e.expr


def test_canon_idempotent_bulk():
    """canon o canon = canon on 1e4 random expression trees of depth <= 8.

    A lean tree sampler (high leaf probability, bounded width) keeps the
    bulk run fast; the heavier-tree variant above covers size."""
    chart = ChartManifold("test3", ["x", "y", "z"])
    rng = random.Random(271828)

    def build(depth):
        if depth <= 0 or rng.random() < 0.45:
            if rng.random() < 0.5:
                return sp.Rational(rng.randint(-9, 9), rng.randint(1, 9))
            return rng.choice(chart.symbols)
        r = rng.random()
        if r < 0.35:
            return build(depth - 1) + build(depth - 1)
        if r < 0.6:
            return build(depth - 1) * rng.choice(chart.symbols)
        if r < 0.72:
            return -build(depth - 1)
        if r < 0.8:
            return build(depth - 1) ** rng.randint(2, 3)
        if r < 0.9:
            den = canon(build(depth - 1))
            if den == 0:
                den = 1 + rng.choice(chart.symbols) ** 2
            return build(depth - 1) / den
        fn = rng.choice((sp.sin, sp.cos, sp.exp))
        return fn(build(min(depth - 1, 2)))

    for _ in range(10_000):
        c = canon(build(rng.randint(0, 8)))
        assert canon(c) == c


# -- differentiation ------------------------------------------------------


def test_differentiate_table_rules(chart):
    assert differentiate(chart.scalar("x^2*y"), "x") == chart.scalar("2*x*y")
    assert differentiate(chart.scalar("sin(z)"), "z") == chart.scalar("cos(z)")
    t_chart = ChartManifold("line", ["t", "y"])
    e = differentiate(t_chart.scalar("exp(t)*y"), "t")
    assert e == t_chart.scalar("exp(t)*y")


def test_differentiate_unknown_symbol(chart):
    with pytest.raises(ChartMismatchError):
        differentiate(chart.scalar("x"), "w")


def test_differentiate_matches_finite_differences(chart):
    """Independent oracle: central differences at random rational points."""
    rng = random.Random(5)
    pol = ZeroPolicy(samples=4, seed=9)
    for _ in range(12):
        e = random_expr(chart, rng, max_depth=4, division=False)
        coord = rng.choice(chart.coords)
        de = differentiate(e, coord)
        pt = chart.sample_point(rng)
        h = Fraction(1, 10**6)
        up = dict(pt)
        dn = dict(pt)
        up[coord] += h
        dn[coord] -= h
        f_up, f_dn, d_val = evaluate(e, up), evaluate(e, dn), evaluate(de, pt)
        if _POLE in (f_up, f_dn, d_val):
            continue
        approx = (complex(f_up) - complex(f_dn)) / (2 * float(h))
        scale = max(1.0, abs(complex(d_val)))
        assert abs(approx - complex(d_val)) / scale < 1e-4


def test_leibniz_rule_property(chart):
    rng = random.Random(11)
    pol = ZeroPolicy(samples=8, seed=3)
    for _ in range(20):
        e = random_expr(chart, rng, max_depth=4)
        f = random_expr(chart, rng, max_depth=4)
        d = differentiate(e * f, "x") - differentiate(e, "x") * f - e * differentiate(f, "x")
        assert is_zero(d, pol).kind is not VerdictKind.FAILED


# -- the zero test --------------------------------------------------------


def test_is_zero_trivial_cases(chart):
    pol = ZeroPolicy(samples=16, seed=0)
    assert is_zero(chart.scalar("x - x"), pol).kind is VerdictKind.PROVED
    v = is_zero(chart.scalar("sin(x)^2 + cos(x)^2 - 1"), pol)
    assert v.kind is VerdictKind.NUMERIC
    v = is_zero(chart.scalar("x*y - y"), pol)
    assert v.kind is VerdictKind.FAILED
    point = dict(v.witness.point)
    assert point["x"] != 1  # witness must show x != 1


def test_is_zero_exact_rational_sampling(chart):
    # a rational function vanishing on a line but not identically: Failed
    pol = ZeroPolicy(samples=4, seed=1)
    v = is_zero(chart.scalar("x*(x-1)/(1+y^2)"), pol)
    assert v.kind is VerdictKind.FAILED
    assert isinstance(v.witness.value, Fraction)


def test_is_zero_deterministic(chart):
    pol = ZeroPolicy(samples=8, seed=42)
    v1 = is_zero(chart.scalar("x*y - y"), pol)
    v2 = is_zero(chart.scalar("x*y - y"), pol)
    assert v1.witness.point == v2.witness.point
    assert v1.witness.value == v2.witness.value


def test_is_zero_soundness(chart):
    """Proved expressions evaluate to exact zero at arbitrary points."""
    rng = random.Random(17)
    pol = ZeroPolicy(samples=4, seed=2)
    checked = 0
    for _ in range(40):
        e = random_expr(chart, rng, max_depth=4)
        f = random_expr(chart, rng, max_depth=4)
        d = (e + f) - f - e
        v = is_zero(d, pol)
        assert v.kind is VerdictKind.PROVED
        pt = chart.sample_point(rng)
        val = evaluate(d, pt)
        if val is not _POLE:
            assert complex(val) == 0
            checked += 1
    assert checked > 10


def test_pole_resampling(chart):
    # the first sample point of this policy seed is a pole of the expression
    pol = ZeroPolicy(samples=4, seed=7)
    first = chart.sample_point(pol.rng())
    x0 = first["x"]
    e = 1 / (chart.scalar("x") - x0)
    assert evaluate(e, first) is _POLE
    v = is_zero(e, pol)  # must resample past the pole, then fail
    assert v.kind is VerdictKind.FAILED


def test_pole_exhaustion():
    chart = ChartManifold("tiny", ["x"], ranges={"x": (Fraction(0), Fraction(1))})
    # every sample of x lands strictly inside (0, 1) at multiples of 1/194;
    # build an expression whose poles cover all of them
    num = sp.Integer(1)
    x = chart.symbol("x")
    den = sp.prod([x - sp.Rational(k, 194) for k in range(1, 194)])
    e = ScalarExpr(num / den, chart)
    pol = ZeroPolicy(samples=4, seed=0, max_resample=2)
    with pytest.raises(ExprError):
        is_zero(e, pol)


def test_verdict_aggregation_order():
    from ggwb.verdict import Verdict, combine

    worst = combine(Verdict.proved(), Verdict.numeric(), Verdict.failed("x"))
    assert worst.kind is VerdictKind.FAILED
    mid = combine(Verdict.proved(), Verdict.numeric())
    assert mid.kind is VerdictKind.NUMERIC
