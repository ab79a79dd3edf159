import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import covariation as oracle_covariation
from oracles import cusp_covariation

from fracvel.covar import (
    covariation, covariation_at, covariation_c1, covariation_direct, covariation_square,
)
from fracvel.exceptions import NotDifferentiableError
from fracvel.exprparse import parse
from fracvel.functions import Const, SampledSignal, X, make_cusp, sqrt
from fracvel.limits import EpsLadder, Limit

POOL = [parse(s) for s in ("x^2 - x", "3*x^3 + 1", "cusp(0.4, 0.1)", "cusp(0.7, -0.2)",
                            "sin(2*x)", "x + cusp(0.5, 0)", "cos(x) - x^2")]
fns = st.sampled_from(POOL)
xs = st.floats(-1, 1)
eps = st.floats(1e-6, 0.1)
orders = st.sampled_from([0.4, 0.5, 0.9, 1.0])
dirs = st.sampled_from(["plus", "minus"])
coef = st.floats(-10, 10).filter(lambda v: abs(v) > 1e-3)


def close(a, b, rel=1e-12):
    return abs(a - b) <= rel * max(abs(a), abs(b), 1e-300)


def rounding_bound(f, g, x, e, beta):
    """Error budget of a co-variation from rounding the function values.

    Differences of nearly equal values can lose every significant digit, so
    the budget scales with the values, not with the differences.
    """
    def span(h):
        return abs(h(x)) + abs(h(x + e)) + abs(h(x - e))

    def diff(h):
        return max(abs(h(x + e) - h(x)), abs(h(x) - h(x - e)))

    u = 8 * np.finfo(float).eps
    return (u * span(f) * (diff(g) + u * span(g)) + u * span(g) * diff(f)) / e**beta + 1e-300


@given(fns, fns, xs, eps, orders, dirs, coef, coef)
def test_scaling(f, g, x, e, beta, d, lam, mu):
    base = covariation_at(f, g, x, beta, e, d)
    scaled = covariation_at(lam * f, mu * g, x, beta, e, d)
    tol = 1e-12 * abs(lam * mu * base) + abs(lam * mu) * rounding_bound(f, g, x, e, beta)
    assert abs(scaled - lam * mu * base) <= tol


@given(fns, fns, fns, xs, eps, orders, dirs)
def test_additivity(f, h, g, x, e, beta, d):
    a, b = covariation_at(f, g, x, beta, e, d), covariation_at(h, g, x, beta, e, d)
    lhs = covariation_at(f + h, g, x, beta, e, d)
    tol = 1e-12 * (abs(a) + abs(b)) + rounding_bound(f + h, g, x, e, beta) \
        + rounding_bound(f, g, x, e, beta) + rounding_bound(h, g, x, e, beta)
    assert abs(lhs - (a + b)) <= tol


@given(fns, fns, xs, eps, orders, dirs)
def test_symmetry(f, g, x, e, beta, d):
    assert covariation_at(f, g, x, beta, e, d) == covariation_at(g, f, x, beta, e, d)


@given(fns, st.floats(-5, 5), xs, eps, orders, dirs)
def test_constants_annihilate(f, c, x, e, beta, d):
    assert covariation_at(f, Const(c), x, beta, e, d) == 0
    assert covariation_at(Const(c), f, x, beta, e, d) == 0


@given(fns, fns, xs, eps, orders, dirs)
def test_factorisation(f, g, x, e, beta, d):
    a = covariation_at(f, g, x, beta, e, d)
    b = covariation_direct(f, g, x, beta, e, d)
    assert close(a, b, 1e-13) or abs(a - b) < 1e-300


@given(fns, fns, xs, eps, orders, st.sampled_from([1, -1]))
def test_matches_plain_formula(f, g, x, e, beta, sign):
    d = "plus" if sign > 0 else "minus"
    want = oracle_covariation(f, g, x, beta, e, sign)
    assert close(covariation_at(f, g, x, beta, e, d), want, 1e-12) or abs(want) < 1e-300


def test_sqrt_quadratic_variation():
    assert covariation_square(sqrt(X), 0.0).value == 1.0
    assert covariation_square(sqrt(X), 0.0, direction="minus").value == pytest.approx(-1.0)
    assert covariation_square(sqrt(X), 2.0).classification is Limit.ZERO


ALPHAS = [round(0.2 + 0.1 * k, 1) for k in range(8)]


@pytest.mark.parametrize("a1", ALPHAS)
@pytest.mark.parametrize("a2", ALPHAS)
def test_region_grid(a1, a2):
    s = a1 + a2
    if 0.95 <= s <= 0.99 or 1.01 <= s <= 1.05:
        pytest.skip("inside the classifier band")
    want = cusp_covariation(a1, a2, 1.0, tol=0.01)
    for d in ("plus", "minus"):
        got = covariation(make_cusp(a1, 0.3), make_cusp(a2, 0.3), 0.3, 1.0, d)
        assert got.classification.value == want


@pytest.mark.parametrize("smooth", ["sin(x)", "x^2 + 1", "exp_free", "cos(3*x) * x"])
@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.6, 1.0])
@pytest.mark.parametrize("x", [0.0, 0.25, -0.6])
def test_c1_times_holder_vanishes(smooth, alpha, x):
    f = parse("1 / (1 + x^2)" if smooth == "exp_free" else smooth)
    g = make_cusp(alpha, 0.0)
    for d in ("plus", "minus"):
        assert covariation(f, g, x, 1.0, d).classification is Limit.ZERO


C1 = ["sin(x)", "x^2", "cos(x) * x", "1/(2 + x)", "x^3 - x", "sqrt(x + 2)"]


@pytest.mark.parametrize("fs", C1)
@pytest.mark.parametrize("gs", C1[::2])
@pytest.mark.parametrize("beta", [0.5, 1.0])
@pytest.mark.parametrize("d", ["plus", "minus"])
def test_c1_path_agrees(fs, gs, beta, d):
    f, g = parse(fs), parse(gs)
    a, b = covariation(f, g, 0.3, beta, d), covariation_c1(f, g, 0.3, beta, d)
    assert a.classification is b.classification
    if a.is_finite:
        assert a.value == pytest.approx(b.value, rel=1e-5)


def test_c1_path_refuses_cusps():
    with pytest.raises(NotDifferentiableError):
        covariation_c1(make_cusp(0.5), X, 0.0)


def test_sampled_pair_uses_shared_grid():
    step = 2.0**-10
    grid = np.arange(1025) * step
    f = SampledSignal(np.sqrt(np.abs(grid - 0.5)), step=step)
    est = covariation(f, f, 0.5, 1.0, "plus", EpsLadder(2.0**-4, 0.5, 6))
    assert est.value == pytest.approx(1.0, abs=1e-12)
    assert all(np.isclose(e / step, round(e / step)) for e in est.eps)


def test_report_carries_order():
    est = covariation(sqrt(X), sqrt(X), 0.0, 0.5)
    assert est.order_beta == 0.5 and est.to_dict()["beta"] == 0.5
