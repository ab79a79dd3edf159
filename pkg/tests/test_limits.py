import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracvel.exceptions import InsufficientDataError, ParameterError
from fracvel.limits import EpsLadder, Limit, aitken, classify, scale_estimate

EPS = EpsLadder().values()


def test_default_ladder():
    assert EPS.size == 16
    assert EPS[0] == 1e-2 and EPS[-1] == pytest.approx(1e-2 * 0.5**15)
    assert np.all(np.diff(EPS) < 0)


@pytest.mark.parametrize("kw", [dict(eps0=0), dict(ratio=1.0), dict(ratio=0), dict(count=3),
                                dict(count=4.5), dict(eps0=1e-10, count=16)])
def test_ladder_validation(kw):
    with pytest.raises(ParameterError):
        EpsLadder(**kw)


def test_ladder_parse_and_env():
    assert EpsLadder.parse("0.1, 0.25, 8") == EpsLadder(0.1, 0.25, 8)
    assert EpsLadder.from_env({"FRACVEL_LADDER": "0.05,0.5,10"}) == EpsLadder(0.05, 0.5, 10)
    assert EpsLadder.from_env({}) == EpsLadder()
    with pytest.raises(ParameterError):
        EpsLadder.parse("0.1,0.5")
    with pytest.raises(ParameterError):
        EpsLadder.parse("a,b,c")


def test_ladder_snaps_to_grid():
    vals = EpsLadder(0.06, 0.5, 8).values(step=0.01)
    np.testing.assert_allclose(vals, [0.06, 0.03, 0.02, 0.01])
    assert np.all(np.isclose(vals / 0.01, np.rint(vals / 0.01)))


@pytest.mark.parametrize("c", [1.0, -2.5, 1e-8, 3e5, -1j, 2 + 3j])
def test_constant_sequence_is_finite(c):
    est = classify(EPS, np.full(EPS.shape, c))
    assert est.classification is Limit.FINITE
    assert est.value == c


@given(st.floats(0.1, 2.0))
def test_power_laws(p):
    assert classify(EPS, EPS**p).classification is Limit.ZERO
    assert classify(EPS, EPS**-p).classification is Limit.DIVERGENT


def test_identically_zero_is_zero():
    est = classify(EPS, np.zeros_like(EPS))
    assert est.classification is Limit.ZERO and est.value is None


def test_alternating_signs_are_inconclusive():
    q = (-1.0) ** np.arange(EPS.size)
    assert classify(EPS, q).classification is Limit.INCONCLUSIVE


def test_noisy_power_law_with_poor_fit_is_inconclusive():
    rng = np.random.default_rng(0)
    q = EPS**0.5 * np.exp(rng.normal(0, 3, EPS.size))
    est = classify(EPS, q)
    assert est.r_squared < 0.98
    assert est.classification is Limit.INCONCLUSIVE


def test_too_few_usable_samples():
    q = np.zeros_like(EPS)
    q[:3] = 1.0
    q[3:] = np.nan
    with pytest.raises(InsufficientDataError):
        classify(EPS, q)


def test_sample_order_does_not_matter():
    q = 1 + EPS
    a, b = classify(EPS, q), classify(EPS[::-1], q[::-1])
    assert a.samples == b.samples and a.value == b.value


@given(st.floats(-10, 10), st.floats(0.1, 10), st.floats(0.2, 0.8))
def test_aitken_is_exact_on_geometric_tails(limit, c, r):
    s = [limit + c * r**k for k in range(3)]
    assert aitken(*s) == pytest.approx(limit, abs=1e-9 * (1 + abs(limit) + c))


def test_aitken_guards():
    assert aitken(1.0, 1.0, 1.0) == 1.0
    assert aitken(1.0, 2.0, 3.0) == 3.0  # not contracting


def test_sqrt_rate_tail_is_extrapolated():
    q = -1.0 + np.sqrt(EPS)
    est = classify(EPS, q)
    assert est.classification is Limit.FINITE
    assert abs(est.deepest + 1) > 1e-4
    assert abs(est.value + 1) < 1e-5


def test_scale_estimate():
    est = scale_estimate(classify(EPS, np.full(EPS.shape, 2.0)), -1j)
    assert est.value == -2j


def test_to_dict_shape():
    d = classify(EPS, np.full(EPS.shape, -1j)).to_dict()
    assert d["classification"] == "Finite"
    assert d["value"] == {"re": 0.0, "im": -1.0}
    assert set(d["samples"][0]) == {"eps", "re", "im"}
    d = classify(EPS, EPS).to_dict()
    assert d["value"] is None and set(d["samples"][0]) == {"eps", "re"}
    assert math.isfinite(d["slope"])
