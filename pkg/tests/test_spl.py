import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nsmvc.spl import (
    SplSchedule,
    ViewPace,
    compute_beta,
    compute_exponents,
    compute_lambda,
    selection_weights,
)

from .oracles import conventional_weights

losses_st = arrays(
    np.float64,
    st.integers(1, 60),
    elements=st.floats(0, 1e6, allow_nan=False, allow_infinity=False),
)


@pytest.mark.parametrize("alpha, T, expected", [(0.5, 6, 0.1), (1.0, 4, 0.0), (0.3, 8, 0.1)])
def test_compute_beta(alpha, T, expected):
    assert compute_beta(alpha, T) == pytest.approx(expected, abs=1e-15)


def test_beta_single_round_is_zero():
    assert compute_beta(0.4, 1) == 0.0


@pytest.mark.parametrize("alpha, T", [(-0.1, 3), (1.2, 3), (0.5, 0), (0.5, 2.5)])
def test_schedule_rejects_bad_parameters(alpha, T):
    with pytest.raises(ValueError):
        compute_beta(alpha, T)
    with pytest.raises(ValueError):
        SplSchedule(alpha, T)


@pytest.mark.parametrize("alpha", [0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
@pytest.mark.parametrize("T", [2, 3, 4, 5, 6, 7, 8])
def test_schedule_reaches_one(alpha, T):
    s = SplSchedule(alpha, T)
    assert alpha + (T - 1) * s.beta == pytest.approx(1.0, abs=1e-12)
    assert s.fraction(T) == 1.0


def test_lambda_examples():
    losses = np.array([0.0, 3.0, 10.0, 7.0])
    s = SplSchedule(0.5, 6)
    assert compute_lambda(losses, s, 1) == pytest.approx(5.0)
    assert compute_lambda(losses, s, 6) == 10.0
    const = np.full(5, 2.5)
    assert all(compute_lambda(const, s, t) == 2.5 for t in range(1, 7))


def test_lambda_single_round_forces_max():
    losses = np.array([1.0, 4.0, 2.0])
    assert compute_lambda(losses, SplSchedule(0.3, 1), 1) == 4.0


def test_lambda_errors():
    s = SplSchedule(0.5, 3)
    with pytest.raises(ValueError):
        compute_lambda([], s, 1)
    with pytest.raises(ValueError):
        compute_lambda([1.0], s, 0)
    with pytest.raises(ValueError):
        compute_lambda([1.0], s, 4)


def test_selection_examples():
    assert selection_weights([1, 2, 3], 2).tolist() == [1, 1, 0]
    assert selection_weights([1, 2, 3], 3).tolist() == [1, 1, 1]
    assert selection_weights([1, 2, 3], 0).tolist() == [0, 0, 0]
    with pytest.raises(ValueError):
        selection_weights([-1.0, 2.0], 1.0)


def test_view_pace_count():
    pace = ViewPace(2.0, selection_weights([1, 2, 3, 0.5], 2.0), 0.5)
    assert pace.selected_count == 3


@pytest.mark.parametrize(
    "lambdas, expected",
    [([2, 4, 8], [1.0, 0.5, 0.25]), ([3, 3, 3], [1.0, 1.0, 1.0]), ([3, 6], [1.0, 0.5])],
)
def test_exponent_examples(lambdas, expected):
    np.testing.assert_allclose(compute_exponents(lambdas), expected, rtol=0, atol=1e-15)


def test_exponent_zero_lambda_guard():
    eta = compute_exponents([0.0, 2.0])
    assert eta[0] == 1.0
    assert 0 < eta[1] < 1e-11
    with pytest.raises(ValueError):
        compute_exponents([])


@settings(max_examples=200, deadline=None)
@given(losses_st, st.floats(0, 1), st.integers(1, 10))
def test_full_selection_at_last_round(losses, alpha, T):
    lam = compute_lambda(losses, SplSchedule(alpha, T), T)
    assert selection_weights(losses, lam).all()


@settings(max_examples=200, deadline=None)
@given(losses_st, st.floats(0, 1), st.floats(0, 1))
def test_selection_monotone_in_lambda(losses, a, b):
    lo, hi = sorted((a, b))
    lam_lo = np.min(losses) + lo * np.ptp(losses)
    lam_hi = np.min(losses) + hi * np.ptp(losses)
    assert np.all(selection_weights(losses, lam_lo) <= selection_weights(losses, lam_hi))


@settings(max_examples=200, deadline=None)
@given(losses_st, st.floats(0, 1e6))
def test_conventional_spl_equivalence(losses, lam):
    ours = selection_weights(losses, lam)
    oracle = conventional_weights(losses, lam)
    off = losses != lam
    np.testing.assert_array_equal(ours[off], oracle[off])
    assert ours[~off].all()


@settings(max_examples=200, deadline=None)
@given(arrays(np.float64, st.integers(1, 12), elements=st.floats(1e-6, 1e6)))
def test_exponent_bounds(lambdas):
    eta = compute_exponents(lambdas)
    assert np.all(eta > 0) and np.all(eta <= 1)
    assert np.all(eta[lambdas == lambdas.min()] == 1.0)
