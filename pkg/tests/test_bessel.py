import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings, strategies as st
from scipy import integrate, special

from maasslab.core.errors import DomainError, TransitionZoneError
from maasslab.models.bessel import RegimeTag
from maasslab.services.bessel import (
    SQRT_2PI,
    classify_regime,
    debye_polynomials,
    phase_H,
    phase_H_array,
    scaled_K,
    scaled_K_array,
    scaled_K_asymptotic,
    scaled_K_oracle,
    transition_bound,
)


def _direct_integral(r: float, u: float) -> float:
    """e^{pi r/2} int_0^inf e^{-u cosh s} cos(r s) ds by scipy quad"""
    value, _ = integrate.quad(
        lambda s: math.exp(-u * math.cosh(s)) * math.cos(r * s), 0.0, 12.0,
        limit=400, epsabs=1e-15, epsrel=1e-12,
    )
    return math.exp(0.5 * math.pi * r) * value


def test_phase_vanishes_at_turning_point():
    assert phase_H(1.0) == 0.0


def test_phase_matches_closed_forms_away_from_one():
    for xi in (0.1, 0.3, 0.7):
        expected = math.acosh(1.0 / xi) - math.sqrt(1.0 - xi * xi)
        assert phase_H(xi) == pytest.approx(expected, rel=1e-13)
    for xi in (1.5, 2.0, 10.0):
        expected = math.sqrt(xi * xi - 1.0) - math.acos(1.0 / xi)
        assert phase_H(xi) == pytest.approx(expected, rel=1e-13)


def test_phase_series_is_continuous_across_switch():
    # alpha = 0.1 and beta = 0.1 sit exactly at the switch between series and closed form
    below = 1.0 / math.cosh(0.1)
    above = 1.0 / math.cos(0.1)
    for xi in (below, above):
        values = phase_H_array(np.array([xi * (1 - 1e-12), xi, xi * (1 + 1e-12)]))
        assert np.ptp(values) < 1e-12


def test_phase_rejects_non_positive_argument():
    with pytest.raises(DomainError):
        phase_H(0.0)
    with pytest.raises(DomainError):
        phase_H_array(np.array([0.5, -1.0]))


@given(st.floats(min_value=1e-3, max_value=0.999), st.floats(min_value=1e-4, max_value=0.5))
@hyp_settings(max_examples=200, deadline=None)
def test_phase_decreases_then_increases(xi, step):
    assert phase_H(xi) >= phase_H(min(xi + step, 1.0)) >= 0.0
    assert phase_H(1.0 + xi) <= phase_H(1.0 + xi + step)


def test_regime_classification_uses_cube_root_zone():
    width = 3.0 * 100.0 ** (1.0 / 3.0)
    assert classify_regime(100.0, 100.0 - width - 0.01).tag == RegimeTag.OSCILLATORY
    assert classify_regime(100.0, 100.0 - width + 0.01).tag == RegimeTag.TRANSITION
    assert classify_regime(100.0, 100.0).tag == RegimeTag.TRANSITION
    assert classify_regime(100.0, 100.0 + width + 0.01).tag == RegimeTag.EXPONENTIAL
    assert classify_regime(100.0, 50.0).cutoff == 3.0


def test_regime_rejects_bad_arguments():
    with pytest.raises(DomainError):
        classify_regime(-1.0, 1.0)
    with pytest.raises(DomainError):
        classify_regime(10.0, 0.0)


def test_debye_polynomials_low_orders():
    U = debye_polynomials(2)
    p = np.linspace(0.0, 3.0, 7)
    np.testing.assert_allclose(U[0](p), 1.0)
    np.testing.assert_allclose(U[1](p), (3.0 * p - 5.0 * p ** 3) / 24.0, atol=1e-15)
    np.testing.assert_allclose(
        U[2](p), (81.0 * p ** 2 - 462.0 * p ** 4 + 385.0 * p ** 6) / 1152.0, rtol=1e-13, atol=1e-15,
    )


def test_oracle_agrees_with_direct_quadrature_at_small_order():
    for r, u in ((5.0, 3.0), (5.0, 12.0), (2.0, 0.5)):
        assert scaled_K_oracle(r, u) == pytest.approx(_direct_integral(r, u), rel=1e-8, abs=1e-14)


def test_zero_order_is_macdonald_k0():
    assert scaled_K(0.0, 1.0).value == pytest.approx(special.k0(1.0), rel=1e-10)
    assert scaled_K(0.0, 1.0).value == pytest.approx(0.42102443824070834, rel=1e-10)


@pytest.mark.parametrize("r, ratio", [(20.0, 0.3), (50.0, 0.5), (50.0, 1.6), (120.0, 0.4), (150.0, 1.3)])
def test_dispatch_agrees_with_oracle(r, ratio):
    u = r * ratio
    evaluation = scaled_K(r, u)
    assert evaluation.terms_used > 0
    oracle = scaled_K_oracle(r, u)
    allowed = max(evaluation.error_estimate, 1e-6 * abs(oracle), 1e-14)
    assert abs(evaluation.value - oracle) <= allowed


def test_transition_zone_uses_oracle():
    evaluation = scaled_K(80.0, 80.0)
    assert evaluation.regime.tag == RegimeTag.TRANSITION
    assert evaluation.terms_used == 0
    assert abs(evaluation.value) <= transition_bound(80.0)


def test_asymptotic_refuses_transition_zone():
    with pytest.raises(TransitionZoneError):
        scaled_K_asymptotic(100.0, 101.0, 3)


def test_asymptotic_more_terms_tighten_estimate():
    coarse = scaled_K_asymptotic(100.0, 40.0, 1)
    fine = scaled_K_asymptotic(100.0, 40.0, 4)
    assert fine.error_estimate < coarse.error_estimate
    assert abs(fine.value - coarse.value) <= coarse.error_estimate


def test_oscillatory_values_respect_amplitude_envelope(rng):
    for _ in range(50):
        r = float(rng.uniform(10.0, 200.0))
        u = float(r * rng.uniform(0.05, 0.7))
        bound = 1.1 * SQRT_2PI / ((r - u) * (r + u)) ** 0.25
        assert abs(scaled_K(r, u).value) <= bound


def test_exponential_regime_decays():
    values = [scaled_K(60.0, u).value for u in (90.0, 110.0, 130.0)]
    assert values[0] > values[1] > values[2] > 0.0


def test_array_evaluation_matches_scalar():
    u = np.array([5.0, 30.0, 49.0, 50.0, 70.0])
    values, errors = scaled_K_array(50.0, u)
    for ui, value in zip(u, values):
        assert value == pytest.approx(scaled_K(50.0, float(ui)).value, rel=1e-9, abs=1e-14)
    assert np.all(errors >= 0.0)


def test_array_rejects_unknown_method():
    with pytest.raises(DomainError):
        scaled_K_array(10.0, [1.0], method="series")


def test_oracle_order_limit():
    with pytest.raises(DomainError):
        scaled_K_oracle(300.0, 10.0)
