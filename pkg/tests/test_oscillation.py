import math

import numpy as np
import pytest

from maasslab.core.errors import DomainError
from maasslab.models.oscillation import ConstantsProfile
from maasslab.services.oscillation import (
    J_functional,
    M_lambda,
    certificate_from_quantities,
    count_sign_changes,
    large_value_measure,
    littlewood_certify,
    locate_sign_changes,
)
from maasslab.services.segments import SegmentFunction
from maasslab.tasks.selftest import check_littlewood


def sinusoid(frequency: int, phase: float = 0.3, a: float = 0.0, b: float = 1.0) -> SegmentFunction:
    return SegmentFunction.from_callable(
        lambda x: np.sin(2.0 * math.pi * frequency * x + phase), a, b, oscillation_scale=1.0 / frequency,
    )


def zero_like(f: SegmentFunction) -> SegmentFunction:
    return SegmentFunction.from_callable(np.zeros_like, f.a, f.b, f.oscillation_scale)


@pytest.mark.parametrize("frequency", [1, 5, 50, 400])
def test_shifted_sine_has_two_changes_per_period(frequency):
    located = locate_sign_changes(sinusoid(frequency))
    assert located.count == 2 * frequency
    assert located.stable
    expected = (np.arange(1, 2 * frequency + 1) * math.pi - 0.3) / (2.0 * math.pi * frequency)
    np.testing.assert_allclose(located.roots, expected, atol=1e-10)


@pytest.mark.parametrize("frequency", [1, 3, 5, 8])
def test_unshifted_sine_counts_every_zero_of_a_period(frequency):
    located = locate_sign_changes(sinusoid(frequency, phase=0.0))
    assert located.count == 2 * frequency
    assert located.roots[0] == 0.0
    expected = np.arange(2 * frequency) / (2.0 * frequency)
    np.testing.assert_allclose(located.roots, expected, atol=1e-10)


def test_crossing_at_the_right_end_is_not_counted():
    f = SegmentFunction.from_callable(lambda x: x - 1.0, 0.0, 1.0)
    assert count_sign_changes(f) == 0
    g = SegmentFunction.from_callable(lambda x: x, 0.0, 1.0)
    assert count_sign_changes(g) == 1


def test_touching_zero_is_not_a_sign_change():
    f = SegmentFunction.from_callable(lambda x: (x - 0.5) ** 2, 0.0, 1.0)
    assert count_sign_changes(f) == 0


def test_sampled_exact_zero_with_crossing_counts_once():
    f = SegmentFunction.from_callable(lambda x: x - 0.5, 0.0, 1.0, resolution_hint=101)
    located = locate_sign_changes(f)
    assert located.count == 1
    assert located.roots[0] == pytest.approx(0.5, abs=1e-12)


def test_segment_needs_increasing_endpoints():
    with pytest.raises(DomainError):
        SegmentFunction.from_callable(np.sin, 1.0, 1.0)


def test_means_of_a_full_period_sine():
    f = sinusoid(1, phase=0.0)
    assert M_lambda(f, 1.0) == pytest.approx(2.0 / math.pi, rel=1e-10)
    assert M_lambda(f, 2.0) == pytest.approx(1.0 / math.sqrt(2.0), rel=1e-10)
    with pytest.raises(DomainError):
        M_lambda(f, 0.0)


def test_increment_functional_of_a_constant_is_eta():
    one = SegmentFunction.from_callable(np.ones_like, 0.0, 2.0)
    assert J_functional(one, 0.25) == pytest.approx(0.25, rel=1e-12)
    with pytest.raises(DomainError):
        J_functional(one, 0.0)


def test_increment_functional_vanishes_over_whole_periods():
    assert J_functional(sinusoid(10), 0.2) < 1e-12


def test_large_value_measure_of_sine():
    assert large_value_measure(sinusoid(1, phase=0.0), 0.5) == pytest.approx(2.0 / 3.0, abs=1e-2)


def test_certificate_closed_form():
    certificate = certificate_from_quantities(0.0, 1.0, 0.6, 0.7, 0.0, 0.0, 0.5, 1.0, 1e8)
    assert certificate.premises == [True, True, True, True]
    assert certificate.eta == pytest.approx(1e-8)
    assert certificate.lower_bound == 833334
    assert certificate.certified


def test_certificate_reports_each_failed_premise():
    certificate = certificate_from_quantities(0.0, 1.0, 0.1, 0.7, 1.0, 1.0, 0.5, 1.0, 10.0)
    assert certificate.premises == [False, False, False, False]
    assert not certificate.premises_hold
    assert certificate.lower_bound == 0
    assert not certificate.certified


def test_relaxed_profile_is_never_certified():
    certificate = certificate_from_quantities(
        0.0, 1.0, 0.6, 0.7, 0.0, 0.0, 0.5, 1.0, 1000.0, profile=ConstantsProfile.RELAXED,
    )
    assert certificate.premises_hold
    assert certificate.lower_bound == 9
    assert not certificate.certified


def test_relaxed_certificate_is_sound_for_fast_sine():
    f = sinusoid(2000)
    certificate = littlewood_certify(f, zero_like(f), 0.5, 1.0, 1000.0, ConstantsProfile.RELAXED)
    assert certificate.premises_hold
    assert certificate.lower_bound == 9
    assert certificate.lower_bound <= count_sign_changes(f)
    assert certificate.large_value_measure > 0.5


def test_certificate_parameter_domain():
    f = sinusoid(3)
    with pytest.raises(DomainError):
        littlewood_certify(f, zero_like(f), 0.0, 1.0, 10.0)
    with pytest.raises(DomainError):
        littlewood_certify(f, zero_like(f), 0.5, -0.1, 10.0)
    with pytest.raises(DomainError):
        littlewood_certify(f, zero_like(f), 0.5, 1.0, 0.0)


@pytest.mark.parametrize("omega", [0.0, 0.5, 1.0, 3.0])
def test_small_frequency_scale_fails_premises_without_raising(omega):
    f = sinusoid(3)
    certificate = littlewood_certify(f, zero_like(f), 0.5, omega, 1e6)
    assert certificate.omega == omega
    assert certificate.premises[3] is False
    assert not certificate.premises_hold
    assert certificate.lower_bound == 0


def test_zero_omega_has_no_increment_window():
    f = sinusoid(3)
    certificate = littlewood_certify(f, zero_like(f), 0.5, 0.0, 1e9)
    assert certificate.eta == 0.0
    assert certificate.J == 0.0
    assert certificate.premises[1] is False
    assert certificate.lower_bound == 0


def test_random_trigonometric_polynomials_never_overcount():
    report = check_littlewood(np.random.default_rng(7), samples=10)
    assert report["passed"]
    assert report["violations"] == 0
