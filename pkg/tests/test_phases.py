import math

import numpy as np
import pytest

from maasslab.core.errors import DomainError
from maasslab.models.oscillation import PhaseQuadruple
from maasslab.services.phases import (
    d_lower_bound,
    gh_lower_bound,
    phase_D,
    phase_d,
    phase_dprime,
    quadruple_window,
    sample_admissible_quadruples,
)


@pytest.fixture
def quadruple():
    return PhaseQuadruple(n1=100, n2=104, n3=101, n4=103, t=1000.0, eps=0.1)


def _direct_d(q: PhaseQuadruple, y: float) -> float:
    h = [math.sqrt(q.t ** 2 - (2.0 * math.pi * n * y) ** 2) for n in q.ns]
    return -(h[0] + h[1] - h[2] - h[3]) / y


@pytest.mark.parametrize("t", [50.0, 100.0, 200.0])
def test_sign_bound_and_convexity_on_random_quadruples(t, rng):
    for q, y in sample_admissible_quadruples(t, 0.2, 300, rng):
        d = phase_d(q, y)
        assert math.copysign(1.0, d) == -math.copysign(1.0, q.product_gap)
        assert abs(d) >= d_lower_bound(q, y) * (1.0 - 1e-12)
        assert phase_dprime(q, y) * d > 0


def test_cancellation_free_form_matches_direct_difference(quadruple):
    for y in (0.6, 0.9, 1.1):
        assert phase_d(quadruple, y) == pytest.approx(_direct_d(quadruple, y), rel=1e-7)


def test_d_is_the_height_derivative_of_D(quadruple):
    y, h = 0.9, 1e-6
    numeric = (phase_D(quadruple, y + h) - phase_D(quadruple, y - h)) / (2.0 * h)
    assert phase_d(quadruple, y) == pytest.approx(numeric, rel=1e-5)


def test_dprime_is_the_height_derivative_of_d(quadruple):
    y, h = 0.9, 1e-6
    numeric = (phase_d(quadruple, y + h) - phase_d(quadruple, y - h)) / (2.0 * h)
    assert phase_dprime(quadruple, y) == pytest.approx(numeric, rel=1e-5)


def test_window_refined_bound_inside_level_window(quadruple):
    alpha, beta = quadruple_window(quadruple, 1)
    assert alpha == pytest.approx((1000.0 - 1000.0 ** 0.9) / (2.0 * math.pi * 100))
    assert beta == pytest.approx((1000.0 - 1000.0 ** 0.8) / (2.0 * math.pi * 104))
    for y in np.linspace(alpha, beta, 7):
        assert abs(phase_d(quadruple, y)) >= gh_lower_bound(quadruple, y, 1)
    with pytest.raises(DomainError):
        gh_lower_bound(quadruple, beta + 0.1, 1)


def test_heights_beyond_turning_point_rejected(quadruple):
    with pytest.raises(DomainError):
        phase_d(quadruple, 2.0)
    with pytest.raises(DomainError):
        phase_d(quadruple, 0.0)


def test_inadmissible_quadruples_rejected():
    with pytest.raises(ValueError):
        PhaseQuadruple(n1=1, n2=2, n3=2, n4=2, t=100.0, eps=0.2)
    with pytest.raises(ValueError):
        PhaseQuadruple(n1=3, n2=2, n3=3, n4=2, t=100.0, eps=0.2)
    with pytest.raises(ValueError):
        PhaseQuadruple(n1=40, n2=2, n3=30, n4=12, t=100.0, eps=0.2)


def test_no_quadruples_when_cap_is_small(rng):
    with pytest.raises(DomainError):
        sample_admissible_quadruples(5.0, 0.2, 1, rng)


def test_sampled_heights_stay_below_turning_points(rng):
    for q, y in sample_admissible_quadruples(80.0, 0.25, 50, rng):
        assert 0.5 <= y
        assert 2.0 * math.pi * max(q.ns) * y <= q.t - q.t ** 0.75 + 1e-9
