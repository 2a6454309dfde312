import math

import numpy as np
import pytest
from scipy import integrate

from maasslab.services.domain import FundamentalDomainQuadrature


def test_area_of_fundamental_domain():
    result = FundamentalDomainQuadrature().integrate(lambda xs, y: np.ones_like(xs), tail=lambda y: 1.0 / y)
    assert result.value == pytest.approx(math.pi / 3.0, abs=1e-8)
    assert result.value == pytest.approx(result.cap + result.strip + result.tail)
    assert result.tail == pytest.approx(0.1)
    assert result.evaluations > 0


def test_cap_area_matches_closed_form():
    result = FundamentalDomainQuadrature().integrate(lambda xs, y: np.ones_like(xs), y_max=2.0)
    # strip 1 <= y <= 2 has area 1/2
    assert result.strip == pytest.approx(0.5, abs=1e-10)
    assert result.cap == pytest.approx(math.pi / 3.0 - 1.0, abs=1e-9)


def test_first_harmonic_only_sees_the_cap():
    expected, _ = integrate.quad(
        lambda th: -math.sin(2.0 * math.pi * math.sin(th)) * math.sin(th) / (math.pi * math.cos(th) ** 2),
        0.0, math.pi / 6.0, epsabs=1e-13,
    )
    result = FundamentalDomainQuadrature().integrate(lambda xs, y: np.cos(2.0 * math.pi * xs), y_max=3.0)
    assert abs(result.strip) < 1e-12
    assert result.cap == pytest.approx(expected, abs=1e-9)
