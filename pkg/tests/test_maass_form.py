import math

import numpy as np
import pytest

from maasslab.core.errors import DomainError, TableExtentError
from maasslab.models.form import MaassForm, Point
from maasslab.services.bessel import scaled_K, scaled_K_array
from maasslab.services.maass_form import (
    Phi_row,
    automorphy_residual,
    coefficient_mass,
    evaluate_phi,
    fourier_row,
    kernel_majorant,
    phi_row,
    pullback,
    sup_bound,
    truncation_length,
    turning_heights,
)

from tests.conftest import FIRST_EVEN_T, synthetic_table


def test_pullback_lands_in_fundamental_domain(rng):
    for _ in range(200):
        z = complex(rng.uniform(-3.0, 3.0), rng.uniform(0.01, 1.5))
        w = pullback(z)
        assert abs(w.real) <= 0.5 + 1e-12
        assert abs(w) >= 1.0 - 1e-12
        assert w.imag >= z.imag - 1e-12


def test_pullback_fixes_points_of_the_domain():
    for z in (complex(0.2, 1.5), complex(-0.5, 0.9), complex(0.0, 1.0)):
        assert pullback(z) == pytest.approx(z)


def test_pullback_rejects_lower_half_plane():
    with pytest.raises(DomainError):
        pullback(complex(0.1, -0.2))


def test_form_is_even_and_periodic(synthetic_form):
    xs = np.linspace(-0.5, 0.5, 41)
    values = Phi_row(synthetic_form, xs, 0.9)
    np.testing.assert_allclose(values, Phi_row(synthetic_form, -xs, 0.9), atol=1e-13)
    np.testing.assert_allclose(values, Phi_row(synthetic_form, xs + 1.0, 0.9), atol=1e-12)


def test_row_is_cosine_series_of_kernel_values(synthetic_form):
    y = 1.2
    coefficients, error = fourier_row(synthetic_form, y)
    for n in (1, 2, 3):
        expected = synthetic_form.hecke[n] * scaled_K(synthetic_form.t, 2.0 * math.pi * n * y).value
        assert coefficients[n - 1] == pytest.approx(expected, rel=1e-9, abs=1e-14)
    assert error > 0.0
    x = 0.17
    direct = 2.0 * sum(c * math.cos(2.0 * math.pi * (n + 1) * x) for n, c in enumerate(coefficients))
    assert Phi_row(synthetic_form, [x], y)[0] == pytest.approx(direct, abs=1e-12)


def test_normalised_value_scales_with_rho_and_height():
    form = MaassForm(t=FIRST_EVEN_T, hecke=synthetic_table(), rho_one=2.5)
    z = Point(x=0.23, y=1.1)
    expected = 2.5 * math.sqrt(1.1) * Phi_row(form, [0.23], 1.1)[0]
    assert evaluate_phi(form, z) == pytest.approx(expected, abs=1e-9)
    assert phi_row(form, [0.23], 1.1)[0] == pytest.approx(expected, abs=1e-9)


def test_truncation_shrinks_with_height_and_grows_with_accuracy(synthetic_form):
    assert truncation_length(synthetic_form, 2.0, 1e-12) <= truncation_length(synthetic_form, 0.7, 1e-12)
    assert truncation_length(synthetic_form, 1.0, 1e-6) <= truncation_length(synthetic_form, 1.0, 1e-14)
    assert truncation_length(synthetic_form, 50.0, 1e-12) == 1


@pytest.mark.parametrize("y, tol", [(0.9, 1e-8), (1.3, 1e-10), (2.0, 1e-12)])
def test_doubling_the_truncation_stays_within_tolerance(synthetic_form, y, tol):
    count = truncation_length(synthetic_form, y, tol)
    n = np.arange(1, 2 * count + 1)
    values, _ = scaled_K_array(synthetic_form.t, 2.0 * math.pi * n * y)
    coefficients = synthetic_form.hecke.head(2 * count) * values
    xs = np.linspace(-0.5, 0.5, 17)
    doubled = 2.0 * np.cos(2.0 * math.pi * np.outer(xs, n)) @ coefficients
    assert np.max(np.abs(doubled - Phi_row(synthetic_form, xs, y, tol))) < 2.0 * tol


def test_truncation_rejects_bad_arguments(synthetic_form):
    with pytest.raises(DomainError):
        truncation_length(synthetic_form, 0.0, 1e-12)
    with pytest.raises(DomainError):
        truncation_length(synthetic_form, 1.0, 0.0)


def test_low_heights_exhaust_the_table(synthetic_form):
    with pytest.raises(TableExtentError):
        fourier_row(synthetic_form, 0.05)


def test_kernel_majorant_dominates_kernel():
    t = 40.0
    for u in (5.0, 20.0, 35.0, 40.0, 48.0, 60.0, 90.0):
        assert abs(scaled_K(t, u).value) <= kernel_majorant(t, np.array([u]))[0]


def test_sup_bound_dominates_samples(synthetic_form):
    xs = np.linspace(-0.5, 0.5, 201)
    for y in (0.9, 1.5, 3.0):
        assert np.max(np.abs(phi_row(synthetic_form, xs, y))) <= sup_bound(synthetic_form, y)


def test_coefficient_mass_window(synthetic_form):
    expected = 2.0 * sum(synthetic_form.hecke[n] ** 2 for n in range(1, 14))
    assert coefficient_mass(synthetic_form, 1.0) == pytest.approx(expected)


def test_coefficient_mass_empty_window_warns(synthetic_form, caplog):
    assert coefficient_mass(synthetic_form, 0.05) == 0.0
    assert "vacuous" in caplog.text


def test_coefficient_mass_limits(synthetic_form):
    with pytest.raises(TableExtentError):
        coefficient_mass(synthetic_form, 10.0)
    with pytest.raises(DomainError):
        coefficient_mass(synthetic_form, 0.0)


def test_turning_heights_solve_the_turning_equation():
    t = 100.0
    heights = turning_heights(t, 0.5, 3.0)
    assert heights == sorted(heights)
    assert all(0.5 < y < 3.0 for y in heights)
    for y in heights:
        n = t / (2.0 * math.pi * y)
        assert n == pytest.approx(round(n))
    assert len(heights) == 31 - 5


def test_only_even_forms_are_accepted():
    with pytest.raises(ValueError):
        MaassForm(t=FIRST_EVEN_T, parity="odd", hecke=synthetic_table(), rho_one=1.0)


def test_non_positive_spectral_parameter_rejected():
    with pytest.raises(ValueError):
        MaassForm(t=0.0, hecke=synthetic_table(), rho_one=1.0)


def test_eigenvalue_and_weyl_index(synthetic_form):
    assert synthetic_form.eigenvalue == pytest.approx(0.25 + FIRST_EVEN_T ** 2)
    assert synthetic_form.weyl_index == pytest.approx(synthetic_form.eigenvalue / 24.0)


def test_even_forms_agree_across_the_unit_circle(synthetic_form):
    # on |z| = 1 the inversion -1/z is the reflection x -> -x
    points = [complex(math.cos(a), math.sin(a)) for a in np.linspace(1.1, 2.0, 7)]
    assert automorphy_residual(synthetic_form, points, tol=1e-12) <= 1e-10
