"""
Dirichlet polynomials of the Hecke coefficients and the J-bounds built from them
"""

import logging
import math
from typing import Tuple

import numpy as np

from maasslab.core.errors import DomainError, TableExtentError
from maasslab.core.quadrature import adaptive_integral
from maasslab.models.form import MaassForm
from maasslab.services.bessel import scaled_K_array

logger = logging.getLogger(__name__)


def _coefficients_up_to_t(form: MaassForm) -> Tuple[np.ndarray, np.ndarray]:
    top = int(math.floor(form.t))
    if top > form.hecke.extent:
        raise TableExtentError(top, form.hecke.extent)
    return np.arange(1, top + 1, dtype=float), form.hecke.head(top)


def dirichlet_poly(form: MaassForm, x: float, s) -> complex:
    """L_x(s) = sum_{1 <= n <= t} lambda(n) e(nx) n^{-s}"""
    values = dirichlet_poly_array(form, x, np.atleast_1d(np.asarray(s, dtype=complex)))
    return complex(values[0])


def dirichlet_poly_array(form: MaassForm, x: float, s: np.ndarray) -> np.ndarray:
    n, lam = _coefficients_up_to_t(form)
    weights = lam * np.exp(2j * math.pi * n * x)
    return np.exp(-np.outer(s, np.log(n))) @ weights


def J1_J2(form: MaassForm, x: float, delta: float) -> Tuple[float, float]:
    """
    J1 = (log t / sqrt t) int_{t^{1-delta}}^{t + log t} |L_x(1/2 + i tau)|^2 / (|t - tau| + 1)^{1/2} dtau
    J2 = (log t / t) int_0^{t^{1-delta}} |L_x(1/2 + i tau)|^2 dtau
    """
    if not 0 < delta < 0.01:
        raise DomainError(f"delta must lie in (0, 1/100), got {delta}")
    t = form.t
    log_t = math.log(t)
    lower = t ** (1.0 - delta)

    def square(tau: float) -> float:
        value = dirichlet_poly_array(form, x, np.array([0.5 + 1j * tau]))[0]
        return value.real ** 2 + value.imag ** 2

    near, _ = adaptive_integral(
        lambda tau: square(tau) / math.sqrt(abs(t - tau) + 1.0), lower, t + log_t,
        breakpoints=[t], epsabs=1e-11,
    )
    far, _ = adaptive_integral(square, 0.0, lower, epsabs=1e-11)
    return log_t / math.sqrt(t) * near, log_t / t * far


def J_psi_pieces(form: MaassForm, y: float, eta: float) -> Tuple[float, float, float, float]:
    """
    The four coefficient sums bounding J(psi_y, eta)^2

    Windows in n (all n < t): J1 below t/(4 pi y), J2 up to (t - t^{1/3})/(2 pi y),
    J3 up to (t + t^{1/3})/(2 pi y), J4 beyond.
    """
    if not y > 0 or eta < 0:
        raise DomainError(f"need y > 0 and eta >= 0, got y={y}, eta={eta}")
    t = form.t
    third = t ** (1.0 / 3.0)
    top = int(math.ceil(t)) - 1
    if top > form.hecke.extent:
        raise TableExtentError(top, form.hecke.extent)
    if top < 1:
        return 0.0, 0.0, 0.0, 0.0
    n = np.arange(1, top + 1, dtype=float)
    lam2 = form.hecke.head(top) ** 2
    u = 2.0 * math.pi * n * y

    w1 = u < 0.5 * t
    w2 = ~w1 & (u < t - third)
    w3 = (u >= t - third) & (u < t + third)
    w4 = u >= t + third

    j1 = math.fsum(lam2[w1] / n[w1] ** 2 * np.sin(2.0 * math.pi * n[w1] * eta) ** 2
                   / np.sqrt((t - u[w1]) * (t + u[w1])))
    j2 = math.fsum(lam2[w2] / np.sqrt(t - u[w2])) / t ** 2.5
    j3 = math.fsum(lam2[w3]) / t ** (2.0 + 2.0 / 3.0)
    j4 = math.fsum(lam2[w4] / np.sqrt(u[w4] - t)) / t ** 2.5
    return j1, j2, j3, j4


def J_psi_bound(form: MaassForm, y: float, eta: float) -> float:
    return math.fsum(J_psi_pieces(form, y, eta))


def J_psi_l2_bound(form: MaassForm, y: float, eta: float) -> float:
    """
    Cauchy-Schwarz bound J(psi_y, eta) <= (sum_{n != 0} lambda^2 K^2 |e(n eta) - 1|^2 / (2 pi n)^2)^{1/2}
    over the n < t part of psi_y
    """
    t = form.t
    top = int(math.ceil(t)) - 1
    if top > form.hecke.extent:
        raise TableExtentError(top, form.hecke.extent)
    n = np.arange(1, top + 1, dtype=float)
    values, _ = scaled_K_array(t, 2.0 * math.pi * n * y)
    terms = (form.hecke.head(top) * values) ** 2 * np.sin(math.pi * n * eta) ** 2 / (math.pi * n) ** 2
    return math.sqrt(2.0 * math.fsum(terms))
