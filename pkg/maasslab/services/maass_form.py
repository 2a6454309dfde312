"""
Fourier evaluation of even Hecke-Maass forms

phi(x + iy) = 2 sqrt(y) rho_one sum_{n >= 1} lambda(n) e^{pi t/2} K_{it}(2 pi n y) cos(2 pi n x)
Phi = phi / (rho_one sqrt(y)) is the unnormalised series used by the oscillation tools.
"""

import logging
import math
from functools import lru_cache
from typing import Iterable, Tuple

import numpy as np

from maasslab.core.config import settings
from maasslab.core.errors import DomainError, TableExtentError
from maasslab.models.form import MaassForm, Point
from maasslab.services.bessel import SQRT_2PI, SQRT_HALF_PI, phase_H_array, scaled_K_array, transition_bound
from maasslab.services.hecke import ramanujan_majorant

logger = logging.getLogger(__name__)

OSCILLATORY_SAFETY = 1.1


@lru_cache(maxsize=4096)
def _generic_coefficient_bound(n: int) -> float:
    return ramanujan_majorant(n) if n > 1 else 1.0


def kernel_majorant(t: float, u: np.ndarray) -> np.ndarray:
    """Pointwise majorant of |e^{pi t/2} K_{it}(u)| built from the regime amplitudes"""
    u = np.asarray(u, dtype=float)
    width = settings.BESSEL_CUTOFF * t ** (1.0 / 3.0)
    out = np.full(u.shape, transition_bound(t))
    osc = u < t - width
    if np.any(osc):
        gap = (t - u[osc]) * (t + u[osc])
        out[osc] = OSCILLATORY_SAFETY * SQRT_2PI / gap ** 0.25
    expo = u > t + width
    if np.any(expo):
        ue = u[expo]
        gap = (ue - t) * (ue + t)
        out[expo] = (
            settings.EXPONENTIAL_MAJORANT_SAFETY * SQRT_HALF_PI / gap ** 0.25
            * np.exp(-t * phase_H_array(ue / t))
        )
    return out


def _coefficient_bounds(form: MaassForm, count: int) -> np.ndarray:
    extent = form.hecke.extent
    known = np.abs(form.hecke.head(min(count, extent)))
    if count <= extent:
        return known
    beyond = np.array([_generic_coefficient_bound(n) for n in range(extent + 1, count + 1)])
    return np.concatenate([known, beyond])


def truncation_length(form: MaassForm, y: float, tol: float) -> int:
    """
    Smallest N >= 1 with sum_{n > N} |lambda(n)| K-majorant(2 pi n y) < tol

    Coefficients past the table are bounded by d(n) n^{7/64 + 0.01}.
    """
    if not y > 0 or not tol > 0:
        raise DomainError(f"truncation needs y > 0 and tol > 0, got y={y}, tol={tol}")
    t = form.t
    reach = t + 4.0 * settings.BESSEL_CUTOFF * t ** (1.0 / 3.0) + 40.0 + abs(math.log(tol))
    n_cap = int(math.ceil(reach / (2.0 * math.pi * y))) + 16
    n = np.arange(1, n_cap + 1)
    terms = _coefficient_bounds(form, n_cap) * kernel_majorant(t, 2.0 * math.pi * n * y)

    ratio = terms[-1] / terms[-2] if terms[-2] > 0 else 0.0
    remainder = terms[-1] * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
    tails = np.cumsum(terms[::-1])[::-1] - terms + remainder
    below = np.flatnonzero(tails < tol)
    return max(1, int(below[0]) + 1) if below.size else n_cap


def fourier_row(form: MaassForm, y: float, tol: float = 1e-12, method: str = "auto") -> Tuple[np.ndarray, float]:
    """
    Coefficients lambda(n) e^{pi t/2} K_{it}(2 pi n y) for n = 1..N(y)

    Returns:
        (coefficient vector, absolute error bound of the coefficient sum)
    """
    count = truncation_length(form, y, tol)
    if count > form.hecke.extent:
        raise TableExtentError(count, form.hecke.extent)
    n = np.arange(1, count + 1)
    lam = form.hecke.head(count)
    values, errors = scaled_K_array(form.t, 2.0 * math.pi * n * y, method=method)
    return lam * values, float(np.abs(lam) @ errors) + tol


def Phi_row(form: MaassForm, xs, y: float, tol: float = 1e-12, method: str = "auto") -> np.ndarray:
    """Phi(x + iy) for an array of x at one height"""
    coefficients, _ = fourier_row(form, y, tol, method)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    n = np.arange(1, coefficients.size + 1)
    return 2.0 * np.cos(2.0 * math.pi * np.outer(xs, n)) @ coefficients


def phi_row(form: MaassForm, xs, y: float, tol: float = 1e-12, method: str = "auto") -> np.ndarray:
    """phi(x + iy) for an array of x at one height"""
    scale = form.rho_one * math.sqrt(y)
    return scale * Phi_row(form, xs, y, tol / scale, method)


def evaluate_Phi(form: MaassForm, z: Point, tol: float = 1e-12) -> float:
    return float(Phi_row(form, [z.x], z.y, tol / 2.0)[0])


def evaluate_phi(form: MaassForm, z: Point, tol: float = 1e-10, method: str = "auto") -> float:
    """
    Value of the L2-normalised form at z

    Args:
        form: even Maass form
        z: evaluation point, y > 0
        tol: absolute accuracy target

    Raises:
        TableExtentError: the truncation length exceeds the Hecke table
    """
    scale = 2.0 * form.rho_one * math.sqrt(z.y)
    coefficients, error = fourier_row(form, z.y, tol / scale, method)
    if scale * error > 10.0 * tol:
        logger.warning(f"kernel error {scale * error:.2e} exceeds tolerance {tol:.1e} at {z.z}")
    n = np.arange(1, coefficients.size + 1)
    return float(scale * (np.cos(2.0 * math.pi * n * z.x) @ coefficients))


def pullback(z: complex, max_steps: int = 10_000) -> complex:
    """Reduce z to the standard fundamental domain |x| <= 1/2, |z| >= 1"""
    if not z.imag > 0:
        raise DomainError(f"pullback needs Im z > 0, got {z}")
    for _ in range(max_steps):
        z = complex(z.real - math.floor(z.real + 0.5), z.imag)
        if abs(z) >= 1.0 - 1e-15:
            return z
        z = -1.0 / z
    raise DomainError(f"pullback did not terminate for {z}")


def automorphy_residual(form: MaassForm, points: Iterable[complex], tol: float = 1e-10, method: str = "auto") -> float:
    """Max |phi(z) - phi(-1/z)| over the points"""
    worst = 0.0
    for z in points:
        image = -1.0 / z
        here = evaluate_phi(form, Point(x=z.real, y=z.imag), tol, method)
        there = evaluate_phi(form, Point(x=image.real, y=image.imag), tol, method)
        worst = max(worst, abs(here - there))
    return worst


def coefficient_mass(form: MaassForm, omega: float) -> float:
    """
    Sum of (rho_one lambda(n))^2 over 10^-5 omega t <= |n| <= omega t, n != 0

    Raises:
        TableExtentError: omega t exceeds the table
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    upper = int(math.floor(omega * form.t))
    lower = max(1, int(math.ceil(1e-5 * omega * form.t)))
    if upper > form.hecke.extent:
        raise TableExtentError(upper, form.hecke.extent)
    if upper < lower:
        logger.warning(f"coefficient window for omega={omega} is empty; mass is vacuous")
        return 0.0
    window = form.hecke.head(upper)[lower - 1:]
    return float(2.0 * form.rho_one ** 2 * math.fsum(window ** 2))


def sup_bound(form: MaassForm, y: float) -> float:
    """Majorant of sup_x |phi(x + iy)| from the coefficient and kernel majorants"""
    t = form.t
    reach = t + 4.0 * settings.BESSEL_CUTOFF * t ** (1.0 / 3.0) + 80.0
    n_cap = int(math.ceil(reach / (2.0 * math.pi * y))) + 16
    n = np.arange(1, n_cap + 1)
    terms = _coefficient_bounds(form, n_cap) * kernel_majorant(t, 2.0 * math.pi * n * y)
    return 2.0 * form.rho_one * math.sqrt(y) * float(terms.sum())


def turning_heights(t: float, a: float, b: float) -> list:
    """Heights y in (a, b) with 2 pi n y = t for some n >= 1"""
    first = max(1, int(math.ceil(t / (2.0 * math.pi * b))))
    heights = []
    n = first
    while True:
        y = t / (2.0 * math.pi * n)
        if y <= a:
            break
        if y < b:
            heights.append(y)
        n += 1
    return sorted(heights)
