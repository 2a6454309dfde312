"""
Collocation solver for even Hecke-Maass forms

Phi is sampled on the horocycle at height y0; every sample point is pulled
back into the fundamental domain and automorphy Phi(z) = Phi(z*) gives one
linear equation in the coefficients c_1..c_M. Eigenvalues are the t where
the column-scaled system becomes singular.
"""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg, optimize

from maasslab.core.config import settings
from maasslab.core.errors import AccuracyNotAttainedError, IllConditionedSystemError, NoRootInIntervalError
from maasslab.models.form import MaassForm
from maasslab.models.solver import SolverConfig, SolverResult
from maasslab.services.bessel import scaled_K_array
from maasslab.services.hecke import hecke_extend, next_prime, primes_up_to
from maasslab.services.maass_form import automorphy_residual, pullback
from maasslab.services.norms import normalize_form
from maasslab.tasks.pool import parallel_map

logger = logging.getLogger(__name__)

EXTENSION_DECAY = 40.0
EXTENSION_RELIABLE = 25.0
CONDITION_LIMIT = 1e13
BRACKET_START = 1e-6


class CollocationSystem:
    """
    Points and pullbacks of the collocation scheme at one height

    matrix(t) holds the M columns c_l -> sqrt(y) Ktilde(2 pi l y) cos(2 pi l x)
    evaluated at each sample minus the same at its pullback.
    """

    def __init__(self, height: float, truncation: int, samples: int):
        self.height = height
        self.truncation = truncation
        self.x = (np.arange(1, samples + 1) - 0.5) / (2.0 * samples)
        images = [pullback(complex(x, height)) for x in self.x]
        self.x_star = np.array([z.real for z in images])
        self.y_star = np.array([z.imag for z in images])
        self.l = np.arange(1, truncation + 1)

    def _kernel(self, t: float, heights: np.ndarray, method: str) -> np.ndarray:
        u = 2.0 * math.pi * np.outer(heights, self.l)
        values, _ = scaled_K_array(t, u.ravel(), method=method)
        return np.sqrt(heights)[:, None] * values.reshape(u.shape)

    def matrix(self, t: float, method: str = "auto") -> np.ndarray:
        here = self._kernel(t, np.array([self.height]), method)[0]
        there = self._kernel(t, self.y_star, method)
        return (
            here[None, :] * np.cos(2.0 * math.pi * np.outer(self.x, self.l))
            - there * np.cos(2.0 * math.pi * np.outer(self.x_star, self.l))
        )

    def smallest_singular_value(self, t: float, method: str = "auto") -> float:
        A = self.matrix(t, method)
        A = A / np.linalg.norm(A, axis=0)
        sigma = linalg.svdvals(A)
        return float(sigma[-1] / sigma[0])

    def coefficients(self, t: float, method: str = "quadrature") -> Tuple[np.ndarray, float]:
        """c_1..c_M with c_1 = 1 by least squares, and the condition of the reduced system"""
        A = self.matrix(t, method)
        scale = np.linalg.norm(A[:, 1:], axis=0)
        reduced = A[:, 1:] / scale
        solution, _, _, sigma = linalg.lstsq(reduced, -A[:, 0])
        condition = float(sigma[0] / sigma[-1]) if sigma[-1] > 0 else math.inf
        return np.concatenate([[1.0], solution / scale]), condition


def _local_minima(values: np.ndarray) -> np.ndarray:
    padded = np.concatenate([[np.inf], values, [np.inf]])
    return np.flatnonzero((padded[1:-1] < padded[:-2]) & (padded[1:-1] <= padded[2:]))


def scan_singular_values(cfg: SolverConfig, workers: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
    """Smallest relative singular value on the t grid of the search interval"""
    system = CollocationSystem(cfg.sample_height, cfg.truncation, cfg.rows)
    count = int(math.ceil((cfg.t_max - cfg.t_min) / cfg.scan_step)) + 1
    grid = np.linspace(cfg.t_min, cfg.t_max, count)
    sigma = np.array(parallel_map(system.smallest_singular_value, grid, workers))
    return grid, sigma


def _coefficient_gap(cfg: SolverConfig):
    upper = CollocationSystem(cfg.sample_height, cfg.truncation, cfg.rows)
    lower = CollocationSystem(cfg.sample_height - settings.SOLVER_HEIGHT_OFFSET, cfg.truncation, cfg.rows)

    def gap(t: float) -> float:
        return float(upper.coefficients(t)[0][1] - lower.coefficients(t)[0][1])

    return gap


def _polish(cfg: SolverConfig, guess: float, gap) -> float:
    """Root of the two-height c_2 difference bracketed around guess"""
    width = BRACKET_START
    left = gap(guess)
    while width <= cfg.scan_step:
        lo, hi = guess - width, guess + width
        f_lo, f_hi = gap(lo), gap(hi)
        if f_lo * f_hi < 0:
            if left * f_lo < 0:
                hi, f_hi = guess, left
            elif left * f_hi < 0:
                lo, f_lo = guess, left
            return optimize.brentq(gap, lo, hi, xtol=settings.SOLVER_RESIDUAL_TARGET * 1e-2)
        width *= 4.0
    logger.warning(f"no sign change of the c_2 difference near t={guess:.10f}; keeping the singular-value minimum")
    return guess


def refine_dips(cfg: SolverConfig, grid: np.ndarray, sigma: np.ndarray) -> List[Tuple[float, float]]:
    """
    Accepted (t, sigma) dips: local minima refined by bounded Brent
    minimisation that fall below dip_ratio times the scan median
    """
    system = CollocationSystem(cfg.sample_height, cfg.truncation, cfg.rows)
    median = float(np.median(sigma))
    dips = []
    for i in _local_minima(sigma):
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, grid.size - 1)]
        found = optimize.minimize_scalar(
            system.smallest_singular_value, bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-10},
        )
        if found.fun < cfg.dip_ratio * median:
            dips.append((float(found.x), float(found.fun)))
    logger.info(f"scan of [{cfg.t_min}, {cfg.t_max}]: {len(dips)} dips below {cfg.dip_ratio:g} x median {median:.3e}")
    return dips


def extension_truncation(t: float, height: float) -> int:
    """Smallest M with 2 pi M height >= t + EXTENSION_DECAY"""
    return int(math.ceil((t + EXTENSION_DECAY) / (2.0 * math.pi * height)))


def extend_coefficients(t: float, height: float) -> Tuple[dict, np.ndarray, float]:
    """
    Prime eigenvalues from a fixed-t collocation solve at a low height

    Only primes with 2 pi p height <= t + EXTENSION_RELIABLE are kept; the
    table they determine reaches every coefficient needed at y >= 0.4.
    """
    truncation = extension_truncation(t, height)
    system = CollocationSystem(height, truncation, 2 * truncation)
    coefficients, condition = system.coefficients(t)
    if condition > CONDITION_LIMIT:
        raise IllConditionedSystemError(f"extension solve at t={t:.10f}, y={height}", condition)
    reach = int(math.floor((t + EXTENSION_RELIABLE) / (2.0 * math.pi * height)))
    primes = {p: float(coefficients[p - 1]) for p in primes_up_to(min(reach, truncation))}
    return primes, coefficients, condition


def annulus_points(count: int = 20) -> List[complex]:
    """Deterministic points of the annulus 0.8 <= |z| <= 1.25 with y above 0.7"""
    radii = np.linspace(0.8, 1.25, count)
    angles = np.linspace(math.pi / 3.0 + 0.05, 2.0 * math.pi / 3.0 - 0.05, count)
    return [complex(r * math.cos(a), r * math.sin(a)) for r, a in zip(radii, angles[::-1])]


def _build_result(cfg: SolverConfig, t: float, dip: float, median: float) -> SolverResult:
    primes, raw, condition = extend_coefficients(t, cfg.extension_height)
    hecke = hecke_extend(primes, next_prime(max(primes)) - 1)
    form = normalize_form(t, hecke)
    residual = automorphy_residual(form, annulus_points(), tol=cfg.tolerance * 1e-2, method="quadrature")
    hecke_residual = abs(raw[1] * raw[2] - raw[5]) if raw.size >= 6 else 0.0
    converged = residual <= cfg.tolerance
    if not converged:
        logger.warning(f"automorphy residual {residual:.2e} above tolerance {cfg.tolerance:.1e} at t={t:.10f}")
    logger.info(f"solved even form t={t:.12f} residual={residual:.2e} hecke_residual={hecke_residual:.2e}")
    return SolverResult(
        form=form, dip_value=dip, median_singular_value=median, condition=max(condition, 1.0),
        automorphy_residual=residual, hecke_residual=float(hecke_residual), converged=converged,
    )


def solve_all_even_forms(cfg: SolverConfig, workers: Optional[int] = None) -> List[SolverResult]:
    """
    Every even form with t in the search interval, ascending in t

    Raises:
        IllConditionedSystemError: the coefficient extension is numerically singular
    """
    grid, sigma = scan_singular_values(cfg, workers)
    median = float(np.median(sigma))
    if median < 1e-14:
        raise IllConditionedSystemError("collocation system is singular on the whole scan", 1.0 / max(median, 1e-300))

    gap = _coefficient_gap(cfg)
    roots: List[Tuple[float, float]] = []
    for guess, dip in refine_dips(cfg, grid, sigma):
        t = _polish(cfg, guess, gap)
        if not cfg.t_min <= t <= cfg.t_max:
            continue
        if any(abs(t - seen) < 10.0 * cfg.scan_step for seen, _ in roots):
            continue
        roots.append((t, dip))
    return [_build_result(cfg, t, dip, median) for t, dip in sorted(roots)]


def solve_even_form_result(cfg: SolverConfig, workers: Optional[int] = None) -> SolverResult:
    """
    Lowest even form in the search interval with its solve diagnostics

    Raises:
        NoRootInIntervalError: no accepted singular-value dip
        AccuracyNotAttainedError: the automorphy residual missed the tolerance
    """
    results = solve_all_even_forms(cfg, workers)
    if not results:
        raise NoRootInIntervalError(f"no even eigenvalue found in [{cfg.t_min}, {cfg.t_max}]")
    best = results[0]
    if not best.converged:
        raise AccuracyNotAttainedError(
            f"automorphy residual {best.automorphy_residual:.2e} above {cfg.tolerance:.1e} at t={best.form.t:.10f}"
        )
    return best


def solve_even_form(cfg: SolverConfig, workers: Optional[int] = None) -> MaassForm:
    return solve_even_form_result(cfg, workers).form


def weyl_expected_count(t_min: float, t_max: float) -> float:
    """Forms expected with t in [t_min, t_max] when lambda ~ 24 k"""
    return (t_max ** 2 - t_min ** 2) / 24.0
