"""
Oscillation tools: sign-change counting, L^lambda means, the averaged
increment functional J and the Littlewood sign-change certificate
"""

import logging
import math
from typing import Tuple

import numpy as np

from maasslab.core.config import settings
from maasslab.core.errors import DomainError
from maasslab.core.quadrature import composite_gauss, gauss_legendre
from maasslab.models.oscillation import ConstantsProfile, LittlewoodCertificate, SignCount
from maasslab.services.segments import SegmentFunction

logger = logging.getLogger(__name__)

ZERO_FRACTION = 1e-13
GAUSS_ORDER = 16

# (premise constant on N, lower-bound factor)
PROFILE_CONSTANTS = {
    ConstantsProfile.EXACT: (1e7, 0.1),
    ConstantsProfile.RELAXED: (1e2, 0.1),
}


def _signs(values: np.ndarray) -> np.ndarray:
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    signs = np.sign(values)
    signs[np.abs(values) <= ZERO_FRACTION * scale] = 0.0
    return signs


def _brackets(points: np.ndarray, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Consecutive nonzero samples of opposite sign; zero samples are skipped"""
    signs = _signs(values)
    kept = np.flatnonzero(signs != 0)
    if kept.size < 2:
        return np.zeros(0), np.zeros(0)
    flips = np.flatnonzero(signs[kept[1:]] != signs[kept[:-1]])
    return points[kept[flips]], points[kept[flips + 1]]


def _bisect(f: SegmentFunction, lo: np.ndarray, hi: np.ndarray, depth: int) -> np.ndarray:
    if lo.size == 0:
        return lo
    lo, hi = lo.copy(), hi.copy()
    left_sign = np.sign(f(lo))
    for _ in range(depth):
        mid = 0.5 * (lo + hi)
        mid_sign = np.sign(f(mid))
        right = mid_sign == left_sign
        exact = mid_sign == 0
        lo = np.where(right | exact, mid, lo)
        hi = np.where(~right | exact, mid, hi)
    return 0.5 * (lo + hi)


def _crosses_at_start(f: SegmentFunction, spacing: float, scale: float) -> bool:
    """True when f vanishes at a and takes opposite signs at a - spacing and a + spacing"""
    here, right = f(np.array([f.a, f.a + spacing]))
    if abs(here) > ZERO_FRACTION * scale or right == 0.0:
        return False
    try:
        left = f(np.array([f.a - spacing]))[0]
    except DomainError:
        return False
    return left * right < 0


def locate_sign_changes(f: SegmentFunction) -> SignCount:
    """
    Sign changes of f on the half-open segment [a, b) with their bisected locations

    The sample grid is doubled until two consecutive counts agree; zeros
    without a change of sign are not counted. A crossing exactly at a counts
    and one exactly at b does not, so a period of a periodic function
    contributes every zero once.
    """
    samples = f.sample_count()
    previous = None
    stable = False
    for _ in range(settings.SIGN_MAX_DOUBLINGS + 1):
        points = np.linspace(f.a, f.b, samples)
        values = f(points)
        lo, hi = _brackets(points, values)
        if previous is not None and lo.size == previous:
            stable = True
            break
        previous = lo.size
        samples = 2 * samples - 1
    if not stable:
        logger.warning(f"sign-change count of {f!r} did not stabilise at {samples} samples")
    roots = _bisect(f, lo, hi, settings.SIGN_BISECTION_DEPTH)
    if _crosses_at_start(f, points[1] - points[0], float(np.max(np.abs(values)))):
        roots = np.concatenate([[f.a], roots])
    return SignCount(count=int(roots.size), samples=samples, roots=roots.tolist(), stable=stable)


def count_sign_changes(f: SegmentFunction) -> int:
    return locate_sign_changes(f).count


def _smooth_breakpoints(f: SegmentFunction, a: float, b: float) -> np.ndarray:
    """Panel grid at a quarter oscillation scale, refined at the sign changes of f"""
    panels = max(4, int(math.ceil(4.0 * (b - a) / f.oscillation_scale)))
    grid = np.linspace(a, b, panels + 1)
    roots = locate_sign_changes(f.restricted(a, b)).roots
    return np.unique(np.concatenate([grid, np.asarray(roots, dtype=float)]))


def M_lambda(f: SegmentFunction, lam: float) -> float:
    """(1/(b - a) int_a^b |f|^lambda)^{1/lambda}"""
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    points, weights = composite_gauss(_smooth_breakpoints(f, f.a, f.b), GAUSS_ORDER)
    integral = math.fsum(weights * np.abs(f(points)) ** lam)
    return (integral / f.length) ** (1.0 / lam)


class Antiderivative:
    """F(s) = int_a^s f on [a, b] from a cell-wise Gauss-Legendre cumulative sum"""

    def __init__(self, f: SegmentFunction, a: float, b: float, cell: float = None):
        self.f = f
        self.a = a
        cell = cell or f.oscillation_scale / 4.0
        count = max(1, int(math.ceil((b - a) / cell)))
        self.h = (b - a) / count
        self.grid = a + self.h * np.arange(count + 1)
        points, weights = composite_gauss(self.grid, GAUSS_ORDER)
        cells = (weights * f(points)).reshape(count, GAUSS_ORDER).sum(axis=1)
        self.values = np.concatenate([[0.0], np.cumsum(cells)])

    def __call__(self, s) -> np.ndarray:
        s = np.atleast_1d(np.asarray(s, dtype=float))
        index = np.clip(((s - self.a) / self.h).astype(int), 0, self.grid.size - 1)
        left = self.grid[index]
        nodes, weights = gauss_legendre(GAUSS_ORDER, 0.0, 1.0)
        offsets = (s - left)[:, None]
        partial = (offsets * weights[None, :] * self.f((left[:, None] + offsets * nodes[None, :]).ravel())
                   .reshape(s.size, GAUSS_ORDER)).sum(axis=1)
        return self.values[index] + partial


def J_functional(f1: SegmentFunction, eta: float) -> float:
    """
    (1/(b - a)) int_a^b |int_y^{y + eta} f1(v) dv| dy

    The inner integral comes from a cumulative antiderivative over [a, b + eta];
    the outer integral is split at the sign changes of the increment.
    """
    if not eta > 0:
        raise DomainError(f"eta must be positive, got {eta}")
    primitive = Antiderivative(f1, f1.a, f1.b + eta)
    increment = SegmentFunction(
        lambda s: primitive(s + eta) - primitive(s), f1.a, f1.b, f1.kind,
        oscillation_scale=min(f1.oscillation_scale, max(eta, f1.oscillation_scale / 4.0)),
    )
    points, weights = composite_gauss(_smooth_breakpoints(increment, f1.a, f1.b), GAUSS_ORDER)
    return math.fsum(weights * np.abs(increment(points))) / f1.length


def large_value_measure(f1: SegmentFunction, threshold: float) -> float:
    """Lebesgue measure of {y in [a, b] : |f1(y)| >= threshold}, sampled"""
    points = np.linspace(f1.a, f1.b, 4 * f1.sample_count() + 1)
    return float(np.mean(np.abs(f1(points)) >= threshold) * f1.length)


def certificate_from_quantities(
    a: float,
    b: float,
    M1: float,
    M2: float,
    J: float,
    g_bound: float,
    c: float,
    omega: float,
    N: float,
    profile: ConstantsProfile = ConstantsProfile.EXACT,
    large_value: float = None,
) -> LittlewoodCertificate:
    """
    Premise check of the quantitative Littlewood sign-change criterion

    premises: M1 >= c M2, J < c^3 eta M2 / 16, |g| <= c^2 / 32, N > K (omega + 7);
    conclusion: at least ceil(c^2 N / (10 (omega + 2))) sign changes of f1.
    """
    threshold, factor = PROFILE_CONSTANTS[profile]
    eta = omega * (b - a) / N
    premises = [
        M1 >= c * M2,
        J < c ** 3 * eta * M2 / 16.0,
        g_bound <= c * c / 32.0,
        N > threshold * (omega + 7.0),
    ]
    holds = all(premises)
    lower = int(math.ceil(factor * c * c * N / (omega + 2.0))) if holds else 0
    return LittlewoodCertificate(
        a=a, b=b, c=c, omega=omega, N=N, eta=eta, M1=M1, M2=M2, J=J, g_bound=g_bound,
        premises=premises, premises_hold=holds, lower_bound=lower, profile=profile,
        large_value_measure=large_value,
    )


def littlewood_certify(
    f: SegmentFunction,
    g: SegmentFunction,
    c: float,
    omega: float,
    N: float,
    profile: ConstantsProfile = ConstantsProfile.EXACT,
) -> LittlewoodCertificate:
    """
    Evaluate every premise quantity of the Littlewood criterion for f1 = f - g M2(f)

    Args:
        f: function on [a, b]
        g: perturbation on [a, b]
        c: 0 < c <= 1
        omega: omega >= 0; omega = 0 gives eta = 0 and fails the J premise
        N: frequency scale
        profile: exact constants or the relaxed desk-scale diagnostic

    Raises:
        DomainError: c outside (0, 1], negative omega or non-positive N
    """
    if not 0 < c <= 1 or not omega >= 0 or not N > 0:
        raise DomainError(f"certificate needs 0 < c <= 1, omega >= 0, N > 0; got c={c}, omega={omega}, N={N}")
    M1 = M_lambda(f, 1.0)
    M2 = M_lambda(f, 2.0)
    eta = omega * f.length / N
    f1 = f.combined(g, M2)
    J = J_functional(f1, eta) if eta > 0 else 0.0
    g_points = np.linspace(g.a, g.b, 4 * g.sample_count() + 1)
    g_bound = float(np.max(np.abs(g(g_points))))
    large = large_value_measure(f1, 0.5 * c * M2)
    if M1 >= c * M2 and large < f.length * c * c / 2.0:
        logger.warning(f"large-value set of {f!r} measures {large:.3e}, below (b-a)c^2/2")
    certificate = certificate_from_quantities(
        f.a, f.b, M1, M2, J, g_bound, c, omega, N, profile, large,
    )
    logger.info(
        f"Littlewood {profile.value} certificate on [{f.a:.6g}, {f.b:.6g}]: "
        f"premises={certificate.premises} lower_bound={certificate.lower_bound}"
    )
    return certificate
