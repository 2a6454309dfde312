"""
Quadrature primitives shared by the kernel, norm and oscillation services
"""

import logging
import math
import warnings
from functools import lru_cache
from typing import Callable, Iterable, Optional, Tuple

import numpy as np
from scipy import integrate

from maasslab.core.config import settings
from maasslab.core.errors import QuadratureStallError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def _leggauss(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_legendre(order: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to [a, b]"""
    nodes, weights = _leggauss(order)
    half = 0.5 * (b - a)
    return 0.5 * (a + b) + half * nodes, half * weights


def composite_gauss(breakpoints: np.ndarray, order: int = 16) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre rule of the given order on every cell of a sorted breakpoint array"""
    breakpoints = np.asarray(breakpoints, dtype=float)
    left = breakpoints[:-1]
    half = 0.5 * np.diff(breakpoints)
    nodes, weights = _leggauss(order)
    points = (left + half)[:, None] + half[:, None] * nodes[None, :]
    return points.ravel(), (half[:, None] * weights[None, :]).ravel()


def periodic_nodes(count: int, start: float = -0.5) -> np.ndarray:
    """Equispaced nodes of the periodic trapezoid rule on [start, start + 1)"""
    return start + (np.arange(count) + 0.5) / count


def compensated_sum(values: Iterable[float]) -> float:
    """Correctly rounded sum"""
    return math.fsum(values)


def panel_breakpoints(a: float, b: float, extra: Iterable[float] = (), per_unit: Optional[int] = None) -> np.ndarray:
    """
    Breakpoints with a hard floor of panels per unit length plus extra refinement points

    Args:
        a: left end
        b: right end
        extra: additional points inside (a, b), e.g. turning heights
        per_unit: minimum panels per unit length
    """
    per_unit = per_unit or settings.QUAD_MIN_PANELS_PER_UNIT
    count = max(1, int(math.ceil((b - a) * per_unit)))
    points = set(np.linspace(a, b, count + 1).tolist())
    points.update(p for p in extra if a < p < b)
    return np.array(sorted(points))


def adaptive_integral(
    fn: Callable[[float], float],
    a: float,
    b: float,
    breakpoints: Iterable[float] = (),
    epsabs: Optional[float] = None,
    epsrel: float = 1e-10,
) -> Tuple[float, float]:
    """
    Adaptive Gauss-Kronrod integral of a scalar function over [a, b]

    Integration is split at the panel floor and the given breakpoints so the
    panel order is deterministic. Raises QuadratureStallError when QUADPACK
    reports that a panel did not converge.

    Returns:
        (value, error estimate)
    """
    epsabs = settings.QUAD_PANEL_TOL if epsabs is None else epsabs
    cuts = panel_breakpoints(a, b, breakpoints)
    total = []
    error = 0.0
    for left, right in zip(cuts[:-1], cuts[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            value, err, info = integrate.quad(
                fn, left, right, epsabs=epsabs / len(cuts), epsrel=epsrel,
                limit=settings.QUAD_LIMIT, full_output=1,
            )[:3]
        if err > max(epsabs, epsrel * abs(value)) * 10:
            raise QuadratureStallError(
                f"panel [{left:.6g}, {right:.6g}] stalled with error {err:.3e}"
            )
        total.append(value)
        error += err
    return compensated_sum(total), error


def adaptive_vector_integral(
    fn: Callable[[float], np.ndarray],
    a: float,
    b: float,
    breakpoints: Iterable[float] = (),
    epsabs: Optional[float] = None,
    epsrel: float = 1e-10,
) -> Tuple[np.ndarray, float]:
    """Vector-valued counterpart of adaptive_integral built on scipy's quad_vec"""
    epsabs = settings.QUAD_PANEL_TOL if epsabs is None else epsabs
    cuts = panel_breakpoints(a, b, breakpoints)
    value, err, info = integrate.quad_vec(
        fn, a, b, epsabs=epsabs, epsrel=epsrel, points=cuts[1:-1].tolist(),
        limit=settings.QUAD_LIMIT, full_output=True,
    )
    if not info.success:
        raise QuadratureStallError(f"vector quadrature on [{a:.6g}, {b:.6g}] stalled: {info.message}")
    return np.asarray(value), float(err)
