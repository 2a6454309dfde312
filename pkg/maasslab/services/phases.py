"""
Phase differences of products of four oscillatory Bessel terms

For a quadruple n = (n1, n2, n3, n4) with n1 + n2 = n3 + n4:
    D(n, y) = t H(2 pi n1 y / t) + t H(2 pi n2 y / t) - t H(2 pi n3 y / t) - t H(2 pi n4 y / t)
    d(n, y) = dD/dy = -(h1 + h2 - h3 - h4) / y,  h_j = sqrt(t^2 - (2 pi n_j y)^2)
    d'(n, y) = (t^2 / y^2)(1/h1 + 1/h2 - 1/h3 - 1/h4)
"""

import logging
import math
from typing import List, Tuple

import numpy as np

from maasslab.core.errors import DomainError
from maasslab.models.oscillation import PhaseQuadruple
from maasslab.services.bessel import phase_H_array

logger = logging.getLogger(__name__)

# |d| >= D_LOWER_CONSTANT * y |n1 n2 - n3 n4| / t whenever every h_j <= t
D_LOWER_CONSTANT = math.pi ** 2 / 2.0


def _heights(q: PhaseQuadruple, y: float) -> np.ndarray:
    if not y > 0:
        raise DomainError(f"height must be positive, got {y}")
    u = 2.0 * math.pi * np.array(q.ns, dtype=float) * y
    if np.any(u >= q.t):
        raise DomainError(f"2 pi n y reaches t={q.t} at y={y} for {q.ns}")
    return np.sqrt((q.t - u) * (q.t + u))


def phase_D(q: PhaseQuadruple, y: float) -> float:
    _heights(q, y)
    xi = 2.0 * math.pi * np.array(q.ns, dtype=float) * y / q.t
    H = q.t * phase_H_array(xi)
    return float((H[0] + H[1]) - (H[2] + H[3]))


def phase_d(q: PhaseQuadruple, y: float) -> float:
    """d(n, y) in the cancellation-free form of the h-difference"""
    h = _heights(q, y)
    scale = (2.0 * math.pi * y) ** 2
    gap = q.product_gap
    total = q.n1 * q.n2 + q.n3 * q.n4
    cross = h[0] * h[1] + h[2] * h[3]
    difference = scale * gap * (2.0 + 2.0 * (2.0 * q.t ** 2 + scale * total) / cross) / h.sum()
    return float(-difference / y)


def phase_dprime(q: PhaseQuadruple, y: float) -> float:
    h = _heights(q, y)
    return float(q.t ** 2 / y ** 2 * ((1.0 / h[0] + 1.0 / h[1]) - (1.0 / h[2] + 1.0 / h[3])))


def d_lower_bound(q: PhaseQuadruple, y: float) -> float:
    return D_LOWER_CONSTANT * y * abs(q.product_gap) / q.t


def quadruple_window(q: PhaseQuadruple, level: int) -> Tuple[float, float]:
    """
    Heights [alpha, beta] on which every 2 pi n_j y lies in
    [t - t^{1 - level eps}, t - t^{1 - (level + 1) eps}]
    """
    t, eps = q.t, q.eps
    alpha = max([0.5] + [(t - t ** (1.0 - level * eps)) / (2.0 * math.pi * n) for n in q.ns])
    beta = min((t - t ** (1.0 - (level + 1) * eps)) / (2.0 * math.pi * n) for n in q.ns)
    return alpha, beta


def gh_lower_bound(q: PhaseQuadruple, y: float, level: int) -> float:
    """
    Window-refined lower bound for |d| on [alpha, beta]:
    (pi^2 / (4 sqrt 2)) y |n1 n2 - n3 n4| t^{3 level eps / 2} / t
    """
    alpha, beta = quadruple_window(q, level)
    if not alpha <= y <= beta:
        raise DomainError(f"y={y} outside the level-{level} window [{alpha:.6g}, {beta:.6g}]")
    return (math.pi ** 2 / (4.0 * math.sqrt(2.0))) * y * abs(q.product_gap) * q.t ** (1.5 * level * q.eps) / q.t


def sample_admissible_quadruples(
    t: float, eps: float, count: int, rng: np.random.Generator
) -> List[Tuple[PhaseQuadruple, float]]:
    """
    Random admissible quadruples with a height y in [1/2, (t - t^{1-eps}) / (2 pi max n)]
    """
    cap = int(math.floor(PhaseQuadruple.frequency_cap(t, eps)))
    if cap < 3:
        raise DomainError(f"no admissible quadruples at t={t}, eps={eps}")
    samples = []
    while len(samples) < count:
        n1, n2, n3 = (int(v) for v in rng.integers(1, cap + 1, size=3))
        n4 = n1 + n2 - n3
        if not 1 <= n4 <= cap or n1 in (n3, n4):
            continue
        q = PhaseQuadruple(n1=n1, n2=n2, n3=n3, n4=n4, t=t, eps=eps)
        top = (t - t ** (1.0 - eps)) / (2.0 * math.pi * max(q.ns))
        samples.append((q, float(rng.uniform(0.5, top))))
    return samples
