"""
Quadrature over the standard fundamental domain of SL2(Z)
"""

import logging
import math
from typing import Callable, Optional

import numpy as np

from maasslab.core.config import settings
from maasslab.core.quadrature import adaptive_integral, gauss_legendre, periodic_nodes
from maasslab.models.norms import QuadratureResult

logger = logging.getLogger(__name__)

RowIntegrand = Callable[[np.ndarray, float], np.ndarray]

CAP_TOP = 1.0
CAP_ANGLE = math.pi / 6.0


class FundamentalDomainQuadrature:
    """
    Integrates f(x, y) dx dy / y^2 over {|x| <= 1/2, |z| >= 1, y <= y_max}

    The cap sqrt(3)/2 <= y <= 1 is parameterised by y = cos(theta), theta in
    [0, pi/6], with Gauss-Legendre nodes in x on [sin(theta), 1/2] and its
    mirror. The strip 1 <= y <= y_max uses the periodic trapezoid rule in x
    and adaptive panels in y.
    """

    def __init__(self, x_count: int = None, cap_order: int = None, breakpoints=()):
        self.x_count = x_count or settings.QUAD_ORDER
        self.cap_order = cap_order or settings.QUAD_ORDER
        self.breakpoints = tuple(breakpoints)
        self.evaluations = 0

    def _strip_row(self, integrand: RowIntegrand, y: float) -> float:
        xs = periodic_nodes(self.x_count)
        self.evaluations += xs.size
        return float(np.mean(integrand(xs, y))) / (y * y)

    def _cap_row(self, integrand: RowIntegrand, theta: float) -> float:
        y = math.cos(theta)
        left = math.sin(theta)
        xs, ws = gauss_legendre(self.cap_order, left, 0.5)
        values = integrand(np.concatenate([xs, -xs]), y)
        self.evaluations += values.size
        inner = ws @ (values[: xs.size] + values[xs.size:])
        return float(inner) * math.sin(theta) / (y * y)

    def integrate(
        self,
        integrand: RowIntegrand,
        y_max: float = None,
        tail: Optional[Callable[[float], float]] = None,
        epsabs: float = None,
    ) -> QuadratureResult:
        """
        Args:
            integrand: vectorised in x, f(xs, y) -> values
            y_max: upper cut of the strip
            tail: optional bound or exact value of the part above y_max
            epsabs: absolute panel tolerance

        Returns:
            QuadratureResult with the cap, strip and tail contributions
        """
        y_max = y_max or settings.DEFAULT_Y_MAX
        epsabs = settings.QUAD_PANEL_TOL if epsabs is None else epsabs

        cap, cap_err = adaptive_integral(
            lambda theta: self._cap_row(integrand, theta), 0.0, CAP_ANGLE, epsabs=epsabs
        )
        strip, strip_err = adaptive_integral(
            lambda y: self._strip_row(integrand, y), CAP_TOP, y_max,
            breakpoints=self.breakpoints, epsabs=epsabs,
        )
        tail_value = float(tail(y_max)) if tail is not None else 0.0
        logger.debug(f"domain quadrature: cap={cap:.6e} strip={strip:.6e} tail={tail_value:.3e}")
        return QuadratureResult(
            value=cap + strip + tail_value,
            cap=cap,
            strip=strip,
            tail=tail_value,
            error_estimate=cap_err + strip_err,
            evaluations=self.evaluations,
        )
