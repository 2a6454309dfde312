"""
Real-analytic functions restricted to a segment: horocycles, vertical
geodesics, the imaginary axis, the unit-circle arc and synthetic test functions
"""

import logging
import math
from typing import Callable, Optional

import numpy as np

from maasslab.core.config import settings
from maasslab.core.errors import DomainError
from maasslab.models.form import MaassForm
from maasslab.models.oscillation import SegmentKind
from maasslab.services.maass_form import Phi_row

logger = logging.getLogger(__name__)

ROW_TOL = 1e-13


class SegmentFunction:
    """
    A real function on [a, b] evaluated on arrays

    oscillation_scale is the shortest local wavelength; samplers place at
    least SIGN_SAMPLES_PER_OSCILLATION points per scale length.
    """

    def __init__(
        self,
        fn: Callable[[np.ndarray], np.ndarray],
        a: float,
        b: float,
        kind: SegmentKind = SegmentKind.SYNTHETIC,
        oscillation_scale: Optional[float] = None,
        resolution_hint: int = 0,
        label: str = "",
    ):
        if not b > a:
            raise DomainError(f"segment needs a < b, got [{a}, {b}]")
        self._fn = fn
        self.a = float(a)
        self.b = float(b)
        self.kind = kind
        self.oscillation_scale = float(oscillation_scale or (b - a))
        self.resolution_hint = int(resolution_hint)
        self.label = label

    def __call__(self, points) -> np.ndarray:
        return np.asarray(self._fn(np.atleast_1d(np.asarray(points, dtype=float))), dtype=float)

    def __repr__(self) -> str:
        return f"<SegmentFunction({self.kind.value} [{self.a:.6g}, {self.b:.6g}] {self.label})>"

    @property
    def length(self) -> float:
        return self.b - self.a

    def sample_count(self) -> int:
        dense = settings.SIGN_SAMPLES_PER_OSCILLATION * self.length / self.oscillation_scale
        return max(self.resolution_hint, int(math.ceil(dense)), 16)

    def restricted(self, a: float, b: float) -> "SegmentFunction":
        return SegmentFunction(self._fn, a, b, self.kind, self.oscillation_scale, self.resolution_hint, self.label)

    def combined(self, other: "SegmentFunction", weight: float) -> "SegmentFunction":
        """self - weight * other on the same interval"""
        scale = min(self.oscillation_scale, other.oscillation_scale)
        return SegmentFunction(
            lambda s: self(s) - weight * other(s), self.a, self.b, self.kind, scale,
            max(self.resolution_hint, other.resolution_hint), self.label,
        )

    @classmethod
    def from_callable(cls, fn, a: float, b: float, oscillation_scale: float = None, resolution_hint: int = 0):
        return cls(fn, a, b, SegmentKind.SYNTHETIC, oscillation_scale, resolution_hint)


def _vertical_values(form: MaassForm, x: float, ys: np.ndarray) -> np.ndarray:
    return np.array([Phi_row(form, [x], y, ROW_TOL)[0] for y in ys])


def horocycle(form: MaassForm, y: float) -> SegmentFunction:
    """x -> Phi(x + iy) on [-1/2, 1/2]"""
    top = (form.t + settings.BESSEL_CUTOFF * form.t ** (1.0 / 3.0)) / (2.0 * math.pi * y)
    return SegmentFunction(
        lambda xs: Phi_row(form, xs, y, ROW_TOL), -0.5, 0.5, SegmentKind.HOROCYCLE,
        oscillation_scale=1.0 / max(1.0, top), label=f"y={y:g}",
    )


def vertical(form: MaassForm, x: float, a: float, h: float) -> SegmentFunction:
    """y -> Phi(x + iy) on [a, a + h]"""
    if not a > 0 or not h > 0:
        raise DomainError(f"vertical segment needs a > 0 and h > 0, got a={a}, h={h}")
    kind = SegmentKind.AXIS if x == 0.0 else SegmentKind.VERTICAL
    return SegmentFunction(
        lambda ys: _vertical_values(form, x, ys), a, a + h, kind,
        oscillation_scale=2.0 * math.pi * a / form.t, label=f"x={x:g}",
    )


def axis(form: MaassForm, a: float, h: float) -> SegmentFunction:
    """y -> Phi(iy) on [a, a + h]"""
    return vertical(form, 0.0, a, h)


def unit_arc(form: MaassForm, theta_lo: float, theta_hi: float) -> SegmentFunction:
    """theta -> Phi(e^{i theta}) for pi/2 <= theta_lo < theta_hi <= 2 pi/3"""
    if not (math.pi / 2.0 - 1e-12 <= theta_lo < theta_hi <= 2.0 * math.pi / 3.0 + 1e-12):
        raise DomainError(f"arc angles must satisfy pi/2 <= lo < hi <= 2pi/3, got [{theta_lo}, {theta_hi}]")

    def values(thetas: np.ndarray) -> np.ndarray:
        return np.array([Phi_row(form, [math.cos(th)], math.sin(th), ROW_TOL)[0] for th in thetas])

    # d/dtheta of the phase is bounded by t / sin(theta)
    return SegmentFunction(
        values, theta_lo, theta_hi, SegmentKind.ARC,
        oscillation_scale=2.0 * math.pi * math.sin(2.0 * math.pi / 3.0) / form.t, label="unit arc",
    )
