"""
Sign-change, Littlewood certificate and phase models
"""

import enum
import math
from typing import List, Optional

from pydantic import Field, model_validator

from maasslab.core.errors import DomainError
from maasslab.models.base import LabModel


class SegmentKind(str, enum.Enum):
    HOROCYCLE = "horocycle"
    VERTICAL = "vertical"
    AXIS = "axis"
    ARC = "arc"
    SYNTHETIC = "synthetic"


class ConstantsProfile(str, enum.Enum):
    """exact: certified constants; relaxed: desk-scale diagnostic only"""
    EXACT = "exact"
    RELAXED = "relaxed"


class LittlewoodCertificate(LabModel):
    a: float
    b: float
    c: float = Field(gt=0, le=1)
    omega: float = Field(ge=0)
    N: float = Field(gt=0)
    eta: float = Field(ge=0)
    M1: float = Field(ge=0)
    M2: float = Field(ge=0)
    J: float = Field(ge=0)
    g_bound: float = Field(ge=0)
    premises: List[bool]
    premises_hold: bool
    lower_bound: int = Field(ge=0)
    profile: ConstantsProfile = ConstantsProfile.EXACT
    large_value_measure: Optional[float] = None

    @property
    def certified(self) -> bool:
        return self.premises_hold and self.profile == ConstantsProfile.EXACT


class PhaseQuadruple(LabModel):
    """
    Frequencies (n1, n2, n3, n4) with n1 + n2 = n3 + n4 and n1 not in {n3, n4},
    all at most (t - t^{1-eps}) / pi
    """

    n1: int = Field(ge=1)
    n2: int = Field(ge=1)
    n3: int = Field(ge=1)
    n4: int = Field(ge=1)
    t: float = Field(gt=1)
    eps: float = Field(gt=0, lt=1)

    @model_validator(mode="after")
    def _admissible(self):
        if self.n1 + self.n2 != self.n3 + self.n4:
            raise DomainError("quadruple must satisfy n1 + n2 = n3 + n4")
        if self.n1 in (self.n3, self.n4):
            raise DomainError("n1 must differ from n3 and n4")
        if max(self.ns) > self.frequency_cap(self.t, self.eps):
            raise DomainError(f"frequencies exceed the cap {self.frequency_cap(self.t, self.eps):.3f}")
        return self

    @property
    def ns(self) -> tuple:
        return (self.n1, self.n2, self.n3, self.n4)

    @staticmethod
    def frequency_cap(t: float, eps: float) -> float:
        return (t - t ** (1.0 - eps)) / math.pi

    @property
    def product_gap(self) -> int:
        """n1 n2 - n3 n4, never zero for an admissible quadruple"""
        return self.n1 * self.n2 - self.n3 * self.n4


class SignCount(LabModel):
    count: int = Field(ge=0)
    samples: int = Field(ge=2)
    roots: List[float]
    stable: bool


class SelectedWindow(LabModel):
    """Outcome of the good-height (or good-abscissa) search in one window"""

    index: int
    lower: float
    upper: float
    position: Optional[float] = None
    ratio: float
    accepted: bool


class WindowSelection(LabModel):
    M: float
    windows: List[SelectedWindow]

    @property
    def success_fraction(self) -> float:
        if not self.windows:
            return 0.0
        return sum(w.accepted for w in self.windows) / len(self.windows)

    @property
    def positions(self) -> List[float]:
        return [w.position for w in self.windows if w.accepted]


class CertificationReport(LabModel):
    """Certificate of one segment plus the direct count it must not exceed"""

    mode: SegmentKind
    t: float
    eps1: float
    parameters: dict
    certificate: LittlewoodCertificate
    relaxed: LittlewoodCertificate
    direct_count: int = Field(ge=0)
