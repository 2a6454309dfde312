"""
Norm and quadrature result models
"""

import enum
from typing import List, Optional, Tuple

from pydantic import Field

from maasslab.models.base import LabModel


class RangeLabel(str, enum.Enum):
    """n-window labels of the range decomposition"""
    PSI_0 = "psi0"
    PSI_1L = "psi1l"
    PSI_1EPS = "psi1eps"
    PSI_21 = "psi21"
    PSI_22 = "psi22"
    PSI_3 = "psi3"


class QuadratureResult(LabModel):
    value: float
    cap: float
    strip: float
    tail: float = Field(ge=0)
    error_estimate: float = Field(ge=0)
    evaluations: int = Field(ge=0)


class HorocycleParseval(LabModel):
    """Main term of the horocycle L2 norm and its error budget"""

    y: float = Field(gt=0.5)
    main_term: float = Field(ge=0)
    error_budget: float = Field(ge=0)
    delta: float = Field(gt=0)
    in_claimed_range: bool = True


class RangePiece(LabModel):
    """
    One piece psi of the decomposition of a horocycle row

    n_ranges are the n-windows at the reference height (psi22 has two).
    """

    label: RangeLabel
    level: Optional[int] = None
    n_ranges: List[Tuple[int, int]]
    reference_height: float
    contribution_l4: float = Field(ge=0)

    @property
    def name(self) -> str:
        return f"{self.label.value}_{self.level}" if self.level is not None else self.label.value


class NormResult(LabModel):
    """Lp norm of a form over the fundamental domain"""

    p: float = Field(gt=0)
    value: float = Field(ge=0)
    integral: float = Field(ge=0)
    tail_bound: float = Field(ge=0)
    y_max: float
    quad_order: int
    error_estimate: float = Field(ge=0)
