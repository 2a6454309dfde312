"""
Sign grid and nodal report models
"""

import enum
import math
from typing import Optional, Tuple

import numpy as np
from pydantic import Field, model_validator

from maasslab.core.errors import DomainError
from maasslab.models.base import LabModel

BS_TARGET = (2.0 / math.pi) * (3.0 * math.sqrt(3.0) - 5.0)


class NodalLocus(str, enum.Enum):
    """Pieces of the reflection locus: x = 0, x = 1/2 and the unit arc"""
    DELTA1 = "delta1"
    DELTA2 = "delta2"
    DELTA3 = "delta3"


class SignGrid(LabModel):
    """
    Cell-centred signs of a field on rect = (x0, x1, y0, y1)

    signs[i, j] is the sign at (x0 + (i + 1/2) dx, y0 + (j + 1/2) dy), zero
    where the value was below the row tolerance.
    """

    rect: Tuple[float, float, float, float]
    nx: int = Field(ge=1)
    ny: int = Field(ge=1)
    signs: np.ndarray

    @model_validator(mode="after")
    def _check_shape(self):
        x0, x1, y0, y1 = self.rect
        if not (x1 > x0 and y1 > y0):
            raise DomainError(f"degenerate rectangle {self.rect}")
        if self.signs.shape != (self.nx, self.ny):
            raise DomainError(f"signs shape {self.signs.shape} does not match ({self.nx}, {self.ny})")
        return self

    @property
    def spacing(self) -> Tuple[float, float]:
        x0, x1, y0, y1 = self.rect
        return (x1 - x0) / self.nx, (y1 - y0) / self.ny

    @property
    def xs(self) -> np.ndarray:
        return self.rect[0] + (np.arange(self.nx) + 0.5) * self.spacing[0]

    @property
    def ys(self) -> np.ndarray:
        return self.rect[2] + (np.arange(self.ny) + 0.5) * self.spacing[1]

    def to_dict(self):
        return {
            "rect": list(self.rect),
            "nx": self.nx,
            "ny": self.ny,
            "signs": self.signs.astype(int).tolist(),
        }


class NodalReport(LabModel):
    rect: Tuple[float, float, float, float]
    nx: int
    ny: int
    component_count: int = Field(ge=0)
    refined_count: Optional[int] = None
    refinement_stable: Optional[bool] = None
    inert_lower_bound: int = Field(ge=0)
    courant_budget: float = Field(gt=0)
    courant_ok: bool
    bs_ratio: float
    bs_target: float = BS_TARGET
