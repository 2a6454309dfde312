"""
Eigensolver configuration and result models
"""

from typing import Optional

from pydantic import Field, model_validator

from maasslab.core.config import settings
from maasslab.core.errors import DomainError
from maasslab.models.base import LabModel
from maasslab.models.form import MaassForm


class SolverConfig(LabModel):
    """
    Collocation parameters for the search of even forms with t in [t_min, t_max]

    truncation must be at least 2 t_max; sample_height lies in (1/2, 1).
    """

    t_min: float = Field(gt=0)
    t_max: float = Field(gt=0)
    truncation: int = Field(ge=2)
    sample_height: float = 0.8
    tolerance: float = Field(default=1e-6, gt=0)
    scan_step: float = Field(default=settings.SOLVER_SCAN_STEP, gt=0)
    sample_count: Optional[int] = Field(default=None, ge=2)
    dip_ratio: float = Field(default=settings.SOLVER_DIP_RATIO, gt=0, lt=1)
    extension_height: float = Field(default=0.25, gt=0, lt=0.5)

    @model_validator(mode="after")
    def _check(self):
        if not self.t_max > self.t_min:
            raise DomainError(f"search interval [{self.t_min}, {self.t_max}] is empty")
        if self.truncation < 2.0 * self.t_max:
            raise DomainError(f"truncation {self.truncation} is below 2 t_max = {2.0 * self.t_max:g}")
        if not 0.5 < self.sample_height < 1.0:
            raise DomainError(f"sample height must lie in (1/2, 1), got {self.sample_height}")
        if self.sample_height - settings.SOLVER_HEIGHT_OFFSET <= 0.5:
            raise DomainError(
                f"second height {self.sample_height - settings.SOLVER_HEIGHT_OFFSET:g} must stay above 1/2"
            )
        return self

    @property
    def rows(self) -> int:
        return self.sample_count or 2 * self.truncation


class SolverResult(LabModel):
    """A solved form with the diagnostics of its solve"""

    form: MaassForm
    dip_value: float = Field(ge=0)
    median_singular_value: float = Field(ge=0)
    condition: float = Field(ge=1)
    automorphy_residual: float = Field(ge=0)
    hecke_residual: float = Field(ge=0)
    converged: bool
