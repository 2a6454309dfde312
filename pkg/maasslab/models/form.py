"""
Maass form and Hecke table models
"""

import math
from typing import Dict, Tuple

import numpy as np
from pydantic import Field, field_validator, model_validator

from maasslab.core.errors import InvariantViolationError, OddFormError, TableExtentError
from maasslab.models.base import LabModel


class Point(LabModel):
    """Point x + iy of the upper half plane"""

    x: float
    y: float = Field(gt=0)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


class HeckeTable(LabModel):
    """
    Hecke eigenvalues lambda(1..extent) of an even cusp form

    values[n - 1] holds lambda(n). Multiplicativity is established by the
    builder (hecke.hecke_extend); soft-bound violations are recorded, not fatal.
    """

    prime_eigenvalues: Dict[int, float]
    extent: int = Field(ge=1)
    values: Tuple[float, ...]
    bound_violations: Tuple[int, ...] = ()

    @model_validator(mode="after")
    def _check_shape(self):
        if len(self.values) != self.extent:
            raise InvariantViolationError(
                f"table holds {len(self.values)} values for extent {self.extent}"
            )
        if self.values[0] != 1.0:
            raise InvariantViolationError("lambda(1) must equal 1")
        return self

    def __getitem__(self, n: int) -> float:
        if n < 1 or n > self.extent:
            raise TableExtentError(n, self.extent)
        return self.values[n - 1]

    def head(self, count: int) -> np.ndarray:
        """lambda(1..count) as an array"""
        if count > self.extent:
            raise TableExtentError(count, self.extent)
        return np.asarray(self.values[:count], dtype=float)


class MaassForm(LabModel):
    """Even Hecke-Maass cusp form with its L2 normalisation"""

    t: float = Field(gt=0)
    parity: str = "even"
    hecke: HeckeTable
    rho_one: float = Field(gt=0)

    @field_validator("parity")
    @classmethod
    def _even_only(cls, value: str) -> str:
        if value != "even":
            raise OddFormError(f"parity {value!r} is not supported")
        return value

    @property
    def eigenvalue(self) -> float:
        return 0.25 + self.t * self.t

    @property
    def weyl_index(self) -> float:
        return self.eigenvalue / 24.0

    @property
    def log_t(self) -> float:
        return math.log(self.t)
