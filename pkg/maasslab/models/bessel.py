"""
K-Bessel kernel models
"""

import enum

from pydantic import Field

from maasslab.models.base import LabModel


class RegimeTag(str, enum.Enum):
    """Regime of e^{pi r/2} K_{ir}(u) relative to the turning point u = r"""
    OSCILLATORY = "oscillatory"
    TRANSITION = "transition"
    EXPONENTIAL = "exponential"


class BesselRegime(LabModel):
    tag: RegimeTag
    cutoff: float = Field(gt=0)


class BesselEvaluation(LabModel):
    """Value of the rescaled kernel with its provenance"""

    value: float
    regime: BesselRegime
    error_estimate: float = Field(ge=0)
    terms_used: int = Field(ge=0)
