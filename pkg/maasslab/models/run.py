"""
Validated command-line run configuration
"""

import enum
from typing import Any, Dict, Optional

from pydantic import Field, field_validator

from maasslab.core.config import settings
from maasslab.models.base import LabModel

COMMANDS = ("kbessel", "solve", "norm", "signs", "nodal", "selftest")


class OutputFormat(str, enum.Enum):
    JSON = "json"
    CSV = "csv"


class RunConfig(LabModel):
    """One subcommand with its flags, checked before any computation"""

    command: str
    options: Dict[str, Any] = Field(default_factory=dict)
    output_format: OutputFormat = OutputFormat.JSON
    output: Optional[str] = None
    workers: int = Field(default_factory=lambda: settings.MAASSLAB_WORKERS, ge=1)
    seed: int = Field(default_factory=lambda: settings.DEFAULT_SEED)

    @field_validator("command")
    @classmethod
    def _known_command(cls, value: str) -> str:
        if value not in COMMANDS:
            raise ValueError(f"unknown command {value!r}")
        return value
