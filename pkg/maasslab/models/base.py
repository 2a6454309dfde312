"""
Base model shared by every domain type
"""

from typing import Any, Dict

from pydantic import BaseModel, ConfigDict


class LabModel(BaseModel):
    """Frozen base model with JSON-ready dictionary export"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    def to_dict(self) -> Dict[str, Any]:
        """Convert model to dictionary"""
        return self.model_dump(mode="json")

    def __repr__(self) -> str:
        fields = ", ".join(f"{k}={v!r}" for k, v in list(self.__dict__.items())[:4])
        return f"<{self.__class__.__name__}({fields})>"
