"""
MUBTRIO Request Models - family selection and provenance
"""
from typing import Any, Dict

from pydantic import BaseModel, ConfigDict, Field


class FamilyRequest(BaseModel):
    """
    A family name plus its parameters.

    Stored next to every emitted matrix as {"family": ..., "params": {...}}.
    """
    model_config = ConfigDict(json_schema_extra={
        "example": {
            "family": "h2",
            "params": {"theta": 0.7, "phi": 1.3, "z1_arg": 0.4, "s2": 1, "s3": 1, "s4": 1}
        }
    })

    family: str = Field(..., min_length=1)
    params: Dict[str, Any] = Field(default_factory=dict)
