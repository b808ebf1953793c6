"""Command-line run configuration."""

from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator


class Command(str, Enum):
    CONSTANTS = "constants"
    PROFILE = "profile"
    RAYLEIGH = "rayleigh"
    FRACOPS = "fracops"
    LEMMAS = "lemmas"
    VERIFY_ALL = "verify-all"


class OutputFormat(str, Enum):
    CSV = "csv"
    JSON = "json"


class RunConfig(BaseModel):
    """Everything a CLI run depends on."""
    command: Command
    s_grid: List[float] = Field(..., min_length=1)
    n: int = Field(default=2, ge=1)
    tolerances: Dict[str, float] = Field(default_factory=dict)
    output_format: OutputFormat = Field(default=OutputFormat.JSON)
    output_path: Optional[Path] = None
    seed: int = 0
    threads: int = Field(default=1, ge=1)
    quick: bool = False
    options: Dict[str, str] = Field(default_factory=dict, description="Command-specific flags")

    class Config:
        use_enum_values = True

    @field_validator("s_grid")
    @classmethod
    def _check_s(cls, values: List[float]) -> List[float]:
        for s in values:
            if not 0.0 < s < 1.0:
                raise ValueError(f"s = {s} is outside (0, 1)")
        return values
