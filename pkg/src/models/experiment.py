"""Validated description of one experiment run"""
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator

from .enums import ExperimentId, SweepAxis


class ExperimentSpec(BaseModel):
    """What to run: experiment id, sweep axis and grid, trials, seed, output.

    ``elements`` fixes N when the sweep runs over power.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    experiment: ExperimentId
    axis: SweepAxis = SweepAxis.N
    grid: List[float]
    trials: int = Field(1000, ge=1)
    seed: int = Field(42, ge=0)
    output: Path
    workers: int = Field(1, ge=1)
    elements: Optional[int] = Field(None, ge=1)

    @field_validator("grid")
    @classmethod
    def _strictly_increasing(cls, grid: List[float]) -> List[float]:
        if not grid:
            raise ValueError("sweep grid must not be empty")
        if any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("sweep grid must be strictly increasing")
        return grid
