"""
Run summary written next to the artifacts of every optimization run
"""

from pathlib import Path
from typing import Any, Dict, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from config import logger

_logger = logger(__name__)


class RunSummary(BaseModel):
    """Fixed-key record of one run; robustness sign must match the verdict"""
    model_config = ConfigDict(extra="forbid")

    scenario: str
    seed: int
    updates: int = Field(..., ge=0)
    converged: bool
    robustness: float = Field(..., description="Weighted robustness of the final rollout")
    smooth_robustness: float
    satisfied: bool = Field(..., description="Boolean monitor verdict on the final rollout")
    wall_seconds: float = Field(..., ge=0)
    settings: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _verdict_matches_sign(self) -> "RunSummary":
        if (self.robustness > 0 and not self.satisfied) or (self.robustness < 0 and self.satisfied):
            raise ValueError(
                f"robustness {self.robustness} disagrees with verdict satisfied={self.satisfied}"
            )
        return self


def write_summary(path: Union[str, Path], summary: RunSummary) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(summary.model_dump_json(indent=2) + "\n", encoding="utf-8")
    _logger.debug(f"Wrote {path}")
    return path


def read_summary(path: Union[str, Path]) -> RunSummary:
    return RunSummary.model_validate_json(Path(path).read_text(encoding="utf-8"))
