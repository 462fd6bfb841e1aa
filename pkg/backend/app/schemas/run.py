from typing import List, Literal, Optional
from pydantic import BaseModel, field_validator


class RunConfig(BaseModel):
    """One CLI invocation, validated before any work starts."""
    command: Literal["code", "rays", "bases", "ks", "pipeline"]
    code: str                         # built-in name, matrix file or (ks) bases JSON
    out: str
    budget: Optional[int] = None
    oracle_budget: Optional[int] = None
    threads: int = 1
    mode: Optional[Literal["translate", "enumerate"]] = None
    weight: Optional[int] = None
    restrict: List[int] = []
    puncture: Optional[int] = None
    override_expensive: bool = False
    emit_matrix: bool = False

    @field_validator("budget", "oracle_budget", "threads")
    @classmethod
    def positive(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v <= 0:
            raise ValueError(f"must be positive, got {v}")
        return v

    @field_validator("restrict")
    @classmethod
    def distinct_anchors(cls, v: List[int]) -> List[int]:
        if len(set(v)) != len(v):
            raise ValueError(f"anchor labels must be distinct: {v}")
        return v
