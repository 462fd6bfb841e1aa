from typing import Dict
from pydantic import BaseModel


class RaySummary(BaseModel):
    system: str
    code: str
    dimension: int
    effective_dimension: int
    rays: int
    orthogonal_pairs: int
    degree_histogram: Dict[str, int]
    weight_counts: Dict[str, int]
