from typing import Dict, List
from pydantic import BaseModel


class CodeReport(BaseModel):
    """Parameters and weight distribution of a linear code."""
    name: str
    field_order: int
    length: int
    dimension: int
    min_distance: int
    symbol: str                       # e.g. "[24,12,8]"
    codewords: int
    weight_distribution: Dict[str, int]
    matrix: List[str]                 # human-readable rows, -1 for ternary digit 2
