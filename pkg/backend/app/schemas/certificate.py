from typing import Dict, List, Literal, Optional
from pydantic import BaseModel


class SymbolDocument(BaseModel):
    classes: List[List[int]]          # [rays, occurrence]
    bases: int
    size: int


class EquationDocument(BaseModel):
    coeffs: List[int]
    bounds: List[int]
    target: int


class CertificateDocument(BaseModel):
    """Machine form of one row of the KS proof summary table."""
    system: str
    symbol: SymbolDocument
    equation: EquationDocument
    diophantine_feasible: bool
    witness: Optional[List[int]] = None
    oracle: Literal["feasible", "infeasible", "unknown"]
    oracle_note: Optional[str] = None  # set when the oracle verdict is "unknown"
    assignment: Optional[List[int]] = None
    weight_classes: Optional[Dict[str, List[int]]] = None
    ks_proved: bool
