from typing import List, Literal, Optional
from pydantic import BaseModel

from app.schemas.certificate import CertificateDocument


class PipelineDocument(BaseModel):
    code: str
    length: int
    dimension: int
    min_distance: int
    rays: int
    divisible: bool
    seed_status: Literal["found", "exhausted", "absent", "not-run"]
    seed_nodes: int
    seed: Optional[List[int]] = None
    seed_words: Optional[List[str]] = None
    certificate: Optional[CertificateDocument] = None
    notes: List[str] = []
