from typing import Any, Dict, List, Literal, Optional
from pydantic import BaseModel, SerializerFunctionWrapHandler, model_serializer, model_validator


class BasesDocument(BaseModel):
    """
    Serialized BasisSystem. The translation-table variant also carries the
    matrix with the original column positions.
    """
    ray_system: str
    dimension: int
    bases: List[List[int]]
    occurrence: Dict[str, int]
    ordering: Literal["canonical", "translation-table"]
    matrix: Optional[List[List[int]]] = None

    @model_validator(mode="after")
    def check_shape(self) -> "BasesDocument":
        for b in self.bases:
            if len(b) != self.dimension:
                raise ValueError(f"basis {b} does not have {self.dimension} rays")
        if self.ordering == "translation-table" and self.matrix is None:
            raise ValueError("translation-table documents need a matrix")
        return self

    @model_serializer(mode="wrap")
    def drop_missing_matrix(self, handler: SerializerFunctionWrapHandler) -> Dict[str, Any]:
        data = handler(self)
        if data.get("matrix") is None:
            data.pop("matrix", None)
        return data
