from pydantic import BaseModel, Field, model_validator
from typing import Dict, List, Optional


class FaceEntry(BaseModel):
    """A simplex as a degeneracy word applied to a nondegenerate target."""
    deg_word: List[int] = Field(default_factory=list)
    target: str


class SimplexEntry(BaseModel):
    """A nondegenerate simplex; entry i of faces is its i-th face."""
    id: str
    dim: int = Field(ge=0)
    faces: List[FaceEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_face_count(self) -> "SimplexEntry":
        expected = self.dim + 1 if self.dim > 0 else 0
        if len(self.faces) != expected:
            raise ValueError(f"simplex {self.id} of dimension {self.dim} needs {expected} faces, got {len(self.faces)}")
        return self


class SimplicialSetDocument(BaseModel):
    """A finite marked simplicial set."""
    dims: int = Field(ge=-1)
    simplices: List[SimplexEntry]
    marked: List[str] = Field(default_factory=list)
    labels: Optional[Dict[str, str]] = None
    aliases: Optional[Dict[str, List[str]]] = None
    name: Optional[str] = None

    @model_validator(mode="after")
    def check_references(self) -> "SimplicialSetDocument":
        dims = {s.id: s.dim for s in self.simplices}
        if len(dims) != len(self.simplices):
            raise ValueError("simplex ids must be unique")
        for s in self.simplices:
            if s.dim > self.dims:
                raise ValueError(f"simplex {s.id} exceeds dims={self.dims}")
            for face in s.faces:
                if face.target not in dims:
                    raise ValueError(f"face of {s.id} names unknown simplex {face.target}")
        for x in self.marked:
            if dims.get(x) != 1:
                raise ValueError(f"marked simplex {x} is not an edge")
        return self


class SimplicialMapDocument(BaseModel):
    """A map given on nondegenerate simplices of the source."""
    source: SimplicialSetDocument
    target: SimplicialSetDocument
    assignment: Dict[str, FaceEntry]
    name: Optional[str] = None
