from pydantic import BaseModel, Field, model_validator
from typing import Dict, List, Optional, Tuple


class MorphismEntry(BaseModel):
    id: str
    src: str
    tgt: str


class FiniteCategoryDocument(BaseModel):
    """Objects, morphisms, identities and composition triples [g, f, g o f]."""
    name: Optional[str] = None
    objects: List[str]
    morphisms: List[MorphismEntry]
    identities: Dict[str, str]
    composition: List[Tuple[str, str, str]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_references(self) -> "FiniteCategoryDocument":
        objects = set(self.objects)
        ids = {m.id for m in self.morphisms}
        for m in self.morphisms:
            if m.src not in objects or m.tgt not in objects:
                raise ValueError(f"morphism {m.id} has an unknown endpoint")
        for obj, ident in self.identities.items():
            if obj not in objects or ident not in ids:
                raise ValueError(f"identity {ident} of {obj} is unknown")
        for triple in self.composition:
            unknown = [x for x in triple if x not in ids]
            if unknown:
                raise ValueError(f"composition triple {list(triple)} names unknown morphisms {unknown}")
        return self
