from pydantic import BaseModel, ConfigDict, Field
from typing import Dict, List, Optional

from src.app.schemas.simplicial import FaceEntry, SimplicialMapDocument, SimplicialSetDocument
from src.app.services.anodyne import AnodyneClass, GeneratorKind


class GeneratorDocument(BaseModel):
    """A generator instance: kind, dimension, horn index and the Kan complex for kan_marking."""
    model_config = ConfigDict(populate_by_name=True)

    kind: GeneratorKind = Field(alias="class")
    n: int = Field(default=0, ge=0)
    k: int = Field(default=0, ge=0)
    kan: Optional[SimplicialSetDocument] = None
    kan_bound: Optional[int] = None


class StepDocument(BaseModel):
    generator: GeneratorDocument
    attach: Dict[str, FaceEntry]
    names: Dict[str, str] = Field(default_factory=dict)
    stage: Optional[str] = None


class CertificateDocument(BaseModel):
    """An attachment certificate for an inclusion."""
    model_config = ConfigDict(populate_by_name=True)

    inclusion: SimplicialMapDocument
    target_class: AnodyneClass = Field(alias="class")
    steps: List[StepDocument]
    checkpoints: Dict[str, List[str]] = Field(default_factory=dict)
