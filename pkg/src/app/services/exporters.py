"""JSON and DOT export of simplicial sets, maps, certificates, categories and operads, and JSON import."""
import json
import logging
from pathlib import Path
from typing import Any, Dict, Hashable, Mapping, Union

from graphviz import Digraph, escape
from pydantic import BaseModel, ValidationError

from src.app.core.exceptions import OperadAxiomError, SchemaValidationError
from src.app.schemas.category import FiniteCategoryDocument, MorphismEntry
from src.app.schemas.certificate import CertificateDocument, GeneratorDocument, StepDocument
from src.app.schemas.operad import OperadDocument
from src.app.schemas.simplicial import FaceEntry, SimplexEntry, SimplicialMapDocument, SimplicialSetDocument
from src.app.services.anodyne import AttachmentCertificate, AttachmentStep, GeneratorSpec, generator_map
from src.app.services.categories import FiniteCategory
from src.app.services.operads import TabulatedOperad
from src.app.services.simplex_ops import SimplexOp
from src.app.services.simplicial_set import SimplexRef, SimplicialMap, SimplicialSet

logger = logging.getLogger(__name__)

Exportable = Union[SimplicialSet, SimplicialMap, AttachmentCertificate, FiniteCategory]


def _entry(ref: SimplexRef) -> FaceEntry:
    eta, target = ref
    op = SimplexOp(len(eta) - 1, max(eta), tuple(eta))
    return FaceEntry(deg_word=list(op.degeneracy_word), target=target)


def _ref(entry: FaceEntry, source_dim: int) -> SimplexRef:
    return SimplexOp.from_words(entry.deg_word, (), source_dim).values, entry.target


# simplicial sets


def simplicial_to_document(space: SimplicialSet) -> SimplicialSetDocument:
    simplices = [
        SimplexEntry(id=x, dim=space.dim(x), faces=[_entry(ref) for ref in space.faces(x)]) for x in space.ids()
    ]
    labels = {v: space.label(v) for v in space.vertices() if space.label(v) != v}
    return SimplicialSetDocument(
        dims=space.top_dim,
        simplices=simplices,
        marked=sorted(space.marked),
        labels=labels or None,
        aliases={v: list(a) for v, a in space.aliases.items()} or None,
        name=space.name or None,
    )


def simplicial_from_document(doc: SimplicialSetDocument) -> SimplicialSet:
    dims = {s.id: s.dim for s in doc.simplices}
    faces = {s.id: [_ref(face, s.dim - 1) for face in s.faces] for s in doc.simplices}
    space = SimplicialSet(dims, faces, doc.marked, doc.labels, doc.name or "", aliases=doc.aliases)
    space.validate()
    return space


def map_to_document(f: SimplicialMap) -> SimplicialMapDocument:
    return SimplicialMapDocument(
        source=simplicial_to_document(f.source),
        target=simplicial_to_document(f.target),
        assignment={x: _entry(ref) for x, ref in f.assignment.items()},
        name=f.name or None,
    )


def map_from_document(doc: SimplicialMapDocument) -> SimplicialMap:
    source = simplicial_from_document(doc.source)
    target = simplicial_from_document(doc.target)
    assignment = {x: _ref(entry, source.dim(x)) for x, entry in doc.assignment.items() if x in source}
    return SimplicialMap(source, target, assignment, doc.name or "").check(marked=False)


# certificates


def certificate_to_document(cert: AttachmentCertificate) -> CertificateDocument:
    steps = []
    for step in cert.steps:
        spec = step.generator
        steps.append(
            StepDocument(
                generator=GeneratorDocument(
                    kind=spec.kind,
                    n=spec.n,
                    k=spec.k,
                    kan=simplicial_to_document(spec.kan) if spec.kan is not None else None,
                    kan_bound=spec.kan_bound,
                ),
                attach={x: _entry(ref) for x, ref in step.attach.items()},
                names=dict(step.names),
                stage=step.stage,
            )
        )
    return CertificateDocument(
        inclusion=map_to_document(cert.inclusion),
        target_class=cert.target_class,
        steps=steps,
        checkpoints={k: list(v) for k, v in cert.checkpoints.items()},
    )


def certificate_from_document(doc: CertificateDocument) -> AttachmentCertificate:
    steps = []
    for step in doc.steps:
        g = step.generator
        spec = GeneratorSpec(
            g.kind, g.n, g.k, simplicial_from_document(g.kan) if g.kan is not None else None, g.kan_bound
        )
        source = generator_map(spec).source
        attach = {x: _ref(entry, source.dim(x)) for x, entry in step.attach.items() if x in source}
        steps.append(AttachmentStep(spec, attach, dict(step.names), step.stage))
    return AttachmentCertificate(map_from_document(doc.inclusion), doc.target_class, steps, dict(doc.checkpoints))


# categories


def _names(items, prefix: str) -> Dict[Hashable, str]:
    names: Dict[Hashable, str] = {}
    used = set()
    for index, item in enumerate(items):
        name = item if isinstance(item, str) else str(item)
        if name in used:
            name = f"{prefix}{index}:{name}"
        used.add(name)
        names[item] = name
    return names


def category_to_document(category: FiniteCategory) -> FiniteCategoryDocument:
    objects = _names(category.objects, "o")
    morphisms = _names(list(category.morphisms), "m")
    composition = []
    for f, (a, b) in category.morphisms.items():
        for g in category.outgoing(b):
            composition.append((morphisms[g], morphisms[f], morphisms[category.compose(g, f)]))
    return FiniteCategoryDocument(
        name=category.name or None,
        objects=[objects[a] for a in category.objects],
        morphisms=[MorphismEntry(id=morphisms[m], src=objects[a], tgt=objects[b]) for m, (a, b) in category.morphisms.items()],
        identities={objects[a]: morphisms[i] for a, i in category.identities.items()},
        composition=composition,
    )


def category_from_document(doc: FiniteCategoryDocument) -> FiniteCategory:
    morphisms = {m.id: (m.src, m.tgt) for m in doc.morphisms}
    table = {(g, f): h for g, f, h in doc.composition}
    for a, ident in doc.identities.items():
        for m, (s, t) in morphisms.items():
            if s == a:
                table.setdefault((m, ident), m)
            if t == a:
                table.setdefault((ident, m), m)
    return FiniteCategory(doc.objects, morphisms, doc.identities, table, doc.name or "")


# operads


def operad_from_document(doc: OperadDocument, require_unital: bool = True) -> TabulatedOperad:
    """Build a tabulated operad.

    Raises:
        OperadAxiomError: if ``require_unital`` and some color lacks a unique nullary operation
    """
    operad = TabulatedOperad(
        doc.name,
        doc.colors,
        doc.signatures(),
        doc.identities,
        {(outer, slot, inner): result for outer, slot, inner, result in doc.compose},
        {(op, tuple(perm)): result for op, perm, result in doc.sym_action},
    )
    if require_unital and not operad.is_unital:
        missing = [c for c in operad.colors if len(operad.nullary(c)) != 1]
        raise OperadAxiomError(
            f"Operad {doc.name} fails unitality: colors {missing} need exactly one nullary operation",
            {"colors": missing},
        )
    return operad


# DOT


def to_dot(item: Union[SimplicialSet, FiniteCategory]) -> str:
    """DOT source of a 1-skeleton or of a category without its identities."""
    graph = Digraph(item.name or "G")
    if isinstance(item, SimplicialSet):
        for v in item.vertices():
            graph.node(v, label=escape(item.label(v)))
        for e in item.edges():
            source, target = item.vertices_of(e)
            graph.edge(source, target, label=escape(e), style="bold" if e in item.marked else "solid")
        return graph.source
    objects = _names(item.objects, "o")
    morphisms = _names(list(item.morphisms), "m")
    for a in item.objects:
        graph.node(objects[a])
    for m, (a, b) in item.morphisms.items():
        if not item.is_identity(m):
            graph.edge(objects[a], objects[b], label=escape(morphisms[m]))
    return graph.source


# files


def to_document(item: Exportable) -> BaseModel:
    if isinstance(item, SimplicialSet):
        return simplicial_to_document(item)
    if isinstance(item, SimplicialMap):
        return map_to_document(item)
    if isinstance(item, AttachmentCertificate):
        return certificate_to_document(item)
    if isinstance(item, FiniteCategory):
        return category_to_document(item)
    raise TypeError(f"Cannot export {type(item).__name__}")


def export(item: Exportable, fmt: str = "json") -> str:
    """Render an object as JSON or DOT text."""
    if fmt == "dot":
        return to_dot(item)
    if fmt != "json":
        raise ValueError(f"Unknown format {fmt}")
    return to_document(item).model_dump_json(indent=2, by_alias=True, exclude_none=True)


_DOCUMENTS = (
    ("steps", CertificateDocument, certificate_from_document),
    ("assignment", SimplicialMapDocument, map_from_document),
    ("simplices", SimplicialSetDocument, simplicial_from_document),
    ("ops", OperadDocument, operad_from_document),
    ("morphisms", FiniteCategoryDocument, category_from_document),
)


def parse_document(data: Mapping[str, Any]) -> Any:
    """Validate a decoded JSON document and build the object it describes.

    Raises:
        SchemaValidationError: with the field paths pydantic reports
    """
    for key, model, build in _DOCUMENTS:
        if key in data:
            try:
                doc = model.model_validate(data)
            except ValidationError as e:
                fields = [
                    {"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]} for err in e.errors()
                ]
                logger.error(f"Schema validation failed for {model.__name__}: {fields[:3]}")
                raise SchemaValidationError(f"Invalid {model.__name__}", {"errors": fields}) from e
            return build(doc)
    raise SchemaValidationError("Unrecognized document", {"keys": sorted(data)})


def import_file(path: Union[str, Path]) -> Any:
    """Read a JSON file written by ``export`` (or by hand)."""
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaValidationError(f"{path} is not JSON", {"line": e.lineno, "column": e.colno}) from e
    return parse_document(data)
