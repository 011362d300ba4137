"""Generating anodyne maps, the pushout-join and certificate replay.

A map of marked simplicial sets is a ``SimplicialMap`` between marked
``SimplicialSet`` values; monomorphisms are mostly literal inclusions, where
the source's simplex ids are ids of the target.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Tuple

from src.app.core.config import settings
from src.app.core.exceptions import CertificateError, InvalidSimplicialDataError, SsokError
from src.app.services.categories import FiniteCategory, builtin_corpus, nerve_truncated, parallel_pair
from src.app.services.constructions import (
    boundary,
    flat,
    horn,
    join,
    mark_edges,
    pushout,
    sharp,
    simplex_id,
    standard_simplex,
    subcomplex,
)
from src.app.services.isomorphism import find_isomorphism
from src.app.services.simplex_ops import identity
from src.app.services.simplicial_set import SimplexRef, SimplicialMap, SimplicialSet

logger = logging.getLogger(__name__)

# A map of marked simplicial sets.
MarkedMap = SimplicialMap


class GeneratorKind(str, Enum):
    """Elementary generating inclusions."""

    CELL = "cell"
    CELL_FLAT = "cell_flat"
    INNER_HORN = "inner_horn"
    INNER_HORN_FLAT = "inner_horn_flat"
    LEFT_HORN_MARKED = "left_horn_marked"
    RIGHT_HORN_MARKED = "right_horn_marked"
    MARKED_TRIANGLE = "marked_triangle"
    KAN_MARKING = "kan_marking"
    EDGE_MARKING = "edge_marking"


class GeneratorClass(str, Enum):
    CELL = "Cell"
    INNER_HORN = "InnHorn"
    CELL_FLAT = "Cell_flat"
    INNER_HORN_FLAT = "InnHorn_flat"
    LEFT_HORN_SHARP = "LHorn_sharp"
    RIGHT_HORN_SHARP = "RHorn_sharp"
    MARKED_TRIANGLE = "marked_triangle"
    FINITE_KAN = "finite_Kan"


class AnodyneClass(str, Enum):
    INNER = "inner_anodyne"
    MARKED = "marked_anodyne"
    RIGHT_MARKED = "right_marked_anodyne"
    LEFT_MARKED = "left_marked_anodyne"
    MONO = "monomorphism"


GENERATOR_FAMILIES: Dict[GeneratorClass, FrozenSet[GeneratorKind]] = {
    GeneratorClass.CELL: frozenset({GeneratorKind.CELL}),
    GeneratorClass.INNER_HORN: frozenset({GeneratorKind.INNER_HORN}),
    GeneratorClass.CELL_FLAT: frozenset({GeneratorKind.CELL_FLAT}),
    GeneratorClass.INNER_HORN_FLAT: frozenset({GeneratorKind.INNER_HORN_FLAT}),
    GeneratorClass.LEFT_HORN_SHARP: frozenset({GeneratorKind.INNER_HORN_FLAT, GeneratorKind.LEFT_HORN_MARKED}),
    GeneratorClass.RIGHT_HORN_SHARP: frozenset({GeneratorKind.INNER_HORN_FLAT, GeneratorKind.RIGHT_HORN_MARKED}),
    GeneratorClass.MARKED_TRIANGLE: frozenset({GeneratorKind.MARKED_TRIANGLE}),
    GeneratorClass.FINITE_KAN: frozenset({GeneratorKind.KAN_MARKING}),
}

CLASS_GENERATORS: Dict[AnodyneClass, Tuple[GeneratorClass, ...]] = {
    AnodyneClass.INNER: (GeneratorClass.INNER_HORN,),
    AnodyneClass.MARKED: (
        GeneratorClass.LEFT_HORN_SHARP,
        GeneratorClass.RIGHT_HORN_SHARP,
        GeneratorClass.MARKED_TRIANGLE,
        GeneratorClass.FINITE_KAN,
    ),
    AnodyneClass.RIGHT_MARKED: (
        GeneratorClass.RIGHT_HORN_SHARP,
        GeneratorClass.MARKED_TRIANGLE,
        GeneratorClass.FINITE_KAN,
    ),
    AnodyneClass.LEFT_MARKED: (
        GeneratorClass.LEFT_HORN_SHARP,
        GeneratorClass.MARKED_TRIANGLE,
        GeneratorClass.FINITE_KAN,
    ),
    AnodyneClass.MONO: (GeneratorClass.CELL_FLAT,),
}


def allowed_kinds(target_class: AnodyneClass) -> FrozenSet[GeneratorKind]:
    kinds = set()
    for family in CLASS_GENERATORS[target_class]:
        kinds |= GENERATOR_FAMILIES[family]
    if target_class == AnodyneClass.MONO:
        kinds.add(GeneratorKind.EDGE_MARKING)
    return frozenset(kinds)


@dataclass
class GeneratorSpec:
    """One generator instance: a kind with its parameters."""

    kind: GeneratorKind
    n: int = 0
    k: int = 0
    kan: Optional[SimplicialSet] = None
    kan_bound: Optional[int] = None


def generator_map(spec: GeneratorSpec) -> MarkedMap:
    """The inclusion of marked simplicial sets named by a generator spec.

    Raises:
        InvalidSimplicialDataError: if the parameters are out of range
    """
    kind, n, k = spec.kind, spec.n, spec.k
    if kind in (GeneratorKind.INNER_HORN, GeneratorKind.INNER_HORN_FLAT):
        if not 0 < k < n:
            raise InvalidSimplicialDataError("Inner horns need 0 < k < n", {"n": n, "k": k})
        return SimplicialMap.inclusion(horn(n, k), standard_simplex(n), f"Lambda^{n}_{k}")
    if kind in (GeneratorKind.CELL, GeneratorKind.CELL_FLAT):
        return SimplicialMap.inclusion(boundary(n), standard_simplex(n), f"dDelta^{n}")
    if kind == GeneratorKind.LEFT_HORN_MARKED:
        if n < 1:
            raise InvalidSimplicialDataError("Marked left horns need n >= 1", {"n": n})
        edge = simplex_id(["0", "1"])
        source = horn(n, 0)
        if edge in source:
            source = mark_edges(source, [edge])
        return SimplicialMap.inclusion(source, mark_edges(standard_simplex(n), [edge]), f"Lambda^{n}_0[0->1]")
    if kind == GeneratorKind.RIGHT_HORN_MARKED:
        if n < 1:
            raise InvalidSimplicialDataError("Marked right horns need n >= 1", {"n": n})
        edge = simplex_id([str(n - 1), str(n)])
        source = horn(n, n)
        if edge in source:
            source = mark_edges(source, [edge])
        return SimplicialMap.inclusion(
            source, mark_edges(standard_simplex(n), [edge]), f"Lambda^{n}_{n}[{n - 1}->{n}]"
        )
    if kind == GeneratorKind.MARKED_TRIANGLE:
        source = mark_edges(standard_simplex(2), ["<0,1>", "<1,2>"])
        return SimplicialMap.inclusion(source, sharp(standard_simplex(2)), "triangle")
    if kind == GeneratorKind.EDGE_MARKING:
        return SimplicialMap.inclusion(standard_simplex(1), sharp(standard_simplex(1)), "edge")
    if kind == GeneratorKind.KAN_MARKING:
        if spec.kan is None:
            raise InvalidSimplicialDataError("Kan marking generators need an explicit Kan complex")
        return SimplicialMap.inclusion(flat(spec.kan), sharp(spec.kan), "kan")
    raise InvalidSimplicialDataError(f"Unknown generator kind {kind}")


def enumerate_instances(family: GeneratorClass, n_max: int) -> Iterator[GeneratorSpec]:
    """Instances of a generator family up to dimension n_max."""
    for kind in sorted(GENERATOR_FAMILIES[family], key=lambda k: k.value):
        if kind in (GeneratorKind.INNER_HORN, GeneratorKind.INNER_HORN_FLAT):
            for n in range(2, n_max + 1):
                for k in range(1, n):
                    yield GeneratorSpec(kind, n, k)
        elif kind in (GeneratorKind.CELL, GeneratorKind.CELL_FLAT):
            for n in range(0, n_max + 1):
                yield GeneratorSpec(kind, n)
        elif kind == GeneratorKind.LEFT_HORN_MARKED:
            for n in range(1, n_max + 1):
                yield GeneratorSpec(kind, n, 0)
        elif kind == GeneratorKind.RIGHT_HORN_MARKED:
            for n in range(1, n_max + 1):
                yield GeneratorSpec(kind, n, n)
        elif kind == GeneratorKind.MARKED_TRIANGLE:
            yield GeneratorSpec(kind, 2, 1)


def pushout_join(i: MarkedMap, j: MarkedMap) -> MarkedMap:
    """The map A*L u_(A*K) B*K -> B*L for monomorphisms i: A -> B and j: K -> L."""
    i.require_mono()
    j.require_mono()
    joined = join(i.target, j.target)
    image_a = i.image_ids()
    image_k = j.image_ids()
    generators = [joined.left_ids[b] for b in i.target.ids()]
    generators += [joined.right_ids[l] for l in j.target.ids()]
    generators += [
        joined.pair(b, l)
        for b in i.target.ids()
        for l in j.target.ids()
        if b in image_a or l in image_k
    ]
    source = subcomplex(joined.space, generators, f"({i.name})x*({j.name})")
    return SimplicialMap.inclusion(source, joined.space, f"{i.name} box* {j.name}")


# maps into a simplicial set by enumeration


def _faces_key(space: SimplicialSet, ref: SimplexRef, skip: Optional[int] = None) -> Tuple[SimplexRef, ...]:
    d = len(ref[0]) - 1
    return tuple(space.ref_face(ref, i) for i in range(d + 1) if i != skip)


class _SimplexIndex:
    """Simplices of a target grouped by their faces, built per dimension on demand."""

    def __init__(self, space: SimplicialSet):
        self.space = space
        self._by_faces: Dict[int, Dict[Tuple[SimplexRef, ...], List[SimplexRef]]] = {}

    def lookup(self, d: int, faces: Tuple[SimplexRef, ...]) -> List[SimplexRef]:
        table = self._by_faces.get(d)
        if table is None:
            table = {}
            for ref in self.space.simplices(d):
                table.setdefault(_faces_key(self.space, ref), []).append(ref)
            self._by_faces[d] = table
        return table.get(faces, [])


def enumerate_maps(
    source: SimplicialSet,
    target: SimplicialSet,
    fixed: Optional[Mapping[str, SimplexRef]] = None,
    respect_marking: bool = False,
) -> Iterator[Dict[str, SimplexRef]]:
    """All simplicial maps source -> target, as assignments on nondegenerate simplices."""
    order = sorted(source.ids(), key=source.dim)
    index = _SimplexIndex(target)
    fixed = dict(fixed or {})
    assign: Dict[str, SimplexRef] = {}

    def image(ref: SimplexRef) -> SimplexRef:
        eta, x = ref
        zeta, y = assign[x]
        return (tuple(zeta[e] for e in eta), y)

    def candidates(x: str) -> List[SimplexRef]:
        d = source.dim(x)
        if d == 0:
            pool = [((0,), v) for v in target.vertices()]
        else:
            pool = index.lookup(d, tuple(image(face) for face in source.faces(x)))
        if x in fixed:
            pool = [ref for ref in pool if ref == fixed[x]]
        if respect_marking and x in source.marked:
            pool = [ref for ref in pool if target.is_marked(ref)]
        return pool

    def extend(position: int) -> Iterator[Dict[str, SimplexRef]]:
        if position == len(order):
            yield dict(assign)
            return
        x = order[position]
        for ref in candidates(x):
            assign[x] = ref
            yield from extend(position + 1)
            del assign[x]

    yield from extend(0)


@dataclass
class KanVerdict:
    is_kan: bool
    dim_bound: int
    failure: Optional[Dict] = None


def kan_check(space: SimplicialSet, dim_bound: Optional[int] = None) -> KanVerdict:
    """Check every horn Lambda^n_k -> K with n <= dim_bound for a filler."""
    bound = settings.KAN_DIM_BOUND if dim_bound is None else dim_bound
    if space.complete_through is not None:
        bound = min(bound, space.complete_through)
    for n in range(1, bound + 1):
        labels = [str(v) for v in range(n + 1)]
        for k in range(n + 1):
            realized = {_faces_key(space, ref, skip=k) for ref in space.simplices(n)}
            face_ids = [simplex_id([l for l in labels if l != labels[i]]) for i in range(n + 1) if i != k]
            for assignment in enumerate_maps(horn(n, k), space):
                key = tuple(assignment[f] for f in face_ids)
                if key not in realized:
                    logger.info(f"{space.name} fails to fill Lambda^{n}_{k}")
                    return KanVerdict(False, bound, {"n": n, "k": k, "horn": assignment})
    return KanVerdict(True, bound)


@dataclass
class LiftingWitness:
    """A map from the source into a nerve that does not extend along the inclusion."""

    category: FiniteCategory
    assignment: Dict[str, SimplexRef]


def lifting_witness(
    inclusion: MarkedMap, corpus: Optional[List[FiniteCategory]] = None
) -> Optional[LiftingWitness]:
    """Look for a lifting problem against a nerve with no solution.

    Nerves of categories are quasi-categories, so a witness proves that the
    inclusion is not inner anodyne.
    """
    corpus = corpus if corpus is not None else [parallel_pair()] + builtin_corpus()
    source = flat(inclusion.source)
    target = flat(inclusion.target)
    for category in corpus:
        nerve = nerve_truncated(category, max(target.top_dim, 1))
        for assignment in enumerate_maps(source, nerve):
            fixed = {inclusion.assignment[s][1]: ref for s, ref in assignment.items()}
            if next(enumerate_maps(target, nerve, fixed), None) is None:
                logger.info(f"Lifting witness for {inclusion.name} against N({category.name})")
                return LiftingWitness(category, assignment)
    return None


# certificates


@dataclass
class AttachmentStep:
    """Glue one generator instance to the current stage.

    ``attach`` sends every nondegenerate simplex of the generator's source to a
    simplex of the current stage; ``names`` optionally fixes the stage ids of
    the generator's new simplices; ``stage`` names a checkpoint.
    """

    generator: GeneratorSpec
    attach: Dict[str, SimplexRef]
    names: Dict[str, str] = field(default_factory=dict)
    stage: Optional[str] = None


@dataclass
class AttachmentCertificate:
    inclusion: MarkedMap
    target_class: AnodyneClass
    steps: List[AttachmentStep]
    checkpoints: Dict[str, List[str]] = field(default_factory=dict)

    def extended(self, step: AttachmentStep, inclusion: MarkedMap) -> "AttachmentCertificate":
        """The certificate for a longer inclusion, with one more step."""
        return AttachmentCertificate(inclusion, self.target_class, self.steps + [step], dict(self.checkpoints))


@dataclass
class StepFailure:
    step: Optional[int]
    axiom: str
    message: str


@dataclass
class CertificateVerdict:
    accepted: bool
    steps_replayed: int
    failures: List[StepFailure] = field(default_factory=list)
    final_stage: Optional[SimplicialSet] = None

    def raise_for_failure(self) -> None:
        if not self.accepted:
            first = self.failures[0]
            raise CertificateError(first.message, step=first.step, axiom=first.axiom)


def _working_copy(space: SimplicialSet, inner: bool) -> SimplicialSet:
    return flat(space) if inner else space


def verify_certificate(cert: AttachmentCertificate) -> CertificateVerdict:
    """Replay a certificate step by step.

    Returns:
        CertificateVerdict: accepted iff every step is a pushout of a legal
        generator and the last stage is the target up to an isomorphism fixing
        the source
    """
    inner = cert.target_class == AnodyneClass.INNER
    inclusion = cert.inclusion
    if not inclusion.is_mono:
        return CertificateVerdict(False, 0, [StepFailure(None, "mono", "inclusion is not a monomorphism")])
    issues = inclusion.problems(marked=not inner)
    if issues:
        return CertificateVerdict(False, 0, [StepFailure(None, "inclusion", issues[0])])
    kinds = allowed_kinds(cert.target_class)
    stage = _working_copy(inclusion.source, inner)
    target = _working_copy(inclusion.target, inner)
    for position, step in enumerate(cert.steps):
        spec = step.generator
        if spec.kind not in kinds:
            return CertificateVerdict(
                False,
                position,
                [StepFailure(position, "class", f"{spec.kind.value} is not a generator of {cert.target_class.value}")],
            )
        try:
            generator = generator_map(spec)
        except SsokError as e:
            return CertificateVerdict(False, position, [StepFailure(position, "generator", e.message)])
        if spec.kind == GeneratorKind.KAN_MARKING:
            verdict = kan_check(spec.kan, spec.kan_bound)
            if not verdict.is_kan:
                return CertificateVerdict(
                    False, position, [StepFailure(position, "kan", f"Kan check failed at {verdict.failure}")]
                )
        if inner:
            generator = generator.with_spaces(flat(generator.source), flat(generator.target))
        try:
            attach = SimplicialMap(generator.source, stage, step.attach, "attach")
        except SsokError as e:
            return CertificateVerdict(False, position, [StepFailure(position, "attach", e.message)])
        issues = attach.problems(marked=not inner)
        if issues:
            return CertificateVerdict(False, position, [StepFailure(position, "attach", issues[0])])
        glued = pushout(generator, attach, name=f"stage{position + 1}", names=step.names)
        grown = glued.space
        if len(grown) == len(stage) and len(grown.marked) == len(stage.marked):
            return CertificateVerdict(False, position, [StepFailure(position, "growth", "stage did not grow")])
        stage = grown
        if step.stage and step.stage in cert.checkpoints:
            expected = set(cert.checkpoints[step.stage])
            if set(stage.ids()) != expected:
                return CertificateVerdict(
                    False,
                    position + 1,
                    [StepFailure(position, "checkpoint", f"stage {step.stage} differs from its declaration")],
                )
        logger.debug(f"Step {position + 1}: {spec.kind.value}({spec.n},{spec.k}) -> {stage.counts()}")
    fixed = {s: inclusion.assignment[s][1] for s in inclusion.source.ids()}
    iso = find_isomorphism(stage, target, fixed=fixed, respect_marking=not inner)
    if iso is None:
        return CertificateVerdict(
            False,
            len(cert.steps),
            [StepFailure(None, "target", "final stage is not the target up to isomorphism")],
            stage,
        )
    return CertificateVerdict(True, len(cert.steps), [], stage)
