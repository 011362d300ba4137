"""Explicit filtrations certified by searched attachment steps.

Each builder lists the stages of a filtration as simplicial subsets of one
ambient marked simplicial set, so all stages share simplex ids. Every stage
transition is searched separately and the steps are concatenated into one
certificate whose checkpoints are the declared stages.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.app.core.config import Settings
from src.app.services.anodyne import (
    AnodyneClass,
    AttachmentCertificate,
    AttachmentStep,
    CertificateVerdict,
    GeneratorKind,
    GeneratorSpec,
    MarkedMap,
    generator_map,
    pushout_join,
    verify_certificate,
)
from src.app.services.anodyne_search import SearchOutcome, search_decomposition
from src.app.services.constructions import (
    boundary,
    empty,
    flat,
    horn,
    join,
    map_by_vertices,
    ordered_complex,
    product,
    sharp,
    simplex_id,
    standard_simplex,
    subcomplex,
)
from src.app.services.isomorphism import maps_isomorphic
from src.app.services.simplicial_set import SimplexRef, SimplicialMap, SimplicialSet

logger = logging.getLogger(__name__)


@dataclass
class Filtration:
    """Named stages, each a simplicial subset of ``ambient``."""

    name: str
    ambient: SimplicialSet
    stages: List[Tuple[str, SimplicialSet]]

    def inclusion(self) -> MarkedMap:
        return SimplicialMap.inclusion(self.stages[0][1], self.stages[-1][1], self.name)


@dataclass
class ChainResult:
    """Outcome of certifying a filtration stage by stage."""

    filtration: Filtration
    target_class: AnodyneClass
    segments: List[SearchOutcome] = field(default_factory=list)
    certificate: Optional[AttachmentCertificate] = None
    verdict: Optional[CertificateVerdict] = None
    failed_stage: Optional[str] = None

    @property
    def accepted(self) -> bool:
        return self.verdict is not None and self.verdict.accepted


def certify_chain(
    filtration: Filtration,
    target_class: AnodyneClass,
    config: Optional[Settings] = None,
    prefix: Sequence[AttachmentStep] = (),
) -> ChainResult:
    """Search every stage transition and replay the concatenated certificate.

    Args:
        filtration: the stages, first to last
        target_class: the class every transition must belong to
        config: settings carrying the search budgets
        prefix: explicit steps glued before the first stage transition; they
            must lead from the first stage to the second

    Returns:
        ChainResult: the staged certificate with its replay verdict, or the
        first stage no search could reach
    """
    result = ChainResult(filtration, target_class)
    steps: List[AttachmentStep] = list(prefix)
    checkpoints: Dict[str, List[str]] = {}
    stages = filtration.stages
    start = 1 if prefix else 0
    if prefix:
        steps[-1] = _checkpointed(steps[-1], stages[1][0])
        checkpoints[stages[1][0]] = stages[1][1].ids()
    for (_, before), (name, after) in zip(stages[start:], stages[start + 1:]):
        outcome = search_decomposition(
            SimplicialMap.inclusion(before, after, name), target_class, config=config, with_witness=False
        )
        result.segments.append(outcome)
        if not outcome.found:
            logger.info(f"Filtration {filtration.name} stuck before stage {name}: {outcome.status}")
            result.failed_stage = name
            return result
        segment = list(outcome.certificate.steps)
        if segment:
            segment[-1] = _checkpointed(segment[-1], name)
            checkpoints[name] = after.ids()
        steps.extend(segment)
    result.certificate = AttachmentCertificate(filtration.inclusion(), target_class, steps, checkpoints)
    result.verdict = verify_certificate(result.certificate)
    logger.info(f"Filtration {filtration.name}: {len(steps)} steps, accepted={result.verdict.accepted}")
    return result


def _checkpointed(step: AttachmentStep, name: str) -> AttachmentStep:
    return AttachmentStep(step.generator, step.attach, step.names, name)


# the join of two copies of Delta^m


def _double_simplex(m: int) -> Tuple[SimplicialSet, List[str]]:
    """Delta^m * Delta^m with the back copy sharp; vertices 0..m then 0~..m~."""
    labels = [str(k) for k in range(m + 1)] + [f"{k}~" for k in range(m + 1)]
    back = range(m + 1, 2 * m + 2)
    marked = [(i, j) for i, j in combinations(back, 2)]
    space = ordered_complex(labels, [range(2 * m + 2)], f"Delta^{m}*Delta^{m}", marked)
    return space, labels


def _span(space: SimplicialSet, labels: List[str], groups: Sequence[Sequence[int]], name: str) -> SimplicialSet:
    return subcomplex(space, [simplex_id([labels[v] for v in g]) for g in groups], name)


def tilde_i0(m: int) -> MarkedMap:
    """Delta^m x Delta^1 -> Delta^m * Delta^m, marked on Delta^m x {1} and on the back copy."""
    target, labels = _double_simplex(m)
    cylinder = product(standard_simplex(m), standard_simplex(1), name=f"Delta^{m}xDelta^1")
    marked = [
        x for x, (a, b, _, _) in cylinder.parts.items() if b == "1" and cylinder.left.dim(a) == 1
    ]
    source = cylinder.space.with_marking(marked)
    vertex_map = {}
    for k in range(m + 1):
        vertex_map[cylinder.vertex(str(k), "0")] = labels[k]
        vertex_map[cylinder.vertex(str(k), "1")] = labels[m + 1 + k]
    return map_by_vertices(source, target, vertex_map, "i0~").check()


def a_m_filtrations(m: int) -> Tuple[Filtration, Filtration, Filtration]:
    """The three filtrations behind the marked anodyne map Delta^m x Delta^1 -> Delta^m * Delta^m.

    Returns:
        the spine filtration S_m, S_m u tau~, T_m, ..., T_0 = A^m; the
        filtration X u B_m, ..., X u B_0 = A^m of the image X of the cylinder;
        and the last step A^m in Delta^m * Delta^m
    """
    space, labels = _double_simplex(m)
    front = list(range(m + 1))
    bar = [m + 1 + k for k in range(m + 1)]

    def tau(k: int) -> List[int]:
        return front[: k + 1] + bar[k:]

    tau_bar = [m] + bar
    spine = [(v, v + 1) for v in range(2 * m + 1)]
    stages = [("S_m", _span(space, labels, spine, "S_m"))]
    groups = spine + [tau_bar]
    stages.append(("S_m+tau~", _span(space, labels, groups, "S_m+tau~")))
    for k in range(m, -1, -1):
        groups = groups + [tau(k)]
        stages.append((f"T_{k}", _span(space, labels, groups, f"T_{k}")))
    spine_filtration = Filtration(f"A^{m} from its spine", space, stages)

    cylinder_groups = [tau(k) for k in range(m + 1)]
    b_stages = []
    for i in range(m, -1, -1):
        groups = cylinder_groups + [bar, [m] + bar[i:]]
        b_stages.append((f"X+B_{i}", _span(space, labels, groups, f"X+B_{i}")))
    b_filtration = Filtration(f"A^{m} from the cylinder", space, b_stages)

    a_m = b_stages[-1][1]
    closing = Filtration(f"A^{m} in the join", space, [(f"A^{m}", a_m), ("join", space)])
    return spine_filtration, b_filtration, closing


def i0_chain(m: int) -> Filtration:
    """Cylinder image, the B stages, then the whole join."""
    _, b_filtration, closing = a_m_filtrations(m)
    return Filtration(f"i0~ for m={m}", closing.ambient, b_filtration.stages + closing.stages[1:])


# the inclusion iota of K~ into Delta^7


def _delta7() -> Tuple[SimplicialSet, List[str]]:
    labels = [str(v) for v in range(8)]
    return ordered_complex(labels, [range(8)], "Delta^7", marked=[(6, 7)]), labels


def _digits(groups: str) -> List[List[int]]:
    return [[int(c) for c in g] for g in groups.split()]


def iota_filtrations() -> Tuple[Filtration, Filtration]:
    """The decomposition of K~ in Delta^7, marked at 6 -> 7 only.

    Returns:
        the filtration K~, K^, Delta^7, whose first step is the marked right
        horn on 5,6,7; and the staged filtration Sp^7, Sp^7 u Delta^0123, S,
        S u Delta^013467, K^
    """
    space, labels = _delta7()
    k_tilde = _span(space, labels, _digits("013467 023457 0123"), "K~")
    k_hat = _span(space, labels, _digits("013467 023457 0123 567"), "K^")
    outer = Filtration("iota", space, [("K~", k_tilde), ("K^", k_hat), ("Delta^7", space)])

    spine = _digits("01 12 23 34 45 56 67")
    with_0123 = spine + _digits("0123")
    s_groups = with_0123 + _digits("567 467 457")
    stages = [
        ("Sp^7", _span(space, labels, spine, "Sp^7")),
        ("Sp^7+0123", _span(space, labels, with_0123, "Sp^7+0123")),
        ("S", _span(space, labels, s_groups, "S")),
        ("S+013467", _span(space, labels, s_groups + _digits("013467"), "S+013467")),
        ("K^", k_hat),
    ]
    return outer, Filtration("Sp^7 in K^", space, stages)


def iota_right_horn_step(outer: Filtration) -> AttachmentStep:
    """Glue Delta^567 to K~ along the horn on 5,6,7 missing the face 56."""
    ambient = outer.ambient
    spec = GeneratorSpec(GeneratorKind.RIGHT_HORN_MARKED, 2, 2)
    generator = generator_map(spec)
    x = simplex_id(["5", "6", "7"])
    attach: Dict[str, SimplexRef] = {}
    for s in generator.source.ids():
        theta = tuple(int(label) for label in generator.source.vertex_labels(s))
        attach[s] = ambient.face_along(x, theta)
    names = {"<0,1,2>": x, "<0,1>": simplex_id(["5", "6"])}
    return AttachmentStep(spec, attach, names)


def certify_iota(config: Optional[Settings] = None) -> Tuple[ChainResult, ChainResult]:
    """Right marked anodyne certificates for iota and for the staged Sp^7 in K^."""
    outer, staged = iota_filtrations()
    first = certify_chain(outer, AnodyneClass.RIGHT_MARKED, config, prefix=[iota_right_horn_step(outer)])
    second = certify_chain(staged, AnodyneClass.RIGHT_MARKED, config)
    return first, second


# the combinatorial inclusions Delta^I * Delta^J0 -> Delta^I * Delta^J


@dataclass
class CombinatorialInstance:
    """Delta^I flat joined with Delta^J0 in Delta^J sharp, J = J0 plus one element y."""

    case: int
    i_size: int
    j_size: int
    y: int
    inclusion: MarkedMap

    @property
    def y_is_max(self) -> bool:
        return self.y == self.j_size - 1

    @property
    def label(self) -> str:
        return f"case{self.case}(|I|={self.i_size},|J|={self.j_size},y={self.y})"


def combinatorial_instance(case: int, i_size: int, j_size: int, y: int) -> CombinatorialInstance:
    """Build one instance of either combinatorial inclusion.

    Case 1 is id_I * (J0 in J); case 2 is the pushout-join of (empty in I)
    with (J0 in J).
    """
    if case not in (1, 2):
        raise ValueError(f"Unknown case {case}")
    i_labels = [f"x{v}" for v in range(i_size)]
    j_labels = [f"y{v}" for v in range(j_size)]
    big_i = standard_simplex(i_size - 1, i_labels) if i_size else empty("Delta^I")
    big_j = sharp(standard_simplex(j_size - 1, j_labels))
    j0 = subcomplex(big_j, [simplex_id([l for l in j_labels if l != j_labels[y]])], "Delta^J0")
    j_map = SimplicialMap.inclusion(j0, big_j, "J0<J")
    if case == 1:
        target = join(big_i, big_j).space
        source_join = join(big_i, j0)
        source = subcomplex(target, source_join.space.ids(), "I*J0")
        inclusion = SimplicialMap.inclusion(source, target, "id_I*j")
    else:
        inclusion = pushout_join(SimplicialMap.inclusion(empty(), big_i, "0<I"), j_map)
    return CombinatorialInstance(case, i_size, j_size, y, inclusion)


def combinatorial_instances(max_size: int = 3) -> List[CombinatorialInstance]:
    """Instances with |I| <= max_size, 2 <= |J| <= max_size and y an end of J.

    An interior y needs a marked edge of the form y -> y+ that no triangle of
    the target lies over, so no attachment inside the target reaches it.
    """
    instances = []
    for case in (1, 2):
        for i_size in range(0 if case == 1 else 1, max_size + 1):
            for j_size in range(2, max_size + 1):
                for y in (0, j_size - 1):
                    instances.append(combinatorial_instance(case, i_size, j_size, y))
    return instances


# identities of pushout-joins


@dataclass
class IdentityCheck:
    family: str
    params: Dict[str, Any]
    passed: bool
    detail: str = ""


@dataclass
class AppendixReport:
    checks: List[IdentityCheck] = field(default_factory=list)
    halted_at: Optional[IdentityCheck] = None

    @property
    def passed(self) -> bool:
        return self.halted_at is None


def horn_cell_identity(n: int, j: int, k: int, horn_first: bool) -> bool:
    """Compare a pushout-join of a horn and a boundary inclusion with the horn it should equal."""
    horn_map = SimplicialMap.inclusion(horn(n, j), standard_simplex(n), f"Lambda^{n}_{j}")
    cell_map = SimplicialMap.inclusion(boundary(k), standard_simplex(k), f"dDelta^{k}")
    total = n + 1 + k
    if horn_first:
        joined = pushout_join(horn_map, cell_map)
        position = j
    else:
        joined = pushout_join(cell_map, horn_map)
        position = k + 1 + j
    expected = SimplicialMap.inclusion(horn(total, position), standard_simplex(total), "expected")
    return maps_isomorphic(joined, expected, respect_marking=False)


def suite_appendix_identities(
    n_max: int = 4,
    k_max: int = 2,
    config: Optional[Settings] = None,
    combinatorial_size: int = 3,
) -> AppendixReport:
    """Check the horn/boundary pushout-join identities and certify the combinatorial inclusions.

    Halts at the first failing instance.
    """
    report = AppendixReport()

    def record(check: IdentityCheck) -> bool:
        report.checks.append(check)
        if not check.passed:
            logger.error(f"Appendix check failed: {check.family} {check.params} {check.detail}")
            report.halted_at = check
        return check.passed

    for horn_first, family in ((True, "horn*cell"), (False, "cell*horn")):
        for n in range(1, n_max + 1):
            for k in range(0, k_max + 1):
                if n + 1 + k > n_max:
                    continue
                for j in range(n + 1):
                    ok = horn_cell_identity(n, j, k, horn_first)
                    if not record(IdentityCheck(family, {"n": n, "j": j, "k": k}, ok)):
                        return report

    for instance in combinatorial_instances(combinatorial_size):
        outcome = search_decomposition(instance.inclusion, AnodyneClass.MARKED, config=config, with_witness=False)
        check = IdentityCheck(
            f"combinatorial case {instance.case}",
            {"I": instance.i_size, "J": instance.j_size, "y": instance.y},
            outcome.found,
            f"{outcome.status}, {len(outcome.certificate.steps) if outcome.found else 0} steps",
        )
        if not record(check):
            return report
        if instance.case == 2 and instance.y_is_max:
            inner = search_decomposition(
                instance.inclusion.with_spaces(flat(instance.inclusion.source), flat(instance.inclusion.target)),
                AnodyneClass.INNER,
                config=config,
                with_witness=False,
            )
            check = IdentityCheck(
                "combinatorial case 2 inner route",
                {"I": instance.i_size, "J": instance.j_size, "y": instance.y},
                inner.found,
                inner.status,
            )
            if not record(check):
                return report
    logger.info(f"Appendix identities: {len(report.checks)} checks passed")
    return report
