"""Categories of extensions of an active operation, strict fibers, orbits and brane fibers."""
import logging
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from networkx.utils import UnionFind

from src.app.core.exceptions import NotAtomicError, NotGroupError
from src.app.services.categories import FiniteCategory, guard_size, pi0
from src.app.services.operad_categories import (
    Colors,
    OperadTotalCategory,
    TupleMorphism,
    isomorphisms_from,
    require_active,
    total_category,
    underlying_category,
    unary_inverse,
)
from src.app.services.operads import DiscreteOperad, Op
from src.app.services.pointed import PointedMap, has_retraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExtensionRecord:
    """An object of Ext(sigma): atomic g0: X -> X', active f': X' -> Y', iso g1: Y -> Y'.

    The square commutes: f' o g0 = g1 o sigma.
    """

    atomic: TupleMorphism
    active: TupleMorphism
    equivalence: TupleMorphism

    @property
    def new_position(self) -> int:
        return self.atomic.alpha.missing[0]

    @property
    def operation(self) -> Op:
        """The bare multimorphism when the extension has a single output."""
        return self.active.components[0]

    def __str__(self) -> str:
        return f"ext[{self.active}]"


@dataclass(frozen=True)
class BraneRecord:
    """An object of the brane fiber: sigma0 atomic, sigma_plus active, sigma1 iso into the base target."""

    atomic: TupleMorphism
    extended: TupleMorphism
    equivalence: TupleMorphism

    @property
    def new_position(self) -> int:
        return self.atomic.alpha.missing[0]


def _check_unital(operad: DiscreteOperad) -> None:
    for color in operad.colors:
        operad.unit(color)


def standard_atomic(total: OperadTotalCategory, x: Colors, color: Optional[str] = None) -> TupleMorphism:
    """The atomic map X -> X + (color,) adding the new color last with identity components."""
    operad = total.operad
    color = color or operad.colors[0]
    m = len(x)
    components = tuple(operad.identity(c) for c in x) + (operad.unit(color),)
    return TupleMorphism(tuple(x), tuple(x) + (color,), PointedMap.inclusion(m), components)


def atomic_maps(total: OperadTotalCategory, x: Colors) -> Iterator[TupleMorphism]:
    """Every atomic map out of X."""
    operad = total.operad
    m = len(x)
    for target in product(operad.colors, repeat=m + 1):
        for new in range(1, m + 2):
            others = [j for j in range(1, m + 2) if j != new]
            for order in permutations(others, m):
                alpha = PointedMap(m, m + 1, tuple(order))
                choices = []
                for k in range(1, m + 1):
                    j = alpha(k)
                    choices.append(
                        [u for u in operad.operations((x[k - 1],), target[j - 1]) if unary_inverse(operad, u) is not None]
                    )
                for units in product(*choices):
                    components = [None] * (m + 1)
                    for k, u in enumerate(units, start=1):
                        components[alpha(k) - 1] = u
                    components[new - 1] = operad.unit(target[new - 1])
                    yield TupleMorphism(tuple(x), tuple(target), alpha, tuple(components))


def lifts(
    total: OperadTotalCategory,
    atomic: TupleMorphism,
    target: Colors,
    composite: TupleMorphism,
    new_targets: Optional[Sequence[int]] = None,
) -> Iterator[TupleMorphism]:
    """Active maps h: atomic.target -> target with h o atomic = composite.

    The old positions are pinned by the composite; the new position goes to
    one of ``new_targets`` (default: anywhere). Components are filtered one
    output at a time.
    """
    m = len(atomic.source)
    new = atomic.alpha.missing[0]
    n = len(target)
    if composite.source != atomic.source or composite.target != tuple(target):
        return
    if not composite.is_active:
        return
    base = [0] * (m + 1)
    for k in range(1, m + 1):
        base[atomic.alpha(k) - 1] = composite.alpha(k)
    for j_new in new_targets if new_targets is not None else range(1, n + 1):
        if not 1 <= j_new <= n:
            continue
        values = list(base)
        values[new - 1] = j_new
        alpha = PointedMap(m + 1, n, tuple(values))
        choices = []
        for j in range(1, n + 1):
            wanted = composite.components[j - 1]
            candidates = [
                op
                for op in total.operations(total.fiber_colors(atomic.target, alpha, j), target[j - 1])
                if total.composite_component(alpha, op, j, atomic) == wanted
            ]
            if not candidates:
                break
            choices.append(candidates)
        else:
            for components in product(*choices):
                yield TupleMorphism(atomic.target, tuple(target), alpha, tuple(components))


def extend_by_new(total: OperadTotalCategory, f: TupleMorphism, color: str) -> TupleMorphism:
    """f + id: X + (color,) -> Y + (color,), new color to new color."""
    m, n = len(f.source), len(f.target)
    alpha = PointedMap(m + 1, n + 1, f.alpha.values + (n + 1,))
    return TupleMorphism(
        f.source + (color,), f.target + (color,), alpha, f.components + (total.operad.identity(color),)
    )


def strict_ext_fiber(
    operad: DiscreteOperad,
    sigma: TupleMorphism,
    atomic: Optional[TupleMorphism] = None,
    total: Optional[OperadTotalCategory] = None,
) -> List[TupleMorphism]:
    """Strict extensions {f' active : f' o i = sigma} for an atomic i.

    Raises:
        NotAtomicError: if i is not atomic
        NotActiveError: if sigma is not active
        OperadAxiomError: if the operad is not unital
    """
    require_active(sigma)
    _check_unital(operad)
    total = total or total_category(operad, len(sigma.source) + 1)
    if atomic is None:
        atomic = standard_atomic(total, sigma.source)
    if atomic.source != sigma.source or not total.is_atomic(atomic):
        raise NotAtomicError(f"{atomic} is not an atomic map out of the source of sigma", {"map": str(atomic)})
    return list(lifts(total, atomic, sigma.target, sigma))


def ext_triangle_fiber(operad: DiscreteOperad, sigma: TupleMorphism, atomic: Optional[TupleMorphism] = None) -> FiniteCategory:
    """The strict fiber as a discrete category: triangles over a fixed atomic map."""
    fiber = strict_ext_fiber(operad, sigma, atomic)
    return FiniteCategory(
        fiber, {f: (f, f) for f in fiber}, {f: f for f in fiber}, lambda g, f: f, f"Ext_strict({sigma})"
    )


def _frames(total: OperadTotalCategory, sigma: TupleMorphism, normalized: bool) -> List[Tuple[TupleMorphism, TupleMorphism]]:
    """Pairs (g0 atomic out of X, g1 iso out of Y)."""
    if normalized:
        return [
            (standard_atomic(total, sigma.source, color), total.identity(sigma.target))
            for color in total.operad.colors
        ]
    return [(g0, g1) for g0 in atomic_maps(total, sigma.source) for g1 in isomorphisms_from(total, sigma.target)]


def _ext(
    operad: DiscreteOperad, sigma: TupleMorphism, compatible: bool, normalized: bool, name: str
) -> FiniteCategory:
    require_active(sigma)
    _check_unital(operad)
    total = total_category(operad, len(sigma.source) + 1)
    frames = _frames(total, sigma, normalized)
    guard_size(len(frames) ** 2, f"frames of {name}")

    fibers: Dict[int, List[ExtensionRecord]] = {}
    for index, (g0, g1) in enumerate(frames):
        composite = total.compose(g1, sigma)
        fibers[index] = [ExtensionRecord(g0, f, g1) for f in lifts(total, g0, g1.target, composite)]
    objects = [obj for index in range(len(frames)) for obj in fibers[index]]
    logger.debug(f"{name}: {len(frames)} frames, {len(objects)} objects")

    inverses = {index: total.inverse(g1) for index, (_, g1) in enumerate(frames)}
    morphisms: Dict[Tuple, Tuple[ExtensionRecord, ExtensionRecord]] = {}
    for a, (g0, g1) in enumerate(frames):
        if not fibers[a]:
            continue
        for b, (g0b, g1b) in enumerate(frames):
            if not fibers[b]:
                continue
            h1 = total.compose(g1b, inverses[a])
            new_targets = [g0b.alpha.missing[0]] if compatible else None
            for h0 in lifts(total, g0, g0b.target, g0b, new_targets):
                landing: Dict[TupleMorphism, List[ExtensionRecord]] = {}
                for target_obj in fibers[b]:
                    landing.setdefault(total.compose(target_obj.active, h0), []).append(target_obj)
                for source_obj in fibers[a]:
                    for target_obj in landing.get(total.compose(h1, source_obj.active), ()):
                        morphisms[(source_obj, target_obj, h0)] = (source_obj, target_obj)
    identities = {obj: (obj, obj, total.identity(obj.atomic.target)) for obj in objects}

    def compose(second, first):
        return (first[0], second[1], total.compose(second[2], first[2]))

    logger.info(f"{name}: {len(objects)} objects, {len(morphisms)} morphisms")
    return FiniteCategory(objects, morphisms, identities, compose, name)


def ext_category(operad: DiscreteOperad, sigma: TupleMorphism, normalized: bool = False) -> FiniteCategory:
    """Extensions of sigma; morphisms send the new color to the new color.

    With ``normalized`` only squares with the standard atomic map and identity
    equivalence are kept, a full subcategory meeting every isomorphism class.

    Raises:
        NotActiveError: if sigma is not active
        OperadAxiomError: if the operad is not unital
    """
    return _ext(operad, sigma, True, normalized, f"Ext({operad.name}, {sigma})")


def ext_HA_category(operad: DiscreteOperad, sigma: TupleMorphism, normalized: bool = False) -> FiniteCategory:
    """Same objects as ``ext_category``; every map under the square is a morphism."""
    return _ext(operad, sigma, False, normalized, f"ExtHA({operad.name}, {sigma})")


@dataclass
class RetractionWitness:
    """The endomorphism built from mu: old colors fixed, the new color merged into an old one."""

    record: ExtensionRecord
    endomorphism: Tuple
    mu: PointedMap
    mu_has_retraction: bool


def gamma_witness(category: FiniteCategory) -> Optional[RetractionWitness]:
    """Find a non-identity endomorphism whose underlying map sends the new color to an old one."""
    for f, (a, b) in category.morphisms.items():
        if a != b or category.is_identity(f):
            continue
        h0: TupleMorphism = f[2]
        if h0.alpha(a.new_position) != a.new_position:
            return RetractionWitness(a, f, h0.alpha, has_retraction(h0.alpha))
    return None


@dataclass
class OrbitReport:
    fiber: List[TupleMorphism]
    group: List[Op]
    orbits: List[List[TupleMorphism]]
    free: bool

    @property
    def count(self) -> int:
        return len(self.orbits)


def _act_on_new(total: OperadTotalCategory, extension: TupleMorphism, new: int, u: Op) -> TupleMorphism:
    """Precompose with the map that is u on the new color and the identity elsewhere."""
    x = extension.source
    components = tuple(u if i == new else total.operad.identity(c) for i, c in enumerate(x, start=1))
    h = TupleMorphism(x, x, PointedMap.identity(len(x)), components)
    return total.compose(extension, h)


def unary_orbits(
    operad: DiscreteOperad, sigma: TupleMorphism, atomic: Optional[TupleMorphism] = None
) -> OrbitReport:
    """Orbits of the unary operations acting on the new color of strict extensions.

    Raises:
        NotGroupError: if the underlying category is not a groupoid
    """
    underlying = underlying_category(operad)
    if not underlying.is_groupoid():
        raise NotGroupError(
            f"Unary operations of {operad.name} do not form a groupoid", {"operad": operad.name}
        )
    total = total_category(operad, len(sigma.source) + 1)
    if atomic is None:
        atomic = standard_atomic(total, sigma.source)
    fiber = strict_ext_fiber(operad, sigma, atomic, total)
    new = atomic.alpha.missing[0]
    color = atomic.target[new - 1]
    group = list(operad.operations((color,), color))
    uf = UnionFind(fiber)
    free = True
    for f in fiber:
        moved = [_act_on_new(total, f, new, u) for u in group]
        if sum(1 for g in moved if g == f) > 1:
            free = False
        for g in moved:
            uf.union(f, g)
    position = {f: index for index, f in enumerate(fiber)}
    orbits = sorted((sorted(s, key=position.get) for s in uf.to_sets()), key=lambda s: position[s[0]])
    logger.info(f"{operad.name}: fiber {len(fiber)}, group {len(group)}, {len(orbits)} orbits")
    return OrbitReport(fiber, group, orbits, free)


def bo_fiber(operad: DiscreteOperad, sigma: TupleMorphism, normalized: bool = False) -> FiniteCategory:
    """The fiber of the brane fibration over sigma.

    Objects are twisted morphisms sigma -> sigma+ with sigma = sigma1 o sigma+ o sigma0,
    sigma0 atomic and sigma1 an equivalence. A morphism sigma+ -> tau+ is a pair
    (a, b) with sigma+ = b o tau+ o a, a o sigma0 = tau0, sigma1 o b = tau1 and
    a compatible with extension.

    Raises:
        NotActiveError: if sigma is not active
        ArityBoundError: when the frame count exceeds the guard
    """
    require_active(sigma)
    _check_unital(operad)
    total = total_category(operad, len(sigma.source) + 1)
    frames: List[Tuple[TupleMorphism, TupleMorphism]] = []
    for atomic, iso in _frames(total, sigma, normalized):
        frames.append((atomic, total.inverse(iso)))
    guard_size(len(frames) ** 2, f"brane fiber frames of {operad.name}")

    fibers: Dict[int, List[BraneRecord]] = {}
    for index, (s0, s1) in enumerate(frames):
        wanted = total.compose(total.inverse(s1), sigma)
        fibers[index] = [BraneRecord(s0, plus, s1) for plus in lifts(total, s0, s1.source, wanted)]
    objects = [obj for index in range(len(frames)) for obj in fibers[index]]

    morphisms = {}
    for a_index, (s0, s1) in enumerate(frames):
        if not fibers[a_index]:
            continue
        by_plus: Dict[TupleMorphism, List[BraneRecord]] = {}
        for obj in fibers[a_index]:
            by_plus.setdefault(obj.extended, []).append(obj)
        s1_inverse = total.inverse(s1)
        for b_index, (t0, t1) in enumerate(frames):
            if not fibers[b_index]:
                continue
            b = total.compose(s1_inverse, t1)
            for a in lifts(total, s0, t0.target, t0, [t0.alpha.missing[0]]):
                for target_obj in fibers[b_index]:
                    for source_obj in by_plus.get(total.compose(b, total.compose(target_obj.extended, a)), ()):
                        morphisms[(source_obj, target_obj, a, b)] = (source_obj, target_obj)
    identities = {
        obj: (obj, obj, total.identity(obj.atomic.target), total.identity(obj.extended.target)) for obj in objects
    }

    def compose(second, first):
        return (first[0], second[1], total.compose(second[2], first[2]), total.compose(first[3], second[3]))

    logger.info(f"Brane fiber of {operad.name} over {sigma}: {len(objects)} objects, {len(morphisms)} morphisms")
    return FiniteCategory(objects, morphisms, identities, compose, f"BO({operad.name}, {sigma})")


@dataclass
class CoherenceVerdict:
    """pi0 of the square Ext(id_Y) -> Ext(g), Ext(f) -> Ext(g o f) and whether it is a pushout of sets.

    A pushout of components is necessary for a homotopy pushout, never sufficient.
    """

    operad: str
    pi0_sizes: Dict[str, int]
    pushout_holds: bool
    necessary_only: bool = True
    details: Dict[str, object] = field(default_factory=dict)


def _component_index(category: FiniteCategory) -> Dict[ExtensionRecord, int]:
    index = {}
    for number, component in enumerate(pi0(category)):
        for obj in component:
            index[obj.active] = number
    return index


def coherence_probe(operad: DiscreteOperad, f: TupleMorphism, g: TupleMorphism) -> CoherenceVerdict:
    """Check on components that extensions of id_Y, g, f and g o f form a pushout.

    Uses the normalized model of every extension category. An extension e of
    id_Y goes to g o e and to e o (f + id); extensions of g and f go to
    epsilon o (f + id) and g o phi.

    Raises:
        NotActiveError: if f or g is not active
    """
    require_active(f)
    require_active(g)
    total = total_category(operad, max(len(f.source), len(g.source)) + 1)
    gf = total.compose(g, f)
    y = f.target
    ext_id = ext_category(operad, total.identity(y), normalized=True)
    ext_g = ext_category(operad, g, normalized=True)
    ext_f = ext_category(operad, f, normalized=True)
    ext_gf = ext_category(operad, gf, normalized=True)
    index_g = _component_index(ext_g)
    index_f = _component_index(ext_f)
    index_gf = _component_index(ext_gf)
    sizes = {
        "Ext(id_Y)": len(pi0(ext_id)),
        "Ext(g)": len(set(index_g.values())),
        "Ext(f)": len(set(index_f.values())),
        "Ext(gf)": len(set(index_gf.values())),
    }

    def plus(e: TupleMorphism) -> TupleMorphism:
        return extend_by_new(total, f, e.source[-1])

    uf = UnionFind([("g", c) for c in set(index_g.values())] + [("f", c) for c in set(index_f.values())])
    for record in ext_id.objects:
        e = record.active
        uf.union(("g", index_g[total.compose(g, e)]), ("f", index_f[total.compose(e, plus(e))]))
    image: Dict[Tuple, set] = {}
    for record in ext_g.objects:
        eps = record.active
        image.setdefault(uf[("g", index_g[eps])], set()).add(index_gf[total.compose(eps, plus(eps))])
    for record in ext_f.objects:
        phi = record.active
        image.setdefault(uf[("f", index_f[phi])], set()).add(index_gf[total.compose(g, phi)])
    well_defined = all(len(targets) == 1 for targets in image.values())
    hit = {next(iter(targets)) for targets in image.values() if targets}
    bijective = well_defined and len(hit) == len(image) == sizes["Ext(gf)"]
    logger.info(f"Coherence probe for {operad.name}: sizes {sizes}, pushout {bijective}")
    return CoherenceVerdict(
        operad.name,
        sizes,
        bijective,
        details={"pushout_classes": len(image), "well_defined": well_defined},
    )
