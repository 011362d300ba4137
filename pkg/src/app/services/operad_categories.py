"""The total category of an operad over pointed finite sets, its envelope and twisted arrows."""
import logging
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from src.app.core.config import settings
from src.app.core.exceptions import InvalidSimplicialDataError, NotActiveError, OperadAxiomError
from src.app.services.categories import FiniteCategory, guard_size, twisted_arrow_cat
from src.app.services.operads import DiscreteOperad, Op, sorting_perm
from src.app.services.pointed import PointedMap, active_maps, all_maps, bijections

logger = logging.getLogger(__name__)

Colors = Tuple[str, ...]


@dataclass(frozen=True)
class TupleMorphism:
    """A morphism X -> Y of the total category.

    ``components[j - 1]`` is an operation from the colors of X over j (in
    increasing order) to Y_j.
    """

    source: Colors
    target: Colors
    alpha: PointedMap
    components: Tuple[Op, ...]

    def __str__(self) -> str:
        return f"{self.alpha}:{list(self.components)}"

    @property
    def is_active(self) -> bool:
        return self.alpha.is_active


def object_label(obj: Colors) -> str:
    if len(set(obj)) <= 1:
        return f"<{len(obj)}>"
    return "<" + ",".join(obj) + ">"


class OperadTotalCategory:
    """Morphisms of the total category are enumerated lazily, one hom-set at a time.

    Args:
        operad: the operad
        arity_bound: objects are color tuples of length at most this bound
    """

    def __init__(self, operad: DiscreteOperad, arity_bound: Optional[int] = None):
        self.operad = operad
        self.arity_bound = settings.ARITY_BOUND if arity_bound is None else arity_bound
        self.objects: List[Colors] = [
            tuple(colors) for n in range(self.arity_bound + 1) for colors in product(operad.colors, repeat=n)
        ]
        self._homs: Dict[Tuple[Colors, Colors, bool], List[TupleMorphism]] = {}
        self._ops: Dict[Tuple[Colors, str], Tuple[Op, ...]] = {}

    def __repr__(self) -> str:
        return f"OperadTotalCategory({self.operad.name}, N={self.arity_bound})"

    def operations(self, inputs: Colors, output: str) -> Tuple[Op, ...]:
        key = (inputs, output)
        if key not in self._ops:
            self._ops[key] = tuple(self.operad.operations(inputs, output))
        return self._ops[key]

    def fiber_colors(self, x: Colors, alpha: PointedMap, j: int) -> Colors:
        return tuple(x[i - 1] for i in alpha.preimage(j))

    def morphisms_over(self, x: Colors, y: Colors, alpha: PointedMap) -> Iterator[TupleMorphism]:
        choices = [self.operations(self.fiber_colors(x, alpha, j), y[j - 1]) for j in range(1, len(y) + 1)]
        for components in product(*choices):
            yield TupleMorphism(x, y, alpha, tuple(components))

    def hom(self, x: Colors, y: Colors, active_only: bool = False) -> List[TupleMorphism]:
        key = (tuple(x), tuple(y), active_only)
        if key not in self._homs:
            maps = active_maps(len(x), len(y)) if active_only else all_maps(len(x), len(y))
            self._homs[key] = [f for alpha in maps for f in self.morphisms_over(key[0], key[1], alpha)]
        return self._homs[key]

    def hom_size(self, x: Colors, y: Colors, active_only: bool = False) -> int:
        """Size of a hom-set, counted without building it."""
        maps = active_maps(len(x), len(y)) if active_only else all_maps(len(x), len(y))
        total = 0
        for alpha in maps:
            count = 1
            for j in range(1, len(y) + 1):
                count *= len(self.operations(self.fiber_colors(x, alpha, j), y[j - 1]))
            total += count
        return total

    def identity(self, x: Colors) -> TupleMorphism:
        return TupleMorphism(tuple(x), tuple(x), PointedMap.identity(len(x)), tuple(self.operad.identity(c) for c in x))

    def composite_component(self, alpha: PointedMap, op: Op, k: int, inner: TupleMorphism) -> Op:
        """Component k of (alpha, ..., op at k, ...) after inner, inputs sorted."""
        js = alpha.preimage(k)
        plugged = self.operad.multi_compose(op, [inner.components[j - 1] for j in js])
        keys = [i for j in js for i in inner.alpha.preimage(j)]
        return self.operad.act(plugged, sorting_perm(keys))

    def compose(self, g: TupleMorphism, f: TupleMorphism) -> TupleMorphism:
        """Return g o f."""
        if f.target != g.source:
            raise InvalidSimplicialDataError(f"{g} and {f} are not composable")
        alpha = g.alpha.compose(f.alpha)
        components = tuple(
            self.composite_component(g.alpha, g.components[k - 1], k, f) for k in range(1, len(g.target) + 1)
        )
        return TupleMorphism(f.source, g.target, alpha, components)

    def inverse(self, f: TupleMorphism) -> Optional[TupleMorphism]:
        """The inverse of f, if f lies over a bijection with invertible unary components."""
        if len(f.source) != len(f.target) or not f.alpha.is_injective:
            return None
        values = [0] * len(f.target)
        components: List[Op] = [None] * len(f.source)
        for i, j in enumerate(f.alpha.values, start=1):
            u = f.components[j - 1]
            back = unary_inverse(self.operad, u)
            if back is None:
                return None
            values[j - 1] = i
            components[i - 1] = back
        return TupleMorphism(f.target, f.source, PointedMap(len(f.target), len(f.source), tuple(values)), tuple(components))

    def is_isomorphism(self, f: TupleMorphism) -> bool:
        return self.inverse(f) is not None

    def is_atomic(self, f: TupleMorphism) -> bool:
        """Semi-inert over an inclusion <n> -> <n+1> with invertible unary components."""
        if not f.alpha.is_atomic:
            return False
        return all(
            unary_inverse(self.operad, f.components[f.alpha(i) - 1]) is not None for i in range(1, len(f.source) + 1)
        )

    def is_semi_inert(self, f: TupleMorphism) -> bool:
        if not f.alpha.is_semi_inert:
            return False
        return all(
            unary_inverse(self.operad, f.components[j - 1]) is not None
            for j in range(1, len(f.target) + 1)
            if f.alpha.preimage(j)
        )

    def inert_projection(self, y: Colors, j: int) -> TupleMorphism:
        """The inert map Y -> (Y_j) forgetting every other color."""
        values = tuple(1 if i == j else 0 for i in range(1, len(y) + 1))
        return TupleMorphism(tuple(y), (y[j - 1],), PointedMap(len(y), 1, values), (self.operad.identity(y[j - 1]),))

    def projection(self, f: TupleMorphism) -> PointedMap:
        return f.alpha

    def check_hom_decomposition(self, x: Colors, y: Colors) -> bool:
        """Whether f -> (rho_j o f)_j is a bijection from hom(X, Y) over each alpha onto the product."""
        for alpha in all_maps(len(x), len(y)):
            over = list(self.morphisms_over(x, y, alpha))
            projections = [self.inert_projection(y, j) for j in range(1, len(y) + 1)]
            images = {tuple(self.compose(rho, f) for rho in projections) for f in over}
            expected = 1
            for j, rho in enumerate(projections, start=1):
                expected *= sum(1 for _ in self.morphisms_over(x, (y[j - 1],), rho.alpha.compose(alpha)))
            if len(images) != len(over) or len(over) != expected:
                logger.warning(f"Hom decomposition fails for {object_label(x)} -> {object_label(y)} over {alpha}")
                return False
        return True

    def as_category(self, active_only: bool = False, objects: Optional[Sequence[Colors]] = None) -> FiniteCategory:
        """Materialize the total category, or its active part, as a finite category.

        Raises:
            ArityBoundError: when the morphism count exceeds the guard
        """
        objects = list(self.objects if objects is None else objects)
        estimate = sum(self.hom_size(a, b, active_only) for a in objects for b in objects)
        guard_size(estimate, f"the total category of {self.operad.name}")
        morphisms: Dict[TupleMorphism, Tuple[Colors, Colors]] = {}
        for a in objects:
            for b in objects:
                for f in self.hom(a, b, active_only):
                    morphisms[f] = (a, b)
        identities = {a: self.identity(a) for a in objects}
        suffix = "act" if active_only else ""
        logger.debug(f"Total category of {self.operad.name}{suffix}: {len(objects)} objects, {len(morphisms)} morphisms")
        return FiniteCategory(objects, morphisms, identities, self.compose, f"{self.operad.name}{suffix}")


def unary_inverse(operad: DiscreteOperad, u: Op) -> Optional[Op]:
    """Two sided inverse of a unary operation, if any."""
    inputs, out = operad.signature(u)
    if len(inputs) != 1:
        return None
    for v in operad.operations((out,), inputs[0]):
        if operad.compose(v, 0, u) == operad.identity(inputs[0]) and operad.compose(u, 0, v) == operad.identity(out):
            return v
    return None


def underlying_category(operad: DiscreteOperad) -> FiniteCategory:
    """Colors and unary operations."""
    morphisms = {}
    for a in operad.colors:
        for b in operad.colors:
            for u in operad.operations((a,), b):
                morphisms[u] = (a, b)
    identities = {c: operad.identity(c) for c in operad.colors}
    return FiniteCategory(
        operad.colors, morphisms, identities, lambda g, f: operad.compose(g, 0, f), f"{operad.name}(1)"
    )


def total_category(operad: DiscreteOperad, arity_bound: Optional[int] = None) -> OperadTotalCategory:
    return OperadTotalCategory(operad, arity_bound)


def require_active(f: TupleMorphism) -> TupleMorphism:
    if not f.is_active:
        raise NotActiveError(f"{f} is not active", {"alpha": list(f.alpha.values)})
    return f


def standard_active(operad: DiscreteOperad, m: int, n: int = 1, color: Optional[str] = None) -> TupleMorphism:
    """An active map <m> -> <n> spreading the inputs over the outputs in blocks.

    Each component is the first operation the operad lists for its arity.

    Raises:
        OperadAxiomError: if some arity has no operation
    """
    color = color or operad.colors[0]
    if n == 0 and m > 0:
        raise NotActiveError(f"No active map <{m}> -> <0>")
    alpha = PointedMap(m, n, tuple((i - 1) * n // m + 1 for i in range(1, m + 1)))
    components = []
    for j in range(1, n + 1):
        ops = operad.operations((color,) * len(alpha.preimage(j)), color)
        if not ops:
            raise OperadAxiomError(
                f"{operad.name} has no operation of arity {len(alpha.preimage(j))}",
                {"operad": operad.name, "arity": len(alpha.preimage(j))},
            )
        components.append(ops[0])
    return TupleMorphism((color,) * m, (color,) * n, alpha, tuple(components))


def env_category(operad: DiscreteOperad, arity_bound: Optional[int] = None) -> FiniteCategory:
    """The symmetric monoidal envelope: pairs (X, active <|X|> -> <n>).

    A morphism (X, beta) -> (X', beta') is a pair (f, gamma) with f: X -> X'
    and beta' o p(f) = gamma o beta.
    """
    total = total_category(operad, arity_bound)
    bound = total.arity_bound
    objects = [(x, beta) for x in total.objects for n in range(bound + 1) for beta in active_maps(len(x), n)]
    estimate = sum(
        total.hom_size(x, x2) * (b2.target + 1) ** b.target for x, b in objects for x2, b2 in objects
    )
    guard_size(estimate, f"the envelope of {operad.name}")
    morphisms = {}
    for x, beta in objects:
        for x2, beta2 in objects:
            homs = total.hom(x, x2)
            for gamma in all_maps(beta.target, beta2.target):
                right = gamma.compose(beta)
                for f in homs:
                    if beta2.compose(f.alpha) == right:
                        morphisms[((x, beta), (x2, beta2), f, gamma)] = ((x, beta), (x2, beta2))
    identities = {(x, beta): ((x, beta), (x, beta), total.identity(x), PointedMap.identity(beta.target)) for x, beta in objects}

    def compose(second, first):
        return (first[0], second[1], total.compose(second[2], first[2]), second[3].compose(first[3]))

    logger.info(f"Envelope of {operad.name}: {len(objects)} objects, {len(morphisms)} morphisms")
    return FiniteCategory(objects, morphisms, identities, compose, f"Env({operad.name})")


def envelope_fiber(category: FiniteCategory, n: int) -> List:
    """Objects of the envelope lying over <n>."""
    return [obj for obj in category.objects if obj[1].target == n]


def tw_env_category(operad: DiscreteOperad, arity_bound: Optional[int] = None) -> FiniteCategory:
    """Twisted arrows of the active part of the total category."""
    total = total_category(operad, arity_bound)
    sizes = {(a, b): total.hom_size(a, b, True) for a in total.objects for b in total.objects}
    estimate = sum(
        sizes[(x, y)] * sizes[(x1, y1)] * sizes[(x, x1)] * sizes[(y1, y)]
        for x in total.objects
        for y in total.objects
        for x1 in total.objects
        for y1 in total.objects
    )
    guard_size(estimate, f"twisted arrows of {operad.name}")
    return twisted_arrow_cat(total.as_category(active_only=True))


def isomorphisms_from(total: OperadTotalCategory, y: Colors) -> Iterator[TupleMorphism]:
    """Every isomorphism out of Y."""
    for y2 in product(total.operad.colors, repeat=len(y)):
        for alpha in bijections(len(y)):
            for f in total.morphisms_over(tuple(y), tuple(y2), alpha):
                if total.is_isomorphism(f):
                    yield f
