"""The shapes F0 ... F3, G and the comparison maps between them.

For a simplicial set K with left cone L = K^<:

* F0 = L x Delta^1, marking the edges of L x {1};
* F1 = colim over simplices of L of Delta^m * Delta^m, marking the back copy;
* F2 = L^>, flat;
* F3 = s_*(L), marking the back copy;
* G  = s_*(K x Delta^1) glued to s_*(Delta^0) along s_*(K x {0}), marking the
  back edges (k,1)~ -> (k,0)~.

Vertices of the back copy carry the label suffix ``~``; the cone point is
``<`` and the extra point of F2 is ``>``. The bookkeeping of marked edges for
F1 and F3 at K of dimension >= 2 follows the same rule as in low dimension.
"""
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple

from src.app.core.exceptions import InvalidSimplicialDataError
from src.app.services.constructions import (
    JoinResult,
    ProductResult,
    PushoutResult,
    cone_left,
    cone_right,
    flat,
    map_by_vertices,
    point,
    product,
    pushout,
    standard_simplex,
    subcomplex,
)
from src.app.services.simplex_ops import identity
from src.app.services.simplicial_set import SimplexRef, SimplicialMap, SimplicialSet
from src.app.services.twisted import BAR, DoubleResult, double_map, fiberwise_join, s_lower

logger = logging.getLogger(__name__)

CONE = "<"
TIP = ">"
SHAPE_KINDS = ("F0", "F1", "F2", "F3", "G")
MAP_KINDS = ("i0", "i1", "i2", "p", "e", "r")


@dataclass
class ShapeDiagram:
    """A shape with the recipe that produced it."""

    kind: str
    base: SimplicialSet
    space: SimplicialSet
    cone: Optional[str] = CONE
    recipe: Dict[str, Any] = field(default_factory=dict)

    def counts(self) -> Tuple[int, int, int]:
        """(vertices, edges, marked edges)."""
        return (len(self.space.vertices()), len(self.space.edges()), len(self.space.marked))

    def vertex_labels(self) -> List[str]:
        """Every label a vertex is known under; a glued vertex is listed by its aliases only."""
        labels: List[str] = []
        for v in self.space.vertices():
            aliases = self.space.aliases.get(v, ())
            labels.extend(aliases if aliases else [self.space.label(v)])
        return labels


def _coordinate(b: str, e2: Tuple[int, ...], t: int) -> int:
    if b == "0":
        return 0
    if b == "1":
        return 1
    return e2[t]


class ShapeBuilder:
    """Builds every shape and comparison map for one simplicial set K."""

    def __init__(self, base: SimplicialSet):
        self.base = flat(base)
        self.interval = standard_simplex(1)

    @cached_property
    def cone(self) -> JoinResult:
        result = cone_left(self.base, CONE)
        if result.left_ids[CONE] != CONE:
            raise InvalidSimplicialDataError("Vertex id '<' is reserved for the cone point")
        return result

    @cached_property
    def _cone_simplices(self) -> set:
        return {CONE} | {self.cone.pair(CONE, a) for a in self.base.ids()}

    # shapes

    @cached_property
    def _f0(self) -> ProductResult:
        return product(self.cone.space, self.interval, name="F0")

    @cached_property
    def _f1(self) -> DoubleResult:
        return fiberwise_join(self.cone.space)

    @cached_property
    def _f2(self) -> JoinResult:
        return cone_right(self.cone.space, TIP)

    @cached_property
    def _f3(self) -> DoubleResult:
        return s_lower(self.cone.space)

    @cached_property
    def _cylinder(self) -> ProductResult:
        return product(self.base, self.interval, name="KxD1")

    @cached_property
    def _s_cylinder(self) -> DoubleResult:
        return s_lower(self._cylinder.space)

    @cached_property
    def _s_point(self) -> DoubleResult:
        return s_lower(point(CONE))

    @cached_property
    def _g(self) -> PushoutResult:
        cylinder = self._cylinder
        bottom = subcomplex(cylinder.space, [x for x, parts in cylinder.parts.items() if parts[1] == "0"], "Kx0")
        s_bottom = s_lower(bottom)
        inclusion = SimplicialMap.inclusion(s_bottom.space, self._s_cylinder.space, "incl")
        collapse = SimplicialMap(
            bottom, self._s_point.base, {x: ((0,) * (bottom.dim(x) + 1), CONE) for x in bottom.ids()}, "collapse"
        )
        return pushout(inclusion, double_map(collapse, s_bottom, self._s_point), name="G")

    @cached_property
    def f0(self) -> ShapeDiagram:
        result = self._f0
        cone_space = self.cone.space
        labels = {}
        for x, (a, b, _, _) in result.parts.items():
            if cone_space.dim(a) == 0 and b in ("0", "1"):
                labels[x] = cone_space.label(a) + ("" if b == "0" else BAR)
        marked = [x for x, (a, b, _, _) in result.parts.items() if b == "1" and cone_space.dim(a) == 1]
        space = result.space.relabeled(labels, "F0").with_marking(marked)
        return ShapeDiagram("F0", self.base, space, recipe={"product": result})

    @cached_property
    def f1(self) -> ShapeDiagram:
        result = self._f1
        space = result.space.with_marking(result.back_edges()).renamed("F1")
        return ShapeDiagram("F1", self.base, space, recipe={"double": result})

    @cached_property
    def f2(self) -> ShapeDiagram:
        return ShapeDiagram("F2", self.base, flat(self._f2.space).renamed("F2"), recipe={"join": self._f2})

    @cached_property
    def f3(self) -> ShapeDiagram:
        result = self._f3
        space = result.space.with_marking(result.back_edges()).renamed("F3")
        return ShapeDiagram("F3", self.base, space, recipe={"double": result})

    @cached_property
    def g(self) -> ShapeDiagram:
        glued = self._g
        cylinder = self._cylinder
        marked = []
        for x, (a, b, _, _) in cylinder.parts.items():
            if b == "<0,1>" and self.base.dim(a) == 0:
                marked.append(glued.new_ids[self._s_cylinder.simplex(x, [], [0, 1])])
        space = glued.space.with_marking(marked).renamed("G")
        return ShapeDiagram("G", self.base, space, recipe={"pushout": glued})

    def shape(self, kind: str) -> ShapeDiagram:
        builders = {"F0": "f0", "F1": "f1", "F2": "f2", "F3": "f3", "G": "g"}
        if kind not in builders:
            raise InvalidSimplicialDataError(f"Unknown shape {kind}", {"kinds": list(SHAPE_KINDS)})
        return getattr(self, builders[kind])

    # comparison maps

    def i0(self) -> SimplicialMap:
        """F0 -> F1 induced by Delta^m x Delta^1 -> Delta^m * Delta^m."""
        target = self._f1
        assignment: Dict[str, SimplexRef] = {}
        for x, (a, b, e1, e2) in self._f0.parts.items():
            front = [e1[t] for t in range(len(e1)) if _coordinate(b, e2, t) == 0]
            back = [e1[t] for t in range(len(e1)) if _coordinate(b, e2, t) == 1]
            assignment[x] = (identity(len(e1) - 1), target.simplex(a, front, back))
        return SimplicialMap(self.f0.space, self.f1.space, assignment, "i0")

    def _tip_map(self, target: DoubleResult, target_space: SimplicialSet, name: str) -> SimplicialMap:
        join_ = self._f2
        cone_space = self.cone.space
        assignment: Dict[str, SimplexRef] = {}
        for x in cone_space.ids():
            n = cone_space.dim(x)
            assignment[join_.left_ids[x]] = (identity(n), target.simplex(x, range(n + 1), []))
            if x == CONE:
                image = target.simplex(CONE, [0], [0])
            elif x in self._cone_simplices:
                image = target.simplex(x, range(n + 1), [0])
            else:
                base_id = next(a for a in self.base.ids() if self.cone.right_ids[a] == x)
                image = target.simplex(self.cone.pair(CONE, base_id), range(1, n + 2), [0])
            assignment[join_.pair(x, TIP)] = (identity(n + 1), image)
        assignment[join_.right_ids[TIP]] = ((0,), target.simplex(CONE, [], [0]))
        return SimplicialMap(self.f2.space, target_space, assignment, name)

    def i1(self) -> SimplicialMap:
        """F2 -> F1: the first copy identically, the tip to the barred cone point."""
        return self._tip_map(self._f1, self.f1.space, "i1")

    def i2(self) -> SimplicialMap:
        """F2 -> F3, as i1 with s_* in place of the fiberwise join."""
        return self._tip_map(self._f3, self.f3.space, "i2")

    def _collapse_to_cone(self) -> SimplicialMap:
        """K x Delta^1 -> K^<, sending (k,1) to k and (k,0) to the cone point."""
        cone = self.cone
        assignment: Dict[str, SimplexRef] = {}
        for x, (a, b, e1, e2) in self._cylinder.parts.items():
            coords = [_coordinate(b, e2, t) for t in range(len(e1))]
            zeros = coords.count(0)
            if zeros == len(coords):
                assignment[x] = ((0,) * len(coords), CONE)
                continue
            rho, a1 = self.base.face_along(a, e1[zeros:])
            if zeros == 0:
                assignment[x] = (rho, cone.right_ids[a1])
            else:
                assignment[x] = ((0,) * zeros + tuple(1 + v for v in rho), cone.pair(CONE, a1))
        return SimplicialMap(self._cylinder.space, cone.space, assignment, "p~")

    def p(self) -> SimplicialMap:
        """G -> F3 induced by s_* of the collapse K x Delta^1 -> K^<."""
        glued = self._g
        over_cylinder = double_map(self._collapse_to_cone(), self._s_cylinder, self._f3)
        cone_point = SimplicialMap(self._s_point.base, self.cone.space, {CONE: ((0,), CONE)}, "cone")
        over_point = double_map(cone_point, self._s_point, self._f3)
        induced = glued.induced(over_cylinder, over_point, "p")
        return SimplicialMap(self.g.space, self.f3.space, induced.assignment, "p")

    def section_e(self) -> SimplicialMap:
        """F3 -> G for K = Delta^m, from the simplex (0,0) -> (0,1) -> ... -> (m,1)."""
        if self.base.counts() != standard_simplex(max(self.base.top_dim, 0)).counts():
            raise InvalidSimplicialDataError("The section e is only defined for K a standard simplex")
        cylinder = self._cylinder
        vertices = sorted(self.base.vertices(), key=self.base.label)
        vertex_map = {CONE: cylinder.vertex(vertices[0], "0")}
        vertex_map.update({self.cone.right_ids[k]: cylinder.vertex(k, "1") for k in vertices})
        chain = map_by_vertices(self.cone.space, cylinder.space, vertex_map, "D0")
        lifted = double_map(chain, self._f3, self._s_cylinder)
        section = self._g.from_target.compose(lifted)
        return SimplicialMap(self.f3.space, self.g.space, section.assignment, "e")

    def comparison_map(self, kind: str) -> SimplicialMap:
        builders = {"i0": self.i0, "i1": self.i1, "i2": self.i2, "p": self.p, "e": self.section_e}
        if kind == "r":
            return r_map()
        if kind not in builders:
            raise InvalidSimplicialDataError(f"Unknown comparison map {kind}", {"kinds": list(MAP_KINDS)})
        return builders[kind]()


def shape(kind: str, base: SimplicialSet) -> ShapeDiagram:
    return ShapeBuilder(base).shape(kind)


def comparison_map(kind: str, base: SimplicialSet) -> SimplicialMap:
    return ShapeBuilder(base).comparison_map(kind)


def square() -> SimplicialSet:
    """Delta^1 x Delta^1 with the edge Delta^1 x {1} marked."""
    result = product(standard_simplex(1), standard_simplex(1), name="square")
    top_edge = result.pair(((0, 1), "<0,1>"), ((0, 0), "1"))[1]
    return result.space.with_marking([top_edge])


def r_map() -> SimplicialMap:
    """The square onto Delta^2 from (0,0) -> 0, (0,1) -> 1, (1,0) -> 1, (1,1) -> 2."""
    source = square()
    values = {"(0,0)": "0", "(0,1)": "1", "(1,0)": "1", "(1,1)": "2"}
    return map_by_vertices(source, standard_simplex(2), values, "r")
