"""Standard simplicial sets and the constructions built from them.

Every construction returns plain ``SimplicialSet`` values; constructions with
canonical maps (joins, products, pushouts, disjoint unions) return a small
result object carrying those maps as well.
"""
import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from src.app.core.exceptions import InvalidSimplicialDataError
from src.app.services.simplex_ops import Monotone, coface, compose, identity
from src.app.services.simplicial_set import SimplexRef, SimplicialMap, SimplicialSet

logger = logging.getLogger(__name__)


def empty(name: str = "empty") -> SimplicialSet:
    return SimplicialSet({}, {}, name=name)


def simplex_id(labels: Sequence[str]) -> str:
    """Id of the full subsimplex on the given ordered vertex labels."""
    if len(labels) == 1:
        return labels[0]
    return "<" + ",".join(labels) + ">"


def ordered_complex(
    vertex_labels: Sequence[str],
    generators: Iterable[Sequence[int]],
    name: str = "",
    marked: Iterable[Tuple[int, int]] = (),
) -> SimplicialSet:
    """Build the ordered simplicial complex generated by vertex index sets.

    Args:
        vertex_labels: labels of the ordered vertices
        generators: index sets whose faces are all included
        name: display name
        marked: index pairs (i, j) of edges to mark

    Returns:
        SimplicialSet: ids are vertex labels for vertices and ``<l0,...,lk>``
        above, so complexes on the same vertex list share ids
    """
    labels = list(vertex_labels)
    closed: Set[Tuple[int, ...]] = set()
    for gen in generators:
        gen = tuple(sorted(set(gen)))
        if any(v < 0 or v >= len(labels) for v in gen):
            raise InvalidSimplicialDataError("Vertex index out of range", {"generator": list(gen)})
        for size in range(1, len(gen) + 1):
            closed.update(combinations(gen, size))
    ordered = sorted(closed, key=lambda s: (len(s), s))
    dims: Dict[str, int] = {}
    faces: Dict[str, List[SimplexRef]] = {}
    for s in ordered:
        x = simplex_id([labels[v] for v in s])
        dims[x] = len(s) - 1
        if len(s) > 1:
            faces[x] = [
                (identity(len(s) - 2), simplex_id([labels[v] for v in s[:i] + s[i + 1:]]))
                for i in range(len(s))
            ]
    marked_ids = []
    for i, j in marked:
        edge = simplex_id([labels[i], labels[j]])
        if edge not in dims:
            raise InvalidSimplicialDataError(f"Unknown edge {edge}", {"edge": edge})
        marked_ids.append(edge)
    vertex_map = {labels[v]: labels[v] for (v,) in (s for s in ordered if len(s) == 1)}
    return SimplicialSet(dims, faces, marked_ids, vertex_map, name)


def _labels_for(n: int, labels: Optional[Sequence[str]]) -> List[str]:
    if labels is None:
        return [str(i) for i in range(n + 1)]
    if len(labels) != n + 1 or len(set(labels)) != n + 1:
        raise InvalidSimplicialDataError("Need n + 1 distinct vertex labels", {"labels": list(labels)})
    return list(labels)


def standard_simplex(n: int, labels: Optional[Sequence[str]] = None) -> SimplicialSet:
    if n < 0:
        raise InvalidSimplicialDataError("Simplex dimension must be non-negative", {"n": n})
    return ordered_complex(_labels_for(n, labels), [range(n + 1)], f"Delta^{n}")


def boundary(n: int, labels: Optional[Sequence[str]] = None) -> SimplicialSet:
    if n < 0:
        raise InvalidSimplicialDataError("Boundary dimension must be non-negative", {"n": n})
    gens = [[v for v in range(n + 1) if v != i] for i in range(n + 1)] if n > 0 else []
    return ordered_complex(_labels_for(n, labels), gens, f"dDelta^{n}")


def horn(n: int, k: int, labels: Optional[Sequence[str]] = None) -> SimplicialSet:
    if n < 1 or not 0 <= k <= n:
        raise InvalidSimplicialDataError("Horns need n >= 1 and 0 <= k <= n", {"n": n, "k": k})
    gens = [[v for v in range(n + 1) if v != i] for i in range(n + 1) if i != k]
    return ordered_complex(_labels_for(n, labels), gens, f"Lambda^{n}_{k}")


def spine(n: int, labels: Optional[Sequence[str]] = None) -> SimplicialSet:
    if n < 1:
        raise InvalidSimplicialDataError("Spines need n >= 1", {"n": n})
    return ordered_complex(_labels_for(n, labels), [(i, i + 1) for i in range(n)], f"Sp^{n}")


def point(label: str = "0") -> SimplicialSet:
    return standard_simplex(0, [label])


def subcomplex(space: SimplicialSet, generators: Iterable[str], name: str = "") -> SimplicialSet:
    """The smallest simplicial subset containing the generators, with restricted marking."""
    keep: Set[str] = set()
    stack = list(generators)
    while stack:
        x = stack.pop()
        if x in keep:
            continue
        if x not in space:
            raise InvalidSimplicialDataError(f"Unknown simplex {x}", {"simplex": x})
        keep.add(x)
        stack.extend(target for _, target in space.faces(x))
    ids = [x for x in space.ids() if x in keep]
    return SimplicialSet(
        {x: space.dim(x) for x in ids},
        {x: space.faces(x) for x in ids},
        [e for e in space.marked if e in keep],
        {v: space.label(v) for v in ids if space.dim(v) == 0},
        name or f"sub({space.name})",
        aliases={v: a for v, a in space.aliases.items() if v in keep},
    )


def mark_edges(space: SimplicialSet, edges: Iterable[str]) -> SimplicialSet:
    extra = list(edges)
    for e in extra:
        if e not in space or space.dim(e) != 1:
            raise InvalidSimplicialDataError(f"Unknown edge {e}", {"edge": e})
    return space.with_marking(set(space.marked) | set(extra))


def flat(space: SimplicialSet) -> SimplicialSet:
    return space.with_marking(())


def sharp(space: SimplicialSet) -> SimplicialSet:
    return space.with_marking(space.edges())


def _tags(left: Iterable[str], right: Iterable[str], tags: Optional[Tuple[str, str]]) -> Tuple[str, str]:
    if tags is not None:
        return tags
    if set(left) & set(right):
        return ("L:", "R:")
    return ("", "")


@dataclass
class JoinResult:
    space: SimplicialSet
    left: SimplicialMap
    right: SimplicialMap
    left_ids: Dict[str, str]
    right_ids: Dict[str, str]

    def pair(self, a: str, b: str) -> str:
        """Id of the join simplex a * b for nondegenerate a and b."""
        return f"{self.left_ids[a]}*{self.right_ids[b]}"


def join(
    left: SimplicialSet,
    right: SimplicialSet,
    name: str = "",
    tags: Optional[Tuple[str, str]] = None,
) -> JoinResult:
    """The join left * right with its two canonical inclusions.

    Vertices of ``left`` come before vertices of ``right``. Ids and labels get
    the prefixes ``L:`` and ``R:`` only when the two sides share ids.
    """
    lt, rt = _tags(left.ids(), right.ids(), tags)
    lid = {a: lt + a for a in left.ids()}
    rid = {b: rt + b for b in right.ids()}
    ltag_label = lt if lt and set(left.labels.values()) & set(right.labels.values()) else ""
    rtag_label = rt if rt and ltag_label else ""

    dims: Dict[str, int] = {}
    faces: Dict[str, List[SimplexRef]] = {}
    for a in left.ids():
        dims[lid[a]] = left.dim(a)
        faces[lid[a]] = [(eta, lid[y]) for eta, y in left.faces(a)]
    for b in right.ids():
        dims[rid[b]] = right.dim(b)
        faces[rid[b]] = [(eta, rid[y]) for eta, y in right.faces(b)]
    pairs = sorted(
        ((a, b) for a in left.ids() for b in right.ids()),
        key=lambda ab: left.dim(ab[0]) + right.dim(ab[1]),
    )
    for a, b in pairs:
        p, q = left.dim(a), right.dim(b)
        x = f"{lid[a]}*{rid[b]}"
        dims[x] = p + q + 1
        entries: List[SimplexRef] = []
        for i in range(p + 1):
            if p == 0:
                entries.append((identity(q), rid[b]))
                continue
            eta, a1 = left.face(a, i)
            top = left.dim(a1)
            entries.append((eta + tuple(top + 1 + t for t in range(q + 1)), f"{lid[a1]}*{rid[b]}"))
        for j in range(q + 1):
            if q == 0:
                entries.append((identity(p), lid[a]))
                continue
            eta, b1 = right.face(b, j)
            entries.append((identity(p) + tuple(p + 1 + v for v in eta), f"{lid[a]}*{rid[b1]}"))
        faces[x] = entries
    labels = {lid[v]: ltag_label + left.label(v) for v in left.vertices()}
    labels.update({rid[v]: rtag_label + right.label(v) for v in right.vertices()})
    marked = [lid[e] for e in left.marked] + [rid[e] for e in right.marked]
    space = SimplicialSet(dims, faces, marked, labels, name or f"{left.name}*{right.name}")
    left_map = SimplicialMap(left, space, {a: (identity(left.dim(a)), lid[a]) for a in left.ids()}, "left")
    right_map = SimplicialMap(right, space, {b: (identity(right.dim(b)), rid[b]) for b in right.ids()}, "right")
    return JoinResult(space, left_map, right_map, lid, rid)


def cone_left(space: SimplicialSet, cone_label: str = "<") -> JoinResult:
    """K^< = point * K."""
    return join(point(cone_label), space, name=f"{space.name}^<")


def cone_right(space: SimplicialSet, cone_label: str = ">") -> JoinResult:
    """K^> = K * point."""
    return join(space, point(cone_label), name=f"{space.name}^>")


def opposite(space: SimplicialSet) -> SimplicialSet:
    """Reverse every vertex order."""
    faces: Dict[str, List[SimplexRef]] = {}
    for x in space.ids():
        d = space.dim(x)
        entries = []
        for i in range(d + 1 if d > 0 else 0):
            eta, y = space.face(x, d - i)
            top = space.dim(y)
            entries.append((tuple(top - eta[d - 1 - t] for t in range(d)), y))
        faces[x] = entries
    return SimplicialSet(
        {x: space.dim(x) for x in space.ids()},
        faces,
        space.marked,
        space.labels,
        f"{space.name}^op",
        space.complete_through,
        space.aliases,
    )


def _lattice_paths(p: int, q: int) -> List[Tuple[Monotone, Monotone]]:
    """Jointly injective monotone surjections onto [p] x [q]."""
    paths: List[Tuple[Monotone, Monotone]] = []

    def walk(i: int, j: int, first: Tuple[int, ...], second: Tuple[int, ...]) -> None:
        if i == p and j == q:
            paths.append((first, second))
            return
        for di, dj in ((1, 0), (0, 1), (1, 1)):
            ni, nj = i + di, j + dj
            if ni <= p and nj <= q:
                walk(ni, nj, first + (ni,), second + (nj,))

    walk(0, 0, (0,), (0,))
    return paths


@dataclass
class ProductResult:
    space: SimplicialSet
    left: SimplicialSet
    right: SimplicialSet
    id_for: Callable[[str, str, Monotone, Monotone], str] = field(repr=False)
    parts: Dict[str, Tuple[str, str, Monotone, Monotone]] = field(default_factory=dict, repr=False)

    def pair(self, ref_a: SimplexRef, ref_b: SimplexRef) -> SimplexRef:
        """Normal form of the product simplex with the given components."""
        (rho1, a), (rho2, b) = ref_a, ref_b
        if len(rho1) != len(rho2):
            raise InvalidSimplicialDataError("Components have different dimensions")
        chain: List[Tuple[int, int]] = []
        zeta: List[int] = []
        for point_ in zip(rho1, rho2):
            if not chain or chain[-1] != point_:
                chain.append(point_)
            zeta.append(len(chain) - 1)
        e1 = tuple(c[0] for c in chain)
        e2 = tuple(c[1] for c in chain)
        return (tuple(zeta), self.id_for(a, b, e1, e2))

    def vertex(self, a: str, b: str) -> str:
        return self.id_for(a, b, (0,), (0,))

    def projections(self) -> Tuple[SimplicialMap, SimplicialMap]:
        first, second = {}, {}
        for x in self.space.ids():
            a, b, e1, e2 = self.parts[x]
            first[x] = self.left.face_along(a, e1)
            second[x] = self.right.face_along(b, e2)
        return (
            SimplicialMap(self.space, self.left, first, "pr1"),
            SimplicialMap(self.space, self.right, second, "pr2"),
        )


def product(left: SimplicialSet, right: SimplicialSet, name: str = "") -> ProductResult:
    """The product left x right with the product marking."""

    def pid(a: str, b: str, e1: Monotone, e2: Monotone) -> str:
        if len(e1) == 1:
            return f"({a},{b})"
        return f"({a},{b})@" + ".".join(f"{i}:{j}" for i, j in zip(e1, e2))

    parts: Dict[str, Tuple[str, str, Monotone, Monotone]] = {}
    for a in left.ids():
        for b in right.ids():
            for e1, e2 in _lattice_paths(left.dim(a), right.dim(b)):
                parts[pid(a, b, e1, e2)] = (a, b, e1, e2)
    order = sorted(parts, key=lambda x: len(parts[x][2]))
    result = ProductResult(empty(), left, right, pid)
    faces: Dict[str, List[SimplexRef]] = {}
    for x in order:
        a, b, e1, e2 = parts[x]
        n = len(e1) - 1
        entries = []
        for i in range(n + 1 if n > 0 else 0):
            theta = coface(n, i)
            entries.append(
                result.pair(left.face_along(a, compose(e1, theta)), right.face_along(b, compose(e2, theta)))
            )
        faces[x] = entries
    marked = [
        x
        for x in order
        if len(parts[x][2]) == 2
        and left.is_marked((parts[x][2], parts[x][0]))
        and right.is_marked((parts[x][3], parts[x][1]))
    ]
    labels = {
        x: f"({left.label(parts[x][0])},{right.label(parts[x][1])})" for x in order if len(parts[x][2]) == 1
    }
    result.space = SimplicialSet(
        {x: len(parts[x][2]) - 1 for x in order}, faces, marked, labels, name or f"{left.name}x{right.name}"
    )
    result.parts = parts
    return result


@dataclass
class PushoutResult:
    """The pushout C u_A B of a mono f: A -> B and g: A -> C."""

    space: SimplicialSet
    from_target: SimplicialMap
    from_other: SimplicialMap
    new_ids: Dict[str, str]

    def induced(self, map_b: SimplicialMap, map_c: SimplicialMap, name: str = "") -> SimplicialMap:
        """The universal map out of the pushout for a compatible cocone."""
        assignment: Dict[str, SimplexRef] = dict(map_c.assignment)
        for b, x in self.new_ids.items():
            assignment[x] = map_b.assignment[b]
        return SimplicialMap(self.space, map_c.target, assignment, name or "induced")


def pushout(
    f: SimplicialMap,
    g: SimplicialMap,
    name: str = "",
    names: Optional[Mapping[str, str]] = None,
) -> PushoutResult:
    """Glue B to C along A, for a monomorphism f: A -> B and any g: A -> C.

    Args:
        f: the monomorphism A -> B
        g: the attaching map A -> C
        name: display name of the result
        names: optional ids for simplices of B outside f(A)

    Returns:
        PushoutResult: the glued set with its cocone maps

    Raises:
        NotMonomorphismError: if f is not a monomorphism
    """
    f.require_mono()
    if f.source is not g.source and f.source.ids() != g.source.ids():
        raise InvalidSimplicialDataError("Pushout legs have different sources")
    b_space, c_space = f.target, g.target
    inverse = {y: a for a, (_, y) in f.assignment.items()}
    taken = set(c_space.ids())
    new_ids: Dict[str, str] = {}
    for x in b_space.ids():
        if x in inverse:
            continue
        candidate = (names or {}).get(x, x)
        while candidate in taken:
            candidate += "'"
        taken.add(candidate)
        new_ids[x] = candidate

    dims = {c: c_space.dim(c) for c in c_space.ids()}
    faces: Dict[str, List[SimplexRef]] = {c: list(c_space.faces(c)) for c in c_space.ids()}
    for x, nx in new_ids.items():
        dims[nx] = b_space.dim(x)
        entries = []
        for eta, y in b_space.faces(x):
            if y in inverse:
                zeta, c = g.assignment[inverse[y]]
                entries.append((compose(zeta, eta), c))
            else:
                entries.append((eta, new_ids[y]))
        faces[nx] = entries

    marked = set(c_space.marked) | {new_ids[e] for e in b_space.marked if e in new_ids}
    for a in f.source.edges():
        if f.assignment[a][1] in b_space.marked:
            zeta, c = g.assignment[a]
            if len(set(zeta)) == 2:
                marked.add(c)
    labels = dict(c_space.labels)
    labels.update({new_ids[v]: b_space.label(v) for v in b_space.vertices() if v in new_ids})
    aliases: Dict[str, List[str]] = {v: list(a) for v, a in c_space.aliases.items()}
    for a in f.source.vertices():
        zeta, c = g.assignment[a]
        known = aliases.setdefault(c, [])
        label = b_space.label(f.assignment[a][1])
        if label != c_space.label(c) and label not in known:
            known.append(label)
    aliases = {v: a for v, a in aliases.items() if a}
    space = SimplicialSet(dims, faces, marked, labels, name or f"{b_space.name}+{c_space.name}", aliases=aliases)

    from_b: Dict[str, SimplexRef] = {}
    for x in b_space.ids():
        if x in inverse:
            from_b[x] = g.assignment[inverse[x]]
        else:
            from_b[x] = (identity(b_space.dim(x)), new_ids[x])
    from_c = {c: (identity(c_space.dim(c)), c) for c in c_space.ids()}
    logger.debug(f"Pushout {space.name}: {len(new_ids)} new simplices")
    return PushoutResult(
        space,
        SimplicialMap(b_space, space, from_b, "from_target"),
        SimplicialMap(c_space, space, from_c, "from_other"),
        new_ids,
    )


@dataclass
class UnionResult:
    space: SimplicialSet
    left: SimplicialMap
    right: SimplicialMap


def disjoint_union(
    left: SimplicialSet, right: SimplicialSet, name: str = "", tags: Optional[Tuple[str, str]] = None
) -> UnionResult:
    lt, rt = _tags(left.ids(), right.ids(), tags)
    dims: Dict[str, int] = {}
    faces: Dict[str, List[SimplexRef]] = {}
    labels: Dict[str, str] = {}
    for tag, part in ((lt, left), (rt, right)):
        for x in part.ids():
            dims[tag + x] = part.dim(x)
            faces[tag + x] = [(eta, tag + y) for eta, y in part.faces(x)]
        labels.update({tag + v: tag + part.label(v) for v in part.vertices()})
    marked = [lt + e for e in left.marked] + [rt + e for e in right.marked]
    space = SimplicialSet(dims, faces, marked, labels, name or f"{left.name}+{right.name}")
    return UnionResult(
        space,
        SimplicialMap(left, space, {x: (identity(left.dim(x)), lt + x) for x in left.ids()}, "left"),
        SimplicialMap(right, space, {x: (identity(right.dim(x)), rt + x) for x in right.ids()}, "right"),
    )


def map_by_vertices(
    source: SimplicialSet,
    target: SimplicialSet,
    vertex_map: Mapping[str, str],
    name: str = "",
) -> SimplicialMap:
    """Extend a vertex assignment to a map into a set whose simplices are determined by their vertices.

    Raises:
        InvalidSimplicialDataError: if some image vertex sequence spans no
            simplex of the target, or several
    """
    index: Dict[Tuple[str, ...], List[str]] = {}
    for y in target.ids():
        index.setdefault(target.vertices_of(y), []).append(y)
    assignment: Dict[str, SimplexRef] = {}
    for x in source.ids():
        chain: List[str] = []
        zeta: List[int] = []
        for v in source.vertices_of(x):
            image = vertex_map[v]
            if not chain or chain[-1] != image:
                chain.append(image)
            zeta.append(len(chain) - 1)
        matches = index.get(tuple(chain), [])
        if len(matches) != 1:
            raise InvalidSimplicialDataError(
                f"Vertices {chain} do not determine a unique simplex of {target.name}",
                {"simplex": x, "matches": matches},
            )
        assignment[x] = (tuple(zeta), matches[0])
    return SimplicialMap(source, target, assignment, name)
