"""Finite categories, their truncated nerves and twisted arrow categories."""
import logging
from typing import Callable, Dict, Hashable, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

import networkx as nx

from src.app.core.config import settings
from src.app.core.exceptions import ArityBoundError, InvalidSimplicialDataError
from src.app.services.simplicial_set import SimplexRef, SimplicialSet

logger = logging.getLogger(__name__)

Obj = Hashable
Mor = Hashable


class FiniteCategory:
    """A category with finitely many objects and morphisms.

    Args:
        objects: the objects, in display order
        morphisms: source and target of every morphism
        identities: the identity morphism of every object
        composition: either a table ``{(g, f): g o f}`` over composable pairs or
            a function computing ``g o f``
        name: display name
    """

    def __init__(
        self,
        objects: Sequence[Obj],
        morphisms: Mapping[Mor, Tuple[Obj, Obj]],
        identities: Mapping[Obj, Mor],
        composition: Union[Mapping[Tuple[Mor, Mor], Mor], Callable[[Mor, Mor], Mor]],
        name: str = "",
    ):
        self.objects: List[Obj] = list(objects)
        self.morphisms: Dict[Mor, Tuple[Obj, Obj]] = dict(morphisms)
        self.identities: Dict[Obj, Mor] = dict(identities)
        self.name = name
        if callable(composition):
            self._compose_fn = composition
            self._table: Dict[Tuple[Mor, Mor], Mor] = {}
        else:
            self._compose_fn = None
            self._table = dict(composition)
        self._homs: Dict[Tuple[Obj, Obj], List[Mor]] = {}
        for m, (a, b) in self.morphisms.items():
            self._homs.setdefault((a, b), []).append(m)
        self._identity_set = set(self.identities.values())

    def __repr__(self) -> str:
        return f"FiniteCategory({self.name}, objects={len(self.objects)}, morphisms={len(self.morphisms)})"

    def source(self, f: Mor) -> Obj:
        return self.morphisms[f][0]

    def target(self, f: Mor) -> Obj:
        return self.morphisms[f][1]

    def hom(self, a: Obj, b: Obj) -> List[Mor]:
        return list(self._homs.get((a, b), ()))

    def identity(self, a: Obj) -> Mor:
        return self.identities[a]

    def is_identity(self, f: Mor) -> bool:
        return f in self._identity_set

    def compose(self, g: Mor, f: Mor) -> Mor:
        """Return g o f."""
        if self.target(f) != self.source(g):
            raise InvalidSimplicialDataError(f"{g} and {f} are not composable", {"g": str(g), "f": str(f)})
        if self._compose_fn is not None:
            key = (g, f)
            if key not in self._table:
                self._table[key] = self._compose_fn(g, f)
            return self._table[key]
        return self._table[(g, f)]

    def non_identities(self) -> List[Mor]:
        return [m for m in self.morphisms if m not in self._identity_set]

    def inverse(self, f: Mor) -> Optional[Mor]:
        a, b = self.morphisms[f]
        for g in self.hom(b, a):
            if self.compose(g, f) == self.identity(a) and self.compose(f, g) == self.identity(b):
                return g
        return None

    def is_groupoid(self) -> bool:
        return all(self.inverse(f) is not None for f in self.morphisms)

    def check_axioms(self) -> List[str]:
        """Return violations of the unit and associativity laws."""
        problems = []
        for a in self.objects:
            ident = self.identities.get(a)
            if ident is None or self.morphisms.get(ident) != (a, a):
                problems.append(f"object {a} lacks an identity")
        for f, (a, b) in self.morphisms.items():
            try:
                if self.compose(self.identity(b), f) != f or self.compose(f, self.identity(a)) != f:
                    problems.append(f"unit law fails at {f}")
            except (KeyError, InvalidSimplicialDataError):
                problems.append(f"composition undefined at {f}")
        for f, (a, b) in self.morphisms.items():
            for g in self.outgoing(b):
                for h in self.outgoing(self.target(g)):
                    try:
                        left = self.compose(h, self.compose(g, f))
                        right = self.compose(self.compose(h, g), f)
                    except KeyError:
                        problems.append(f"composition undefined on ({h}, {g}, {f})")
                        continue
                    if left != right:
                        problems.append(f"associativity fails on ({h}, {g}, {f})")
        return problems

    def outgoing(self, a: Obj) -> List[Mor]:
        return [m for m, (s, _) in self.morphisms.items() if s == a]

    def opposite(self) -> "FiniteCategory":
        return FiniteCategory(
            self.objects,
            {m: (b, a) for m, (a, b) in self.morphisms.items()},
            self.identities,
            lambda g, f: self.compose(f, g),
            f"{self.name}^op",
        )


def from_table(
    objects: Sequence[Obj],
    generators: Mapping[Mor, Tuple[Obj, Obj]],
    composition: Iterable[Tuple[Mor, Mor, Mor]],
    name: str = "",
) -> FiniteCategory:
    """Build a category from non-identity morphisms and composition triples (g, f, g o f).

    Identities are named ``id_<object>`` and compose trivially.
    """
    morphisms = {f"id_{a}": (a, a) for a in objects}
    morphisms.update(generators)
    identities = {a: f"id_{a}" for a in objects}
    table: Dict[Tuple[Mor, Mor], Mor] = {}
    for f, (a, b) in morphisms.items():
        table[(identities[b], f)] = f
        table[(f, identities[a])] = f
    for g, f, gf in composition:
        table[(g, f)] = gf
    return FiniteCategory(objects, morphisms, identities, table, name)


def poset_category(n: int) -> FiniteCategory:
    """The ordinal [n] as a category."""
    objects = list(range(n + 1))
    morphisms = {(i, j): (i, j) for i in objects for j in objects if i <= j}
    return FiniteCategory(
        objects,
        morphisms,
        {i: (i, i) for i in objects},
        lambda g, f: (f[0], g[1]),
        f"[{n}]",
    )


def cyclic_group_category(order: int) -> FiniteCategory:
    """The cyclic group of the given order as a one-object category."""
    morphisms = {k: ("*", "*") for k in range(order)}
    return FiniteCategory(["*"], morphisms, {"*": 0}, lambda g, f: (g + f) % order, f"Z/{order}")


def discrete_category(n: int) -> FiniteCategory:
    objects = [f"o{i}" for i in range(n)]
    return FiniteCategory(
        objects,
        {f"id_{o}": (o, o) for o in objects},
        {o: f"id_{o}" for o in objects},
        lambda g, f: f,
        f"discrete({n})",
    )


def builtin_corpus() -> List[FiniteCategory]:
    """Ten small categories used for consistency checks and lifting witnesses."""
    parallel = parallel_pair()
    span = from_table(["a", "b", "c"], {"l": ("b", "a"), "r": ("b", "c")}, [], "span")
    iso = from_table(
        ["x", "y"],
        {"f": ("x", "y"), "g": ("y", "x")},
        [("g", "f", "id_x"), ("f", "g", "id_y")],
        "iso",
    )
    square = from_table(
        ["00", "01", "10", "11"],
        {
            "h0": ("00", "10"),
            "v0": ("00", "01"),
            "h1": ("01", "11"),
            "v1": ("10", "11"),
            "d": ("00", "11"),
        },
        [("h1", "v0", "d"), ("v1", "h0", "d")],
        "square",
    )
    return [
        poset_category(0),
        poset_category(1),
        poset_category(2),
        discrete_category(3),
        cyclic_group_category(2),
        cyclic_group_category(3),
        parallel,
        span,
        square,
        iso,
    ]


def parallel_pair() -> FiniteCategory:
    return from_table(["x", "y"], {"u": ("x", "y"), "v": ("x", "y")}, [], "parallel")


def _chain_id(chain: Tuple[Mor, ...]) -> str:
    return "[" + "|".join(str(f) for f in chain) + "]"


def nerve_truncated(category: FiniteCategory, d: Optional[int] = None) -> SimplicialSet:
    """The nerve of a finite category through dimension d.

    Nondegenerate k-simplices are chains of k composable non-identity morphisms.
    """
    d = settings.NERVE_DIM_DEFAULT if d is None else d
    vertex_id = {a: str(a) for a in category.objects}

    def normalize(objects: List[Obj], chain: List[Mor]) -> SimplexRef:
        kept = [f for f in chain if not category.is_identity(f)]
        eta = [0]
        for f in chain:
            eta.append(eta[-1] + (0 if category.is_identity(f) else 1))
        if not kept:
            return (tuple(eta), vertex_id[objects[0]])
        return (tuple(eta), _chain_id(tuple(kept)))

    dims: Dict[str, int] = {vertex_id[a]: 0 for a in category.objects}
    faces: Dict[str, List[SimplexRef]] = {}
    layer: List[Tuple[Mor, ...]] = [(f,) for f in category.non_identities()]
    longer_exists = False
    for k in range(1, d + 2):
        if not layer:
            break
        if k == d + 1:
            longer_exists = True
            break
        for chain in layer:
            objects = [category.source(chain[0])] + [category.target(f) for f in chain]
            x = _chain_id(chain)
            dims[x] = k
            entries = []
            for i in range(k + 1):
                if i == 0:
                    entries.append(normalize(objects[1:], list(chain[1:])))
                elif i == k:
                    entries.append(normalize(objects[:-1], list(chain[:-1])))
                else:
                    composite = category.compose(chain[i], chain[i - 1])
                    entries.append(
                        normalize(objects[:i] + objects[i + 1:], list(chain[: i - 1]) + [composite] + list(chain[i + 1:]))
                    )
            faces[x] = entries
        layer = [
            chain + (g,)
            for chain in layer
            for g in category.outgoing(category.target(chain[-1]))
            if not category.is_identity(g)
        ]
    return SimplicialSet(
        dims,
        faces,
        name=f"N({category.name})",
        complete_through=d if longer_exists else None,
    )


def twisted_arrow_cat(category: FiniteCategory) -> FiniteCategory:
    """Tw(C): a morphism f -> g is a pair (a, b) with f = b o g o a."""
    objects = list(category.morphisms)
    morphisms: Dict[Mor, Tuple[Obj, Obj]] = {}
    for f in objects:
        x, y = category.morphisms[f]
        for g in objects:
            x1, y1 = category.morphisms[g]
            for a in category.hom(x, x1):
                for b in category.hom(y1, y):
                    if category.compose(b, category.compose(g, a)) == f:
                        morphisms[(f, g, a, b)] = (f, g)
    identities = {
        f: (f, f, category.identity(category.source(f)), category.identity(category.target(f))) for f in objects
    }

    def compose(second: Mor, first: Mor) -> Mor:
        f, g, a, b = first
        _, h, a2, b2 = second
        return (f, h, category.compose(a2, a), category.compose(b, b2))

    return FiniteCategory(objects, morphisms, identities, compose, f"Tw({category.name})")


def pi0(item: Union[SimplicialSet, FiniteCategory]) -> List[Set[Hashable]]:
    """Connected components, as a list of sets sorted by their smallest element."""
    graph = nx.Graph()
    if isinstance(item, SimplicialSet):
        graph.add_nodes_from(item.vertices())
        for e in item.edges():
            u, v = item.vertices_of(e)
            graph.add_edge(u, v)
    else:
        graph.add_nodes_from(range(len(item.objects)))
        position = {a: i for i, a in enumerate(item.objects)}
        for f, (a, b) in item.morphisms.items():
            graph.add_edge(position[a], position[b])
        components = [{item.objects[i] for i in comp} for comp in nx.connected_components(graph)]
        return sorted(components, key=lambda c: min(position[a] for a in c))
    return sorted((set(c) for c in nx.connected_components(graph)), key=lambda c: min(map(str, c)))


def guard_size(estimate: int, what: str) -> None:
    """Fail fast when an enumeration would exceed the morphism guard."""
    if estimate > settings.MORPHISM_GUARD:
        raise ArityBoundError(
            f"Enumerating {what} needs about {estimate} morphisms, guard is {settings.MORPHISM_GUARD}",
            {"estimate": estimate, "guard": settings.MORPHISM_GUARD},
        )
