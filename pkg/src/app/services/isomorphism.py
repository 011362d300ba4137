"""Isomorphism search for finite marked simplicial sets.

Simplices are matched dimension by dimension. A simplex becomes eligible once
all of its faces are matched, and its candidates are then read off an index of
the target keyed by face data. Forced matches are propagated without
branching; the search branches only where several candidates remain.
"""
import logging
from collections import Counter
from typing import Dict, Hashable, List, Mapping, Optional, Tuple

from src.app.core.config import settings
from src.app.core.exceptions import BudgetExceededError
from src.app.services.simplex_ops import identity
from src.app.services.simplicial_set import SimplicialMap, SimplicialSet

logger = logging.getLogger(__name__)


def _signatures(
    space: SimplicialSet, respect_marking: bool, colors: Optional[Mapping[str, Hashable]]
) -> Dict[str, Tuple]:
    cofaces: Dict[str, Counter] = {x: Counter() for x in space.ids()}
    for y in space.ids():
        dy = space.dim(y)
        for i, (eta, t) in enumerate(space.faces(y)):
            cofaces[t][(dy, i, eta)] += 1
    result = {}
    for x in space.ids():
        result[x] = (
            space.dim(x),
            respect_marking and x in space.marked,
            (colors or {}).get(x),
            tuple((eta, space.dim(t)) for eta, t in space.faces(x)),
            tuple(sorted(cofaces[x].items())),
        )
    return result


def find_isomorphism(
    source: SimplicialSet,
    target: SimplicialSet,
    fixed: Optional[Mapping[str, str]] = None,
    respect_marking: bool = True,
    source_colors: Optional[Mapping[str, Hashable]] = None,
    target_colors: Optional[Mapping[str, Hashable]] = None,
    budget: Optional[int] = None,
    node_budget: Optional[int] = None,
) -> Optional[SimplicialMap]:
    """Find an isomorphism source -> target.

    Args:
        source: the domain
        target: the codomain
        fixed: simplices whose images are prescribed
        respect_marking: require marked edges to correspond
        source_colors: optional colours that the isomorphism must preserve
        target_colors: colours on the target side
        budget: maximal number of nondegenerate simplices per side
        node_budget: maximal number of search nodes

    Returns:
        Optional[SimplicialMap]: a witness, or None when no isomorphism exists

    Raises:
        BudgetExceededError: if either side is too large or the search runs long
    """
    budget = settings.ISO_SIMPLEX_BUDGET if budget is None else budget
    node_budget = settings.SEARCH_NODE_BUDGET if node_budget is None else node_budget
    size = max(len(source), len(target))
    if size > budget:
        raise BudgetExceededError(
            f"Isomorphism search needs {size} simplices, budget is {budget}", budget=budget, used=size
        )
    if source.counts() != target.counts():
        return None
    if respect_marking and len(source.marked) != len(target.marked):
        return None
    sig_a = _signatures(source, respect_marking, source_colors)
    sig_b = _signatures(target, respect_marking, target_colors)
    if Counter(sig_a.values()) != Counter(sig_b.values()):
        return None

    index: Dict[Tuple, List[str]] = {}
    for y in target.ids():
        index.setdefault((target.dim(y), target.faces(y)), []).append(y)
    vertices_by_sig: Dict[Tuple, List[str]] = {}
    for v in target.vertices():
        vertices_by_sig.setdefault(sig_b[v], []).append(v)

    fixed = dict(fixed or {})
    assign: Dict[str, str] = {}
    used: set = set()
    order = sorted(source.ids(), key=source.dim)
    nodes = 0

    def candidates(x: str) -> Optional[List[str]]:
        if source.dim(x) == 0:
            pool = vertices_by_sig.get(sig_a[x], [])
        else:
            key = []
            for eta, t in source.faces(x):
                if t not in assign:
                    return None
                key.append((eta, assign[t]))
            pool = [y for y in index.get((source.dim(x), tuple(key)), []) if sig_b[y] == sig_a[x]]
        pool = [y for y in pool if y not in used]
        if x in fixed:
            pool = [y for y in pool if y == fixed[x]]
        return pool

    def extend() -> bool:
        nonlocal nodes
        trail: List[str] = []
        while True:
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceededError(
                    "Isomorphism search ran out of nodes", budget=node_budget, used=nodes
                )
            if len(assign) == len(order):
                return True
            best: Optional[Tuple[str, List[str]]] = None
            for x in order:
                if x in assign:
                    continue
                pool = candidates(x)
                if pool is None:
                    continue
                if best is None or len(pool) < len(best[1]):
                    best = (x, pool)
                    if len(pool) <= 1:
                        break
            if best is None or not best[1]:
                for x in trail:
                    used.discard(assign.pop(x))
                return False
            x, pool = best
            if len(pool) == 1:
                assign[x] = pool[0]
                used.add(pool[0])
                trail.append(x)
                continue
            for y in pool:
                assign[x] = y
                used.add(y)
                if extend():
                    return True
                used.discard(y)
                del assign[x]
            for z in trail:
                used.discard(assign.pop(z))
            return False

    found = extend()
    logger.debug(f"Isomorphism search {source.name} -> {target.name}: {found} after {nodes} nodes")
    if not found:
        return None
    return SimplicialMap(
        source, target, {x: (identity(source.dim(x)), y) for x, y in assign.items()}, "iso"
    )


def is_isomorphic(source: SimplicialSet, target: SimplicialSet, respect_marking: bool = True) -> bool:
    return find_isomorphism(source, target, respect_marking=respect_marking) is not None


def find_map_isomorphism(
    first: SimplicialMap,
    second: SimplicialMap,
    fix_source: Optional[Mapping[str, str]] = None,
    respect_marking: bool = True,
) -> Optional[SimplicialMap]:
    """Find an isomorphism of targets carrying the image of first onto the image of second.

    Both maps must be monomorphisms. With ``fix_source`` (a bijection between
    the two sources) the isomorphism must also be compatible with it.
    """
    first.require_mono()
    second.require_mono()
    image_a = first.image_ids()
    image_b = second.image_ids()
    colors_a = {x: x in image_a for x in first.target.ids()}
    colors_b = {y: y in image_b for y in second.target.ids()}
    fixed = None
    if fix_source is not None:
        fixed = {
            first.assignment[a][1]: second.assignment[fix_source[a]][1] for a in first.source.ids()
        }
    return find_isomorphism(
        first.target,
        second.target,
        fixed=fixed,
        respect_marking=respect_marking,
        source_colors=colors_a,
        target_colors=colors_b,
    )


def maps_isomorphic(first: SimplicialMap, second: SimplicialMap, respect_marking: bool = True) -> bool:
    """Whether two monomorphisms are isomorphic as objects of the arrow category."""
    if respect_marking and len(first.source.marked) != len(second.source.marked):
        return False
    return find_map_isomorphism(first, second, respect_marking=respect_marking) is not None
