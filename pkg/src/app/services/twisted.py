"""Twisted arrow constructions on simplicial sets.

``s`` sends [n] to [n] * [n]^op. ``tw_simplicial`` is restriction along s and
``s_lower`` its left adjoint, computed simplex by simplex: a nondegenerate
simplex of s_*(X) is a nondegenerate x of X together with a front set S and a
back set T covering the vertices of x. ``fiberwise_join`` is the same colimit
with [n] * [n] in place of [n] * [n]^op.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Sequence, Tuple

from src.app.core.exceptions import InsufficientDimensionError
from src.app.services.simplex_ops import Monotone, codegeneracy, coface, compose, identity
from src.app.services.simplicial_set import SimplexRef, SimplicialMap, SimplicialSet

logger = logging.getLogger(__name__)

BAR = "~"

Side = Tuple[int, int]  # (0 for the front copy or 1 for the back copy, vertex index)


def s_operator(theta: Monotone, k: int) -> Monotone:
    """s(theta): [2j+1] -> [2k+1] for theta: [j] -> [k]."""
    j = len(theta) - 1
    back = tuple(2 * k + 1 - theta[2 * j + 1 - p] for p in range(j + 1, 2 * j + 2))
    return tuple(theta) + back


def tw_simplicial(space: SimplicialSet, d: int) -> SimplicialSet:
    """Tw(X) through dimension d: k-simplices are the (2k+1)-simplices of X.

    Raises:
        InsufficientDimensionError: if X is a truncation missing dimension 2d+1
    """
    need = 2 * d + 1
    if space.complete_through is not None and space.complete_through < need:
        raise InsufficientDimensionError(
            f"Tw through dimension {d} needs {space.name} complete through {need}",
            {"complete_through": space.complete_through, "needed": need},
        )
    memo: Dict[Tuple[SimplexRef, int], SimplexRef] = {}

    def tw_id(ref: SimplexRef) -> str:
        return f"tw({ref[1]};{'.'.join(map(str, ref[0]))})"

    def normalize(ref: SimplexRef, k: int) -> Tuple[Monotone, SimplexRef]:
        key = (ref, k)
        if key in memo:
            return memo[key]
        result = (identity(k), ref)
        for j in range(k):
            sigma = codegeneracy(k - 1, j)
            lower = space.apply(ref, s_operator(coface(k, j + 1), k))
            if space.apply(lower, s_operator(sigma, k - 1)) == ref:
                eta, base = normalize(lower, k - 1)
                result = (compose(eta, sigma), base)
                break
        memo[key] = result
        return result

    dims: Dict[str, int] = {}
    faces: Dict[str, List[SimplexRef]] = {}
    labels: Dict[str, str] = {}
    for k in range(d + 1):
        for ref in space.simplices(2 * k + 1):
            eta, base = normalize(ref, k)
            if eta != identity(k):
                continue
            x = tw_id(ref)
            dims[x] = k
            if k == 0:
                head = space.apply(ref, (0,))[1]
                tail = space.apply(ref, (1,))[1]
                labels[x] = f"{space.label(head)}->{space.label(tail)}"
                continue
            entries = []
            for i in range(k + 1):
                lower = space.apply(ref, s_operator(coface(k, i), k))
                f_eta, f_base = normalize(lower, k - 1)
                entries.append((f_eta, tw_id(f_base)))
            faces[x] = entries
    return SimplicialSet(dims, faces, (), labels, f"Tw({space.name})", complete_through=d)


@dataclass
class DoubleResult:
    """s_*(X) or the fiberwise join of X, with its simplex bookkeeping."""

    space: SimplicialSet
    base: SimplicialSet
    reverse_back: bool
    parts: Dict[str, Tuple[str, FrozenSet[int], FrozenSet[int]]] = field(default_factory=dict)

    def simplex(self, x: str, front: Sequence[int], back: Sequence[int]) -> str:
        return _double_id(x, front, back)

    def sequence(self, x: str, front: Sequence[int], back: Sequence[int]) -> List[Side]:
        return [(0, s) for s in sorted(front)] + [(1, t) for t in sorted(back, reverse=self.reverse_back)]

    def push(self, seq: Sequence[Side], eta: Monotone, y: str) -> SimplexRef:
        """Normal form of the simplex with vertex sequence seq after applying eta on x."""
        chain: List[Side] = []
        zeta: List[int] = []
        for side, v in seq:
            point_ = (side, eta[v])
            if not chain or chain[-1] != point_:
                chain.append(point_)
            zeta.append(len(chain) - 1)
        front = [v for side, v in chain if side == 0]
        back = [v for side, v in chain if side == 1]
        return (tuple(zeta), _double_id(y, front, back))

    def back_edges(self) -> List[str]:
        """Edges lying entirely in the back copy."""
        return [x for x, (_, front, back) in self.parts.items() if not front and len(back) == 2]


def _double_id(x: str, front: Sequence[int], back: Sequence[int]) -> str:
    return f"s({x}|{','.join(map(str, sorted(front)))}|{','.join(map(str, sorted(back)))})"


def _double(space: SimplicialSet, reverse_back: bool, name: str) -> DoubleResult:
    result = DoubleResult(SimplicialSet({}, {}), space, reverse_back)
    dims: Dict[str, int] = {}
    faces: Dict[str, List[SimplexRef]] = {}
    labels: Dict[str, str] = {}
    for x in space.ids():
        n = space.dim(x)
        everything = set(range(n + 1))
        for mask_front in range(1 << (n + 1)):
            front = frozenset(v for v in everything if mask_front >> v & 1)
            for mask_back in range(1 << (n + 1)):
                back = frozenset(v for v in everything if mask_back >> v & 1)
                if front | back != everything:
                    continue
                y = _double_id(x, front, back)
                result.parts[y] = (x, front, back)
                dims[y] = len(front) + len(back) - 1
                if dims[y] == 0:
                    v = space.vertices_of(x)[0]
                    labels[y] = space.label(v) + ("" if front else BAR)
    for y, (x, front, back) in result.parts.items():
        m = dims[y]
        if m == 0:
            continue
        seq = result.sequence(x, front, back)
        entries = []
        for i in range(m + 1):
            rest = seq[:i] + seq[i + 1:]
            used = sorted({v for _, v in rest})
            if len(used) == space.dim(x) + 1:
                entries.append((identity(m - 1), _double_id(x, [v for s, v in rest if s == 0], [v for s, v in rest if s == 1])))
                continue
            eta, base = space.face_along(x, tuple(used))
            position = {v: p for p, v in enumerate(used)}
            entries.append(result.push([(s, position[v]) for s, v in rest], eta, base))
        faces[y] = entries
    order = sorted(dims, key=lambda y: dims[y])
    result.space = SimplicialSet(
        {y: dims[y] for y in order}, faces, (), labels, name, aliases=None
    )
    return result


def s_lower(space: SimplicialSet) -> DoubleResult:
    """s_*(X), the colimit of Delta^n * Delta^{n,op} over the simplices of X."""
    return _double(space, True, f"s*({space.name})")


def fiberwise_join(space: SimplicialSet) -> DoubleResult:
    """The colimit of Delta^n * Delta^n over the simplices of X."""
    return _double(space, False, f"J({space.name})")


def double_map(f: SimplicialMap, source: DoubleResult, target: DoubleResult) -> SimplicialMap:
    """s_*(f) (or the fiberwise join of f) between already built results."""
    assignment: Dict[str, SimplexRef] = {}
    for y, (x, front, back) in source.parts.items():
        eta, image = f.assignment[x]
        assignment[y] = target.push(source.sequence(x, front, back), eta, image)
    return SimplicialMap(source.space, target.space, assignment, f"s*({f.name})")
