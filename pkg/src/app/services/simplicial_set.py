"""Finite marked simplicial sets in Eilenberg-Zilber normal form.

A simplicial set is stored through its nondegenerate simplices. Every face of a
nondegenerate simplex is recorded as a pair (surjection, target) meaning the
degeneracy of the nondegenerate simplex ``target`` along ``surjection``. Any
simplex of the set is addressed the same way, by a ``SimplexRef``.
"""
import logging
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from src.app.core.exceptions import InvalidSimplicialDataError, NotMonomorphismError
from src.app.services.simplex_ops import (
    Monotone,
    coface,
    compose,
    factor,
    identity,
    is_monotone,
    is_surjection,
    surjections,
)

logger = logging.getLogger(__name__)

SimplexRef = Tuple[Monotone, str]


def ref_dim(ref: SimplexRef) -> int:
    return len(ref[0]) - 1


def is_degenerate(ref: SimplexRef) -> bool:
    surjection = ref[0]
    return len(set(surjection)) != len(surjection)


class SimplicialSet:
    """A finite marked simplicial set.

    Args:
        dims: dimension of every nondegenerate simplex, in a stable order
        faces: for every nondegenerate simplex of dimension d >= 1, its d + 1
            faces as (surjection, target) pairs
        marked: ids of marked nondegenerate edges
        labels: human readable vertex labels (defaults to the vertex id)
        name: display name
        complete_through: largest dimension known to be complete, for
            truncations of infinite simplicial sets
        aliases: extra labels a vertex is known under after gluing
    """

    def __init__(
        self,
        dims: Mapping[str, int],
        faces: Mapping[str, Sequence[SimplexRef]],
        marked: Iterable[str] = (),
        labels: Optional[Mapping[str, str]] = None,
        name: str = "",
        complete_through: Optional[int] = None,
        aliases: Optional[Mapping[str, Sequence[str]]] = None,
    ):
        self._dims: Dict[str, int] = dict(dims)
        self._faces: Dict[str, Tuple[SimplexRef, ...]] = {}
        for x, d in self._dims.items():
            entries = tuple((tuple(eta), target) for eta, target in faces.get(x, ()))
            self._faces[x] = entries if d > 0 else ()
        self.marked: FrozenSet[str] = frozenset(marked)
        self.labels: Dict[str, str] = {v: v for v, d in self._dims.items() if d == 0}
        if labels:
            self.labels.update({v: l for v, l in labels.items() if v in self.labels})
        self.name = name
        self.complete_through = complete_through
        self.aliases: Dict[str, Tuple[str, ...]] = {v: tuple(a) for v, a in (aliases or {}).items()}
        self._by_dim: Dict[int, List[str]] = {}
        for x, d in self._dims.items():
            self._by_dim.setdefault(d, []).append(x)
        self._face_cache: Dict[Tuple[str, Monotone], SimplexRef] = {}
        self._vertex_cache: Dict[str, Tuple[str, ...]] = {}
        self._check_shape()

    def _check_shape(self) -> None:
        for x, d in self._dims.items():
            if d < 0:
                raise InvalidSimplicialDataError("Negative dimension", {"simplex": x})
            entries = self._faces[x]
            if d > 0 and len(entries) != d + 1:
                raise InvalidSimplicialDataError(
                    f"Simplex {x} of dimension {d} needs {d + 1} faces",
                    {"simplex": x, "faces": len(entries)},
                )
            for i, (eta, target) in enumerate(entries):
                if target not in self._dims:
                    raise InvalidSimplicialDataError(
                        f"Face {i} of {x} points to unknown simplex {target}",
                        {"simplex": x, "face": i, "target": target},
                    )
                if len(eta) != d or not is_monotone(eta) or not is_surjection(eta, self._dims[target]):
                    raise InvalidSimplicialDataError(
                        f"Face {i} of {x} is not a degeneracy of {target}",
                        {"simplex": x, "face": i, "deg": list(eta)},
                    )
        for e in self.marked:
            if self._dims.get(e) != 1:
                raise InvalidSimplicialDataError(f"Marked simplex {e} is not an edge", {"edge": e})

    # basic access

    def __contains__(self, x: str) -> bool:
        return x in self._dims

    def __len__(self) -> int:
        return len(self._dims)

    def __repr__(self) -> str:
        return f"SimplicialSet({self.name or 'anonymous'}, counts={self.counts()}, marked={len(self.marked)})"

    def dim(self, x: str) -> int:
        return self._dims[x]

    def ids(self, dim: Optional[int] = None) -> List[str]:
        if dim is None:
            return list(self._dims)
        return list(self._by_dim.get(dim, ()))

    @property
    def top_dim(self) -> int:
        return max(self._by_dim) if self._by_dim else -1

    def counts(self) -> Tuple[int, ...]:
        return tuple(len(self._by_dim.get(d, ())) for d in range(self.top_dim + 1))

    def vertices(self) -> List[str]:
        return self.ids(0)

    def edges(self) -> List[str]:
        return self.ids(1)

    def faces(self, x: str) -> Tuple[SimplexRef, ...]:
        return self._faces[x]

    def face(self, x: str, i: int) -> SimplexRef:
        return self._faces[x][i]

    def label(self, v: str) -> str:
        return self.labels.get(v, v)

    # simplicial structure

    def face_along(self, x: str, theta: Monotone) -> SimplexRef:
        """Normal form of theta^* x for a monotone map theta into [dim x]."""
        key = (x, theta)
        cached = self._face_cache.get(key)
        if cached is not None:
            return cached
        d = self._dims[x]
        if not is_monotone(theta) or (theta and (theta[0] < 0 or theta[-1] > d)):
            raise InvalidSimplicialDataError(
                f"Operator {theta} does not act on the {d}-simplex {x}", {"simplex": x}
            )
        surjection, image = factor(theta)
        if len(image) == d + 1:
            result = (surjection, x)
        else:
            missing = max(set(range(d + 1)) - set(image))
            face_eta, y = self._faces[x][missing]
            shifted = tuple(v if v < missing else v - 1 for v in image)
            inner_eta, z = self.face_along(y, compose(face_eta, shifted))
            result = (compose(inner_eta, surjection), z)
        self._face_cache[key] = result
        return result

    def apply(self, ref: SimplexRef, theta: Monotone) -> SimplexRef:
        """Normal form of theta^* applied to an arbitrary simplex."""
        eta, x = ref
        return self.face_along(x, compose(eta, theta))

    def ref_face(self, ref: SimplexRef, i: int) -> SimplexRef:
        return self.apply(ref, coface(ref_dim(ref), i))

    def vertices_of(self, x: str) -> Tuple[str, ...]:
        cached = self._vertex_cache.get(x)
        if cached is None:
            cached = tuple(self.face_along(x, (t,))[1] for t in range(self._dims[x] + 1))
            self._vertex_cache[x] = cached
        return cached

    def vertex_labels(self, x: str) -> Tuple[str, ...]:
        return tuple(self.label(v) for v in self.vertices_of(x))

    def sort_key(self, x: str) -> Tuple[int, Tuple[str, ...]]:
        return (self._dims[x], self.vertex_labels(x))

    def is_marked(self, ref: SimplexRef) -> bool:
        """Whether an edge (given as a ref) is marked; degenerate edges always are."""
        eta, x = ref
        if len(eta) != 2:
            raise InvalidSimplicialDataError("Marking only applies to edges", {"simplex": x})
        return is_degenerate(ref) or x in self.marked

    def simplices(self, dim: int) -> List[SimplexRef]:
        """All dim-simplices, degenerate ones included."""
        result = []
        for d in range(min(dim, self.top_dim) + 1):
            for eta in surjections(dim, d):
                result.extend((eta, x) for x in self._by_dim.get(d, ()))
        return result

    def simplex_by_vertices(self, labels: Sequence[str]) -> str:
        """Find the nondegenerate simplex with the given vertex labels."""
        wanted = tuple(labels)
        matches = [x for x in self._by_dim.get(len(wanted) - 1, ()) if self.vertex_labels(x) == wanted]
        if len(matches) != 1:
            raise InvalidSimplicialDataError(
                f"Expected one simplex with vertices {wanted}, found {len(matches)}",
                {"vertices": list(wanted), "matches": matches},
            )
        return matches[0]

    def validate(self) -> None:
        """Check the simplicial identities d_i d_j = d_(j-1) d_i for i < j.

        Raises:
            InvalidSimplicialDataError: if any identity fails
        """
        for x, d in self._dims.items():
            if d < 2:
                continue
            whole = (identity(d), x)
            for j in range(d + 1):
                for i in range(j):
                    left = self.ref_face(self.ref_face(whole, j), i)
                    right = self.ref_face(self.ref_face(whole, i), j - 1)
                    if left != right:
                        raise InvalidSimplicialDataError(
                            f"Simplicial identity fails on {x} for faces {i} < {j}",
                            {"simplex": x, "i": i, "j": j},
                        )

    # derived objects

    def with_marking(self, marked: Iterable[str]) -> "SimplicialSet":
        return SimplicialSet(
            self._dims, self._faces, marked, self.labels, self.name, self.complete_through, self.aliases
        )

    def relabeled(self, labels: Mapping[str, str], name: Optional[str] = None) -> "SimplicialSet":
        merged = dict(self.labels)
        merged.update(labels)
        return SimplicialSet(
            self._dims,
            self._faces,
            self.marked,
            merged,
            self.name if name is None else name,
            self.complete_through,
            self.aliases,
        )

    def renamed(self, name: str) -> "SimplicialSet":
        return self.relabeled({}, name)

    def same_as(self, other: "SimplicialSet") -> bool:
        """Literal equality of ids, faces, markings and labels."""
        return (
            self._dims == other._dims
            and self._faces == other._faces
            and self.marked == other.marked
            and self.labels == other.labels
        )


class SimplicialMap:
    """A map of simplicial sets, given on nondegenerate simplices."""

    def __init__(
        self,
        source: SimplicialSet,
        target: SimplicialSet,
        assignment: Mapping[str, SimplexRef],
        name: str = "",
    ):
        self.source = source
        self.target = target
        self.assignment: Dict[str, SimplexRef] = {x: (tuple(eta), y) for x, (eta, y) in assignment.items()}
        self.name = name
        missing = [x for x in source.ids() if x not in self.assignment]
        if missing:
            raise InvalidSimplicialDataError(
                f"Map {name or ''} leaves {len(missing)} simplices unassigned", {"missing": missing[:10]}
            )

    def __repr__(self) -> str:
        return f"SimplicialMap({self.name or 'anonymous'}: {self.source.name} -> {self.target.name})"

    @classmethod
    def identity(cls, space: SimplicialSet) -> "SimplicialMap":
        return cls(space, space, {x: (identity(space.dim(x)), x) for x in space.ids()}, "id")

    @classmethod
    def inclusion(cls, sub: SimplicialSet, ambient: SimplicialSet, name: str = "") -> "SimplicialMap":
        """The inclusion of a simplicial set whose simplices are literally simplices of ambient."""
        unknown = [x for x in sub.ids() if x not in ambient]
        if unknown:
            raise InvalidSimplicialDataError("Not a subcomplex", {"unknown": unknown[:10]})
        return cls(sub, ambient, {x: (identity(sub.dim(x)), x) for x in sub.ids()}, name)

    def image(self, ref: SimplexRef) -> SimplexRef:
        eta, x = ref
        zeta, y = self.assignment[x]
        return (compose(zeta, eta), y)

    def image_of(self, x: str) -> SimplexRef:
        return self.assignment[x]

    def image_ids(self) -> FrozenSet[str]:
        return frozenset(y for _, y in self.assignment.values())

    def problems(self, marked: bool = True) -> List[str]:
        """List every violated compatibility, empty for a valid map."""
        issues = []
        for x in self.source.ids():
            eta, y = self.assignment[x]
            if y not in self.target:
                issues.append(f"{x} lands on unknown simplex {y}")
                continue
            d = self.source.dim(x)
            if len(eta) != d + 1 or not is_surjection(eta, self.target.dim(y)):
                issues.append(f"{x} is sent to a malformed simplex")
                continue
            for i in range(d + 1 if d > 0 else 0):
                expected = self.image(self.source.face(x, i))
                actual = self.target.ref_face((eta, y), i)
                if expected != actual:
                    issues.append(f"face {i} of {x} does not commute")
        if marked:
            for e in self.source.marked:
                if not self.target.is_marked(self.assignment[e]):
                    issues.append(f"marked edge {e} goes to an unmarked edge")
        return issues

    def check(self, marked: bool = True) -> "SimplicialMap":
        issues = self.problems(marked)
        if issues:
            raise InvalidSimplicialDataError(
                f"Map {self.name or ''} is not a simplicial map", {"problems": issues[:10]}
            )
        return self

    @property
    def is_mono(self) -> bool:
        seen = set()
        for eta, y in self.assignment.values():
            if is_degenerate((eta, y)) or y in seen:
                return False
            seen.add(y)
        return True

    def require_mono(self) -> "SimplicialMap":
        if not self.is_mono:
            raise NotMonomorphismError(f"Map {self.name or ''} is not a monomorphism")
        return self

    def compose(self, inner: "SimplicialMap") -> "SimplicialMap":
        """Return self after inner."""
        return SimplicialMap(
            inner.source,
            self.target,
            {x: self.image(ref) for x, ref in inner.assignment.items()},
            f"{self.name}.{inner.name}",
        )

    def with_spaces(self, source: SimplicialSet, target: SimplicialSet) -> "SimplicialMap":
        """Same assignment between re-marked copies of source and target."""
        return SimplicialMap(source, target, self.assignment, self.name)
