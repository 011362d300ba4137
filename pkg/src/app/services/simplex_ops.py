"""Morphisms of the simplex category.

A morphism [m] -> [n] is a monotone map, stored as its tuple of values. The
Eilenberg-Zilber factorization (a surjection followed by an injection) is
derived on demand and is unique.
"""
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Sequence, Tuple

from src.app.core.exceptions import InvalidSimplicialDataError

Monotone = Tuple[int, ...]


def is_monotone(values: Sequence[int]) -> bool:
    return all(values[i] <= values[i + 1] for i in range(len(values) - 1))


def compose(outer: Monotone, inner: Monotone) -> Monotone:
    """Return outer after inner as a tuple of values."""
    return tuple(outer[v] for v in inner)


def identity(n: int) -> Monotone:
    return tuple(range(n + 1))


def coface(n: int, i: int) -> Monotone:
    """The elementary face map [n-1] -> [n] skipping i."""
    return tuple(v for v in range(n + 1) if v != i)


def codegeneracy(n: int, j: int) -> Monotone:
    """The elementary degeneracy map [n+1] -> [n] hitting j twice."""
    return tuple(v if v <= j else v - 1 for v in range(n + 2))


def factor(values: Monotone) -> Tuple[Monotone, Monotone]:
    """Split a monotone map into (surjection, injection) with values = inj o surj."""
    image = sorted(set(values))
    position = {v: p for p, v in enumerate(image)}
    return tuple(position[v] for v in values), tuple(image)


def is_surjection(values: Monotone, target_dim: int) -> bool:
    return set(values) == set(range(target_dim + 1))


def surjections(source_dim: int, target_dim: int) -> Iterator[Monotone]:
    """All monotone surjections [source_dim] -> [target_dim]."""
    if target_dim > source_dim or target_dim < 0:
        return
    # choose which of the source_dim gaps are jumps
    for jumps in combinations(range(source_dim), target_dim):
        jump_set = set(jumps)
        level = 0
        values = [0]
        for gap in range(source_dim):
            if gap in jump_set:
                level += 1
            values.append(level)
        yield tuple(values)


def monotone_maps(source_dim: int, target_dim: int) -> Iterator[Monotone]:
    """All monotone maps [source_dim] -> [target_dim] in lexicographic order."""

    def extend(prefix: Tuple[int, ...]) -> Iterator[Monotone]:
        if len(prefix) == source_dim + 1:
            yield prefix
            return
        start = prefix[-1] if prefix else 0
        for v in range(start, target_dim + 1):
            yield from extend(prefix + (v,))

    yield from extend(())


@dataclass(frozen=True)
class SimplexOp:
    """A monotone map [source_dim] -> [target_dim] in normal form."""

    source_dim: int
    target_dim: int
    values: Monotone

    def __post_init__(self):
        if len(self.values) != self.source_dim + 1:
            raise InvalidSimplicialDataError(
                "Monotone map has the wrong length",
                {"source_dim": self.source_dim, "values": list(self.values)},
            )
        if not is_monotone(self.values):
            raise InvalidSimplicialDataError("Map is not monotone", {"values": list(self.values)})
        if self.values and (self.values[0] < 0 or self.values[-1] > self.target_dim):
            raise InvalidSimplicialDataError(
                "Map leaves its target ordinal",
                {"target_dim": self.target_dim, "values": list(self.values)},
            )

    @classmethod
    def identity(cls, n: int) -> "SimplexOp":
        return cls(n, n, identity(n))

    @classmethod
    def from_words(cls, degeneracy_word: Sequence[int], face_word: Sequence[int], source_dim: int) -> "SimplexOp":
        """Rebuild a map from its degeneracy word and face word.

        The degeneracy word lists the indices j with value(j) == value(j + 1);
        the face word lists the indices of the target missed by the map.
        """
        repeats = set(degeneracy_word)
        if any(j < 0 or j >= source_dim for j in repeats):
            raise InvalidSimplicialDataError(
                "Degeneracy index out of range", {"degeneracy_word": list(degeneracy_word)}
            )
        middle = source_dim - len(repeats)
        surjection = []
        level = 0
        for t in range(source_dim + 1):
            if t > 0 and (t - 1) not in repeats:
                level += 1
            surjection.append(level)
        target_dim = middle + len(set(face_word))
        injection = [v for v in range(target_dim + 1) if v not in set(face_word)]
        if len(injection) != middle + 1:
            raise InvalidSimplicialDataError("Face word does not match the degeneracy word")
        return cls(source_dim, target_dim, tuple(injection[v] for v in surjection))

    @property
    def degeneracy_word(self) -> Tuple[int, ...]:
        """Indices j with values[j] == values[j + 1], in descending order."""
        return tuple(
            j for j in range(self.source_dim - 1, -1, -1) if self.values[j] == self.values[j + 1]
        )

    @property
    def face_word(self) -> Tuple[int, ...]:
        """Target indices not hit by the map, in descending order."""
        hit = set(self.values)
        return tuple(v for v in range(self.target_dim, -1, -1) if v not in hit)

    def factor(self) -> Tuple["SimplexOp", "SimplexOp"]:
        surjection, injection = factor(self.values)
        middle = len(injection) - 1
        return (
            SimplexOp(self.source_dim, middle, surjection),
            SimplexOp(middle, self.target_dim, injection),
        )

    def compose(self, inner: "SimplexOp") -> "SimplexOp":
        """Return self after inner."""
        if inner.target_dim != self.source_dim:
            raise InvalidSimplicialDataError(
                "Maps are not composable",
                {"inner_target": inner.target_dim, "outer_source": self.source_dim},
            )
        return SimplexOp(inner.source_dim, self.target_dim, compose(self.values, inner.values))

    @property
    def is_identity(self) -> bool:
        return self.source_dim == self.target_dim and self.values == identity(self.source_dim)

    @property
    def is_injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    @property
    def is_surjective(self) -> bool:
        return is_surjection(self.values, self.target_dim)
