"""Morphisms of pointed finite sets <m> -> <n>."""
from dataclasses import dataclass
from enum import Enum
from itertools import permutations, product
from typing import FrozenSet, Iterator, Optional, Sequence, Tuple

from src.app.core.exceptions import InvalidSimplicialDataError


class MapKind(str, Enum):
    INERT = "inert"
    ACTIVE = "active"
    SEMI_INERT = "semi_inert"
    ATOMIC = "atomic"


@dataclass(frozen=True)
class PointedMap:
    """A basepoint preserving map <source> -> <target>.

    ``values[i - 1]`` is the image of i for 1 <= i <= source; 0 goes to 0.
    """

    source: int
    target: int
    values: Tuple[int, ...]

    def __post_init__(self):
        if len(self.values) != self.source:
            raise InvalidSimplicialDataError(
                f"Pointed map from <{self.source}> needs {self.source} values", {"values": list(self.values)}
            )
        if any(v < 0 or v > self.target for v in self.values):
            raise InvalidSimplicialDataError(
                f"Values must lie in <{self.target}>", {"values": list(self.values)}
            )

    def __call__(self, i: int) -> int:
        return 0 if i == 0 else self.values[i - 1]

    def __str__(self) -> str:
        return f"<{self.source}>-><{self.target}>{list(self.values)}"

    @classmethod
    def identity(cls, n: int) -> "PointedMap":
        return cls(n, n, tuple(range(1, n + 1)))

    @classmethod
    def inclusion(cls, n: int, new: Optional[int] = None) -> "PointedMap":
        """The order preserving inclusion <n> -> <n+1> missing ``new`` (default n + 1)."""
        new = n + 1 if new is None else new
        return cls(n, n + 1, tuple(i if i < new else i + 1 for i in range(1, n + 1)))

    @classmethod
    def from_sequence(cls, target: int, values: Sequence[int]) -> "PointedMap":
        return cls(len(values), target, tuple(values))

    def preimage(self, j: int) -> Tuple[int, ...]:
        """Elements of <source> over j, in increasing order; 0 is listed for j = 0."""
        found = tuple(i for i in range(1, self.source + 1) if self.values[i - 1] == j)
        return ((0,) + found) if j == 0 else found

    def compose(self, inner: "PointedMap") -> "PointedMap":
        """Return self after inner."""
        if inner.target != self.source:
            raise InvalidSimplicialDataError(f"Cannot compose {self} after {inner}")
        return PointedMap(inner.source, self.target, tuple(self(v) for v in inner.values))

    @property
    def is_injective(self) -> bool:
        hit = [v for v in self.values if v != 0]
        return len(hit) == len(set(hit)) and len(hit) == self.source

    @property
    def is_active(self) -> bool:
        return all(v != 0 for v in self.values)

    @property
    def is_inert(self) -> bool:
        return all(len(self.preimage(j)) == 1 for j in range(1, self.target + 1))

    @property
    def is_semi_inert(self) -> bool:
        return all(len(self.preimage(j)) <= 1 for j in range(1, self.target + 1))

    @property
    def is_atomic(self) -> bool:
        return self.target == self.source + 1 and self.is_active and self.is_injective

    @property
    def missing(self) -> Tuple[int, ...]:
        """Non-basepoint elements of <target> outside the image."""
        return tuple(j for j in range(1, self.target + 1) if not self.preimage(j))


def classify(alpha: PointedMap) -> FrozenSet[MapKind]:
    """Every kind the map belongs to; the empty set means none of them."""
    kinds = set()
    if alpha.is_inert:
        kinds.add(MapKind.INERT)
    if alpha.is_active:
        kinds.add(MapKind.ACTIVE)
    if alpha.is_semi_inert:
        kinds.add(MapKind.SEMI_INERT)
    if alpha.is_atomic:
        kinds.add(MapKind.ATOMIC)
    return frozenset(kinds)


def all_maps(m: int, n: int) -> Iterator[PointedMap]:
    for values in product(range(n + 1), repeat=m):
        yield PointedMap(m, n, values)


def active_maps(m: int, n: int) -> Iterator[PointedMap]:
    for values in product(range(1, n + 1), repeat=m):
        yield PointedMap(m, n, values)


def bijections(n: int) -> Iterator[PointedMap]:
    for values in permutations(range(1, n + 1)):
        yield PointedMap(n, n, values)


def has_retraction(alpha: PointedMap) -> bool:
    """Whether some pointed rho satisfies rho o alpha = id."""
    return any(rho.compose(alpha) == PointedMap.identity(alpha.source) for rho in all_maps(alpha.target, alpha.source))
