"""Discrete operads: the built-in Comm, Ass, AssInv and Triv, and JSON tables."""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Dict, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from src.app.core.exceptions import OperadAxiomError

logger = logging.getLogger(__name__)

Op = Hashable
Perm = Tuple[int, ...]
Signature = Tuple[Tuple[str, ...], str]

DEFAULT_COLOR = "x"


def compose_perms(outer: Perm, inner: Perm) -> Perm:
    """Return outer after inner: a -> outer[inner[a]]."""
    return tuple(outer[b] for b in inner)


def invert_perm(perm: Perm) -> Perm:
    result = [0] * len(perm)
    for a, b in enumerate(perm):
        result[b] = a
    return tuple(result)


def sorting_perm(keys: Sequence) -> Perm:
    """The permutation sending position a to the rank of keys[a]."""
    order = sorted(range(len(keys)), key=lambda a: keys[a])
    return invert_perm(tuple(order))


def block_permutation(sigma: Perm, slot: int, q: int) -> Perm:
    """Where the inputs of f o_slot g go inside (sigma f) o_sigma[slot] g, with g of arity q."""
    target_slot = sigma[slot]

    def place(letter: int) -> int:
        image = sigma[letter]
        return image if image < target_slot else image + q - 1

    result = [place(a) for a in range(slot)]
    result += [target_slot + c for c in range(q)]
    result += [place(b) for b in range(slot + 1, len(sigma))]
    return tuple(result)


def inner_permutation(p: int, slot: int, tau: Perm) -> Perm:
    """Where the inputs of f o_slot g go inside f o_slot (tau g), with f of arity p."""
    q = len(tau)
    return tuple(range(slot)) + tuple(slot + t for t in tau) + tuple(range(slot + q, p + q - 1))


class DiscreteOperad(ABC):
    """A colored operad with finite sets of operations.

    Partial composition ``compose(f, i, g)`` plugs g into input i of f; the
    inputs of g take positions i, ..., i + arity(g) - 1. ``act(f, perm)`` moves
    input a of f to position ``perm[a]``.
    """

    name: str = "operad"
    colors: Tuple[str, ...] = (DEFAULT_COLOR,)

    @abstractmethod
    def operations(self, inputs: Tuple[str, ...], output: str) -> Tuple[Op, ...]:
        """All operations with the given input colors and output color."""

    @abstractmethod
    def signature(self, op: Op) -> Signature:
        """Input colors and output color of an operation."""

    @abstractmethod
    def identity(self, color: str) -> Op:
        """The unary unit of a color."""

    @abstractmethod
    def _compose(self, outer: Op, slot: int, inner: Op) -> Op:
        """Partial composition on checked arguments."""

    @abstractmethod
    def _act(self, op: Op, perm: Perm) -> Op:
        """Symmetric group action on checked arguments."""

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name})"

    def arity(self, op: Op) -> int:
        return len(self.signature(op)[0])

    def label(self, op: Op) -> str:
        return str(op)

    def compose(self, outer: Op, slot: int, inner: Op) -> Op:
        inputs, _ = self.signature(outer)
        if not 0 <= slot < len(inputs):
            raise OperadAxiomError(f"{self.label(outer)} has no input {slot}", {"operad": self.name})
        if self.signature(inner)[1] != inputs[slot]:
            raise OperadAxiomError(
                f"Cannot plug {self.label(inner)} into input {slot} of {self.label(outer)}: colors differ",
                {"operad": self.name},
            )
        return self._compose(outer, slot, inner)

    def act(self, op: Op, perm: Perm) -> Op:
        perm = tuple(perm)
        if sorted(perm) != list(range(self.arity(op))):
            raise OperadAxiomError(f"{perm} is not a permutation of the inputs of {self.label(op)}")
        if perm == tuple(range(len(perm))):
            return op
        return self._act(op, perm)

    def multi_compose(self, outer: Op, inners: Sequence[Op]) -> Op:
        """outer o (inners[0], ..., inners[-1]); inputs are concatenated in order."""
        if len(inners) != self.arity(outer):
            raise OperadAxiomError(f"{self.label(outer)} needs {self.arity(outer)} operations to plug in")
        result = outer
        for slot in range(len(inners) - 1, -1, -1):
            result = self.compose(result, slot, inners[slot])
        return result

    def nullary(self, color: str) -> Tuple[Op, ...]:
        return self.operations((), color)

    @property
    def is_unital(self) -> bool:
        return all(len(self.nullary(c)) == 1 for c in self.colors)

    def unit(self, color: str) -> Op:
        """The unique nullary operation of a color.

        Raises:
            OperadAxiomError: if the nullary set is not a singleton
        """
        found = self.nullary(color)
        if len(found) != 1:
            raise OperadAxiomError(
                f"Operad {self.name} fails unitality: color {color} has {len(found)} nullary operations",
                {"operad": self.name, "color": color, "nullary": len(found)},
            )
        return found[0]

    def color_tuples(self, arity: int) -> Iterator[Tuple[str, ...]]:
        return product(self.colors, repeat=arity)

    def all_operations(self, max_arity: int) -> Iterator[Op]:
        for n in range(max_arity + 1):
            for inputs in self.color_tuples(n):
                for out in self.colors:
                    yield from self.operations(tuple(inputs), out)

    def profile(self, max_arity: int) -> Dict[int, int]:
        """Number of operations per arity."""
        counts = {n: 0 for n in range(max_arity + 1)}
        for op in self.all_operations(max_arity):
            counts[self.arity(op)] += 1
        return counts

    def unary_operations(self, color: str) -> Tuple[Op, ...]:
        return self.operations((color,), color)


class SingleColoredOperad(DiscreteOperad):
    """Operads with one color; operations are described per arity."""

    @abstractmethod
    def operations_of_arity(self, n: int) -> Tuple[Op, ...]:
        """All operations of arity n."""

    @abstractmethod
    def op_arity(self, op: Op) -> int:
        """Arity of an operation."""

    def operations(self, inputs: Tuple[str, ...], output: str) -> Tuple[Op, ...]:
        if output != DEFAULT_COLOR or any(c != DEFAULT_COLOR for c in inputs):
            return ()
        return self.operations_of_arity(len(inputs))

    def signature(self, op: Op) -> Signature:
        return (DEFAULT_COLOR,) * self.op_arity(op), DEFAULT_COLOR

    def arity(self, op: Op) -> int:
        return self.op_arity(op)


class CommOperad(SingleColoredOperad):
    """One operation in every arity."""

    name = "Comm"

    def operations_of_arity(self, n: int) -> Tuple[Op, ...]:
        return (("comm", n),)

    def op_arity(self, op: Op) -> int:
        return op[1]

    def identity(self, color: str) -> Op:
        return ("comm", 1)

    def label(self, op: Op) -> str:
        return f"*{op[1]}"

    def _compose(self, outer: Op, slot: int, inner: Op) -> Op:
        return ("comm", outer[1] + inner[1] - 1)

    def _act(self, op: Op, perm: Perm) -> Op:
        return op


class AssOperad(SingleColoredOperad):
    """Linear orders of the inputs; an operation is the word of its inputs."""

    name = "Ass"

    def operations_of_arity(self, n: int) -> Tuple[Op, ...]:
        return tuple(permutations(range(n)))

    def op_arity(self, op: Op) -> int:
        return len(op)

    def identity(self, color: str) -> Op:
        return (0,)

    def label(self, op: Op) -> str:
        return "(" + " ".join(f"x{a}" for a in op) + ")"

    def _compose(self, outer: Op, slot: int, inner: Op) -> Op:
        q = len(inner)
        word: List[int] = []
        for a in outer:
            if a == slot:
                word.extend(slot + c for c in inner)
            else:
                word.append(a if a < slot else a + q - 1)
        return tuple(word)

    def _act(self, op: Op, perm: Perm) -> Op:
        return tuple(perm[a] for a in op)


class AssInvOperad(SingleColoredOperad):
    """Signed words: a linear order of the inputs and a sign on each input.

    Generated by the product mu, the involution tau and the unit e subject to
    tau o tau = id and tau o mu(a, b) = mu(tau b, tau a). A negative letter
    reverses the word plugged into it and flips its signs.
    """

    name = "AssInv"

    def operations_of_arity(self, n: int) -> Tuple[Op, ...]:
        return tuple(
            tuple(zip(order, signs)) for order in permutations(range(n)) for signs in product((1, -1), repeat=n)
        )

    def op_arity(self, op: Op) -> int:
        return len(op)

    def identity(self, color: str) -> Op:
        return ((0, 1),)

    def label(self, op: Op) -> str:
        return "(" + " ".join(f"x{a}" if s > 0 else f"~x{a}" for a, s in op) + ")"

    def _compose(self, outer: Op, slot: int, inner: Op) -> Op:
        q = len(inner)
        word: List[Tuple[int, int]] = []
        for a, sign in outer:
            if a == slot:
                plugged = [(slot + c, s) for c, s in inner]
                if sign < 0:
                    plugged = [(c, -s) for c, s in reversed(plugged)]
                word.extend(plugged)
            else:
                word.append((a if a < slot else a + q - 1, sign))
        return tuple(word)

    def _act(self, op: Op, perm: Perm) -> Op:
        return tuple((perm[a], s) for a, s in op)

    @property
    def mu(self) -> Op:
        return ((0, 1), (1, 1))

    @property
    def tau(self) -> Op:
        return ((0, -1),)

    @property
    def e(self) -> Op:
        return ()


class TrivOperad(SingleColoredOperad):
    """Only the unit and the identity."""

    name = "Triv"

    def operations_of_arity(self, n: int) -> Tuple[Op, ...]:
        return (("triv", n),) if n <= 1 else ()

    def op_arity(self, op: Op) -> int:
        return op[1]

    def identity(self, color: str) -> Op:
        return ("triv", 1)

    def _compose(self, outer: Op, slot: int, inner: Op) -> Op:
        return ("triv", outer[1] + inner[1] - 1)

    def _act(self, op: Op, perm: Perm) -> Op:
        return op


class TabulatedOperad(DiscreteOperad):
    """An operad given by explicit composition and action tables.

    Args:
        name: display name
        colors: the colors
        signatures: input colors and output color of every named operation
        identities: the unary unit of every color
        composition: ``{(outer, slot, inner): result}``; entries involving a unit may be omitted
        action: ``{(op, perm): result}``; identity permutations may be omitted
    """

    def __init__(
        self,
        name: str,
        colors: Sequence[str],
        signatures: Mapping[str, Signature],
        identities: Mapping[str, str],
        composition: Mapping[Tuple[str, int, str], str],
        action: Optional[Mapping[Tuple[str, Perm], str]] = None,
    ):
        self.name = name
        self.colors = tuple(colors)
        self.signatures: Dict[str, Signature] = {k: (tuple(v[0]), v[1]) for k, v in signatures.items()}
        self.identities = dict(identities)
        self.composition = dict(composition)
        self.action = {(op, tuple(perm)): res for (op, perm), res in (action or {}).items()}
        self._by_signature: Dict[Signature, List[str]] = {}
        for op, sig in self.signatures.items():
            self._by_signature.setdefault(sig, []).append(op)
        for color in self.colors:
            ident = self.identities.get(color)
            if ident is None or self.signatures.get(ident) != ((color,), color):
                raise OperadAxiomError(f"Color {color} has no unary identity", {"operad": name, "color": color})

    def operations(self, inputs: Tuple[str, ...], output: str) -> Tuple[Op, ...]:
        return tuple(self._by_signature.get((tuple(inputs), output), ()))

    def signature(self, op: Op) -> Signature:
        try:
            return self.signatures[op]
        except KeyError:
            raise OperadAxiomError(f"Unknown operation {op}", {"operad": self.name}) from None

    def identity(self, color: str) -> Op:
        return self.identities[color]

    def color_tuples(self, arity: int) -> Iterator[Tuple[str, ...]]:
        seen = sorted({sig[0] for sig in self.signatures.values() if len(sig[0]) == arity})
        return iter(seen)

    def _compose(self, outer: Op, slot: int, inner: Op) -> Op:
        if outer == self.identities.get(self.signatures[outer][1]):
            return inner
        if inner == self.identities.get(self.signatures[inner][1]):
            return outer
        try:
            return self.composition[(outer, slot, inner)]
        except KeyError:
            raise OperadAxiomError(
                f"Composition table of {self.name} has no entry for {outer} o_{slot} {inner}",
                {"operad": self.name, "outer": outer, "slot": slot, "inner": inner},
            ) from None

    def _act(self, op: Op, perm: Perm) -> Op:
        try:
            return self.action[(op, perm)]
        except KeyError:
            raise OperadAxiomError(
                f"Action table of {self.name} has no entry for {op} acted on by {list(perm)}",
                {"operad": self.name, "op": op, "perm": list(perm)},
            ) from None


BUILTIN_OPERADS = {
    "Comm": CommOperad,
    "Ass": AssOperad,
    "AssInv": AssInvOperad,
    "Triv": TrivOperad,
}


def builtin_operad(name: str) -> DiscreteOperad:
    """Return one of the built-in operads by name.

    Raises:
        OperadAxiomError: for unknown names
    """
    try:
        return BUILTIN_OPERADS[name]()
    except KeyError:
        raise OperadAxiomError(
            f"Unknown operad {name}", {"known": sorted(BUILTIN_OPERADS)}
        ) from None


@dataclass
class AxiomReport:
    operad: str
    bound: int
    checked: int = 0
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def note(self, holds: bool, message: str) -> None:
        self.checked += 1
        if not holds and len(self.violations) < 50:
            self.violations.append(message)


def _adjacent_transpositions(p: int) -> Iterator[Perm]:
    for a in range(p - 1):
        t = list(range(p))
        t[a], t[a + 1] = a + 1, a
        yield tuple(t)


def check_operad_axioms(operad: DiscreteOperad, bound: int) -> AxiomReport:
    """Exhaustively check unit, associativity and equivariance up to an arity bound.

    Only composites whose arity stays within ``bound`` are examined.
    """
    report = AxiomReport(operad.name, bound)
    ops = list(operad.all_operations(bound))
    by_output: Dict[str, List[Op]] = {}
    for op in ops:
        by_output.setdefault(operad.signature(op)[1], []).append(op)
    logger.debug(f"Checking axioms of {operad.name} on {len(ops)} operations up to arity {bound}")

    def pluggable(f: Op, slot: int) -> List[Op]:
        return by_output.get(operad.signature(f)[0][slot], [])

    for f in ops:
        inputs, out = operad.signature(f)
        p = len(inputs)
        report.note(operad.compose(operad.identity(out), 0, f) == f, f"left unit fails at {operad.label(f)}")
        for i, color in enumerate(inputs):
            report.note(operad.compose(f, i, operad.identity(color)) == f, f"right unit fails at {operad.label(f)}, {i}")

        for s in permutations(range(p)):
            moved = operad.act(f, s)
            for t in _adjacent_transpositions(p):
                report.note(
                    operad.act(moved, t) == operad.act(f, compose_perms(t, s)),
                    f"action is not associative at {operad.label(f)}",
                )

        for i in range(p):
            for g in pluggable(f, i):
                q = operad.arity(g)
                if p + q - 1 > bound:
                    continue
                fg = operad.compose(f, i, g)
                for sigma in permutations(range(p)):
                    report.note(
                        operad.compose(operad.act(f, sigma), sigma[i], g)
                        == operad.act(fg, block_permutation(sigma, i, q)),
                        f"equivariance fails at {operad.label(f)} o_{i} {operad.label(g)} under {sigma}",
                    )
                for tau in permutations(range(q)):
                    report.note(
                        operad.compose(f, i, operad.act(g, tau)) == operad.act(fg, inner_permutation(p, i, tau)),
                        f"inner equivariance fails at {operad.label(f)} o_{i} {operad.label(g)} under {tau}",
                    )
                for j in range(q):
                    for h in pluggable(g, j):
                        r = operad.arity(h)
                        if p + q + r - 2 > bound:
                            continue
                        report.note(
                            operad.compose(fg, i + j, h) == operad.compose(f, i, operad.compose(g, j, h)),
                            f"sequential associativity fails at ({operad.label(f)}, {i}, {operad.label(g)}, {j})",
                        )
                for k in range(i + 1, p):
                    for h in pluggable(f, k):
                        r = operad.arity(h)
                        if p + q + r - 2 > bound:
                            continue
                        report.note(
                            operad.compose(fg, k + q - 1, h) == operad.compose(operad.compose(f, k, h), i, g),
                            f"parallel associativity fails at ({operad.label(f)}, {i}, {k})",
                        )
    if report.ok:
        logger.info(f"{operad.name}: {report.checked} axiom instances hold up to arity {bound}")
    else:
        logger.warning(f"{operad.name}: {len(report.violations)} axiom violations, first: {report.violations[0]}")
    return report


def presentation_closure(
    operad: DiscreteOperad, generators: Iterable[Op], max_arity: int
) -> Dict[int, Set[Op]]:
    """Close a set of operations under partial composition and the symmetric action.

    Composites of arity above ``max_arity`` are discarded. Identities are added.
    """
    found: Set[Op] = set(generators) | {operad.identity(c) for c in operad.colors}
    frontier = set(found)
    while frontier:
        fresh: List[Op] = []

        def add(op: Op) -> None:
            if op not in found:
                found.add(op)
                fresh.append(op)

        for f in frontier:
            for perm in permutations(range(operad.arity(f))):
                add(operad.act(f, perm))
        known = list(found)
        for f in known:
            inputs = operad.signature(f)[0]
            for g in known:
                if f not in frontier and g not in frontier:
                    continue
                if len(inputs) + operad.arity(g) - 1 > max_arity:
                    continue
                out = operad.signature(g)[1]
                for i, color in enumerate(inputs):
                    if color == out:
                        add(operad.compose(f, i, g))
        frontier = set(fresh)
    closure: Dict[int, Set[Op]] = {n: set() for n in range(max_arity + 1)}
    for op in found:
        if operad.arity(op) <= max_arity:
            closure[operad.arity(op)].add(op)
    return closure
