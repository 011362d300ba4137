"""Bounded search for anodyne decompositions of an inclusion.

The search works inside the target: a state is the set of target simplices
already present plus the marked edges reached so far. A move glues one
generator, so every state is a literal simplicial subset of the target and the
certificate can name new simplices by their target ids.
"""
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from src.app.core.config import Settings, settings as default_settings
from src.app.services.anodyne import (
    AnodyneClass,
    AttachmentCertificate,
    AttachmentStep,
    CertificateVerdict,
    GeneratorKind,
    GeneratorSpec,
    LiftingWitness,
    MarkedMap,
    generator_map,
    lifting_witness,
    verify_certificate,
)
from src.app.services.constructions import flat, simplex_id
from src.app.services.simplex_ops import identity
from src.app.services.simplicial_set import SimplexRef, is_degenerate

logger = logging.getLogger(__name__)

State = Tuple[FrozenSet[str], FrozenSet[str]]


@dataclass(frozen=True)
class Move:
    """Glue a generator along the simplex ``top``; ``new`` are the simplices it adds."""

    kind: GeneratorKind
    top: str
    k: int
    new: Tuple[str, ...]
    marks: Tuple[str, ...] = ()


@dataclass
class SearchOutcome:
    """Result of a decomposition search.

    ``status`` is ``found``, ``none`` (the state space is exhausted) or
    ``budget_exhausted``.
    """

    status: str
    target_class: AnodyneClass
    certificate: Optional[AttachmentCertificate] = None
    verdict: Optional[CertificateVerdict] = None
    nodes_used: int = 0
    step_budget: int = 0
    node_budget: int = 0
    witness: Optional[LiftingWitness] = None

    @property
    def found(self) -> bool:
        return self.status == "found"


class _Exhausted(Exception):
    pass


class NodeBudget:
    """Search nodes spent by every searcher of one run, behind a lock."""

    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0
        self.cancelled = threading.Event()
        self._lock = threading.Lock()

    def spend(self) -> None:
        with self._lock:
            if self.used >= self.limit:
                raise _Exhausted()
            self.used += 1
        if self.cancelled.is_set():
            raise _Exhausted()


class DecompositionSearch:
    """Depth first search over generator attachments with a memo of dead states."""

    def __init__(
        self,
        inclusion: MarkedMap,
        target_class: AnodyneClass,
        step_budget: int,
        node_budget: int,
        budget: Optional[NodeBudget] = None,
    ):
        self.inclusion = inclusion.require_mono()
        self.target_class = target_class
        self.inner = target_class == AnodyneClass.INNER
        self.target = flat(inclusion.target) if self.inner else inclusion.target
        self.step_budget = step_budget
        self.node_budget = node_budget
        self.budget = budget or NodeBudget(node_budget)
        self.dead: Set[State] = set()
        self._stage_names: Dict[str, str] = {}
        for s, (_, t) in inclusion.assignment.items():
            self._stage_names[t] = s
        self._source_ids = set(inclusion.source.ids())
        target = self.target
        self._cofaces: Dict[str, List[Tuple[str, int]]] = {x: [] for x in target.ids()}
        for x in target.ids():
            for i, (eta, y) in enumerate(target.faces(x)):
                if eta == identity(target.dim(y)):
                    self._cofaces[y].append((x, i))
        self._order = sorted(target.ids(), key=target.sort_key)
        self._triangles_over: Dict[str, List[str]] = {e: [] for e in target.edges()}
        for y in target.ids(2):
            eta, e = target.face(y, 1)
            if not is_degenerate((eta, e)):
                self._triangles_over[e].append(y)

    @property
    def nodes(self) -> int:
        return self.budget.used

    # states

    def initial_state(self) -> State:
        present = frozenset(self.inclusion.image_ids())
        marked: Set[str] = set()
        if not self.inner:
            for e in self.inclusion.source.marked:
                eta, t = self.inclusion.assignment[e]
                if not is_degenerate((eta, t)):
                    marked.add(t)
        return present, frozenset(marked)

    def is_complete(self, state: State) -> bool:
        present, marked = state
        if len(present) != len(self.target):
            return False
        return self.inner or marked == self.target.marked

    def _face_ok(self, present: FrozenSet[str], x: str, skip: int) -> bool:
        for i, (_, y) in enumerate(self.target.faces(x)):
            if i != skip and y not in present:
                return False
        return True

    def _edge_marked(self, marked: FrozenSet[str], ref: SimplexRef) -> bool:
        return is_degenerate(ref) or ref[1] in marked

    def _edge_of(self, x: str, a: int, b: int) -> SimplexRef:
        return self.target.face_along(x, (a, b))

    def moves(self, state: State) -> List[Move]:
        """Legal moves in deterministic order: (dimension, labels) of the top simplex, then k."""
        present, marked = state
        target = self.target
        result: List[Move] = []
        for x in self._order:
            if x in present:
                continue
            n = target.dim(x)
            if self.target_class == AnodyneClass.MONO:
                if self._face_ok(present, x, -1):
                    result.append(Move(GeneratorKind.CELL_FLAT, x, 0, (x,)))
                continue
            if n == 0:
                continue
            for k in range(n + 1):
                eta, face = target.face(x, k)
                if eta != identity(n - 1) or face in present or not self._face_ok(present, x, k):
                    continue
                if any(y == face for i, (_, y) in enumerate(target.faces(x)) if i != k):
                    continue
                move = self._horn_move(x, n, k, face, marked)
                if move is not None:
                    result.append(move)
        if self.target_class == AnodyneClass.MONO:
            for e in sorted(target.marked - marked, key=target.sort_key):
                if e in present:
                    result.append(Move(GeneratorKind.EDGE_MARKING, e, 0, (), (e,)))
        return result

    def _horn_move(self, x: str, n: int, k: int, face: str, marked: FrozenSet[str]) -> Optional[Move]:
        target = self.target
        if 0 < k < n:
            kind = GeneratorKind.INNER_HORN if self.inner else GeneratorKind.INNER_HORN_FLAT
            return Move(kind, x, k, (x, face))
        if self.inner:
            return None
        left_ok = self.target_class in (AnodyneClass.MARKED, AnodyneClass.LEFT_MARKED)
        right_ok = self.target_class in (AnodyneClass.MARKED, AnodyneClass.RIGHT_MARKED)
        if k == 0 and left_ok:
            kind, edge = GeneratorKind.LEFT_HORN_MARKED, (0, 1)
        elif k == n and right_ok:
            kind, edge = GeneratorKind.RIGHT_HORN_MARKED, (n - 1, n)
        else:
            return None
        ref = self._edge_of(x, *edge)
        if n == 1:
            if x not in target.marked:
                return None
            return Move(kind, x, k, (x, face), (x,))
        if not self._edge_marked(marked, ref):
            return None
        return Move(kind, x, k, (x, face))

    def triangle_marks(self, state: State) -> List[Tuple[str, str]]:
        """(triangle, edge) pairs whose long edge can be marked right now."""
        if self.target_class in (AnodyneClass.INNER, AnodyneClass.MONO):
            return []
        present, marked = state
        found = []
        for e in sorted(self.target.marked - marked, key=self.target.sort_key):
            if e not in present:
                continue
            for y in self._triangles_over[e]:
                if y not in present:
                    continue
                first, second = self.target.face(y, 2), self.target.face(y, 0)
                if self._edge_marked(marked, first) and self._edge_marked(marked, second):
                    found.append((y, e))
                    break
        return found

    def is_dead(self, state: State) -> bool:
        """Cheap dead ends: markings no triangle can reach, simplices nothing can add."""
        present, marked = state
        if self.target_class not in (AnodyneClass.INNER, AnodyneClass.MONO):
            for e in self.target.marked - marked:
                if e in present and not self._triangles_over[e]:
                    return True
        if self.target_class == AnodyneClass.MONO:
            return False
        for y in self.target.ids():
            if y in present or not self._face_ok(present, y, -1):
                continue
            if not any(c not in present for c, _ in self._cofaces[y]):
                return True
        return False

    # search

    def _apply(self, state: State, move: Move) -> State:
        present, marked = state
        return present | set(move.new), marked | set(move.marks)

    def _saturate(self, state: State, path: List[Move]) -> State:
        while True:
            pending = self.triangle_marks(state)
            if not pending:
                return state
            for y, e in pending:
                move = Move(GeneratorKind.MARKED_TRIANGLE, y, 1, (), (e,))
                path.append(move)
                state = self._apply(state, move)

    def run(self, start: Optional[State] = None, prefix: Optional[List[Move]] = None) -> Optional[List[Move]]:
        path = list(prefix or [])
        state = self._saturate(start or self.initial_state(), path)
        return self._dfs(state, path)

    def _dfs(self, state: State, path: List[Move]) -> Optional[List[Move]]:
        self.budget.spend()
        if len(path) > self.step_budget:
            raise _Exhausted()
        if self.is_complete(state):
            return path
        if state in self.dead or self.is_dead(state):
            self.dead.add(state)
            return None
        for move in self.moves(state):
            extended = path + [move]
            following = self._saturate(self._apply(state, move), extended)
            found = self._dfs(following, extended)
            if found is not None:
                return found
        self.dead.add(state)
        return None

    # certificates

    def stage_name(self, tid: str) -> str:
        name = self._stage_names.get(tid)
        if name is None:
            name = tid
            while name in self._source_ids or name in self._stage_names.values():
                name += "#"
            self._stage_names[tid] = name
        return name

    def _stage_ref(self, ref: SimplexRef) -> SimplexRef:
        return (ref[0], self.stage_name(ref[1]))

    def _step(self, move: Move) -> AttachmentStep:
        target = self.target
        x = move.top
        if move.kind == GeneratorKind.MARKED_TRIANGLE:
            spec = GeneratorSpec(move.kind, 2, 1)
        elif move.kind == GeneratorKind.EDGE_MARKING:
            spec = GeneratorSpec(move.kind, 1, 0)
        else:
            spec = GeneratorSpec(move.kind, target.dim(x), move.k)
        generator = generator_map(spec)
        attach: Dict[str, SimplexRef] = {}
        for s in generator.source.ids():
            theta = tuple(int(label) for label in generator.source.vertex_labels(s))
            attach[s] = self._stage_ref(target.face_along(x, theta))
        names: Dict[str, str] = {}
        if move.new:
            n = target.dim(x)
            labels = [str(v) for v in range(n + 1)]
            names[simplex_id(labels)] = self.stage_name(x)
            if len(move.new) > 1:
                names[simplex_id(labels[: move.k] + labels[move.k + 1:])] = self.stage_name(move.new[1])
        return AttachmentStep(spec, attach, names)

    def certificate(self, path: List[Move]) -> AttachmentCertificate:
        return AttachmentCertificate(self.inclusion, self.target_class, [self._step(m) for m in path])


def search_decomposition(
    inclusion: MarkedMap,
    target_class: AnodyneClass,
    step_budget: Optional[int] = None,
    node_budget: Optional[int] = None,
    config: Optional[Settings] = None,
    with_witness: bool = True,
) -> SearchOutcome:
    """Search for an attachment certificate of the given class.

    Args:
        inclusion: the monomorphism to decompose
        target_class: the anodyne class the certificate must belong to
        step_budget: maximal number of attachments
        node_budget: maximal number of search nodes
        config: settings overriding the module defaults
        with_witness: look for a lifting witness when an inner search fails

    Returns:
        SearchOutcome: a verified certificate, a definitive negative, or a
        report that the budget ran out

    Raises:
        CertificateError: if a found certificate fails replay
    """
    config = config or default_settings
    step_budget = config.SEARCH_STEP_BUDGET if step_budget is None else step_budget
    node_budget = config.SEARCH_NODE_BUDGET if node_budget is None else node_budget
    search = DecompositionSearch(inclusion, target_class, step_budget, node_budget)
    logger.info(f"Searching {target_class.value} decomposition of {inclusion.name}")
    try:
        path = _run(search, max(1, config.SSOK_THREADS))
    except _Exhausted:
        logger.info(f"Search for {inclusion.name} ran out of budget after {search.nodes} nodes")
        return SearchOutcome("budget_exhausted", target_class, nodes_used=search.nodes,
                             step_budget=step_budget, node_budget=node_budget)
    if path is None:
        witness = None
        if with_witness and target_class == AnodyneClass.INNER:
            witness = lifting_witness(inclusion)
        logger.info(f"No {target_class.value} decomposition of {inclusion.name}")
        return SearchOutcome("none", target_class, nodes_used=search.nodes,
                             step_budget=step_budget, node_budget=node_budget, witness=witness)
    certificate = search.certificate(path)
    verdict = verify_certificate(certificate)
    if not verdict.accepted:
        logger.error(f"Search produced a certificate that fails replay: {verdict.failures}")
        verdict.raise_for_failure()
    logger.info(f"Found {len(path)} step certificate for {inclusion.name} after {search.nodes} nodes")
    return SearchOutcome("found", target_class, certificate, verdict, search.nodes, step_budget, node_budget)


def _run(search: DecompositionSearch, threads: int) -> Optional[List[Move]]:
    if threads == 1:
        return search.run()
    # each first move gets its own searcher over the shared node budget
    prefix: List[Move] = []
    search.budget.spend()
    start = search._saturate(search.initial_state(), prefix)
    if search.is_complete(start):
        return prefix
    if search.is_dead(start):
        return None
    branches = search.moves(start)

    def explore(move: Move) -> Tuple[str, Optional[List[Move]]]:
        worker = DecompositionSearch(
            search.inclusion, search.target_class, search.step_budget, search.node_budget, search.budget
        )
        path = prefix + [move]
        state = worker._saturate(worker._apply(start, move), path)
        try:
            found = worker._dfs(state, path)
        except _Exhausted:
            return "budget_exhausted", None
        if found is None:
            return "none", None
        search.budget.cancelled.set()
        return "found", found

    with ThreadPoolExecutor(max_workers=threads) as pool:
        outcomes = list(pool.map(explore, branches))
    for status, found in outcomes:
        if status == "found":
            return found
    if any(status == "budget_exhausted" for status, _ in outcomes):
        raise _Exhausted()
    return None
