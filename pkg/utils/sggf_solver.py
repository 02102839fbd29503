import itertools
import logging
import os
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from utils.graph_core import GraphFormatError, InternalConsistencyError, MultiGraph, parse_graph_records

logger = logging.getLogger(__name__)

DEFAULT_ORACLE_MAX_EDGES = int(os.getenv("DECOMP_ORACLE_MAX_EDGES", "25"))
DEFAULT_VALIDATE_UP_TO = 6
DEFAULT_MAX_MATCHINGS = int(os.getenv("DECOMP_SGGF_MAX_MATCHINGS", "4096"))


class NotSmallGapError(ValueError):
    def __init__(self, members: Sequence[int]):
        self.kind = "not_small_gap"
        super().__init__(f"not_small_gap: {sorted(members)} has two consecutive missing values")


def is_small_gap(members: Iterable[int]) -> bool:
    """True iff every i between min and max has i or i+1 in the set (vacuous for the empty set)."""
    values = set(members)
    if not values:
        return True
    return all(i in values or i + 1 in values for i in range(min(values), max(values) + 1))


@dataclass(frozen=True)
class GapSet:
    members: Tuple[int, ...]

    @classmethod
    def of(cls, values: Iterable[int]) -> "GapSet":
        members = tuple(sorted(set(values)))
        if any(x < 0 for x in members):
            raise ValueError(f"gap sets hold non-negative integers, got {list(members)}")
        return cls(members)

    @property
    def is_small_gap(self) -> bool:
        return is_small_gap(self.members)

    def trimmed(self, degree: int) -> "GapSet":
        return GapSet(tuple(x for x in self.members if x <= degree))

    def runs(self) -> List[Tuple[int, int]]:
        """Maximal blocks of consecutive members as (low, high) pairs."""
        result: List[Tuple[int, int]] = []
        for x in self.members:
            if result and result[-1][1] == x - 1:
                result[-1] = (result[-1][0], x)
            else:
                result.append((x, x))
        return result

    def __contains__(self, value: int) -> bool:
        return value in self.members

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class SggfInstance:
    graph: MultiGraph
    sets: Tuple[GapSet, ...]

    def __post_init__(self):
        if len(self.sets) != self.graph.n:
            raise ValueError(f"{len(self.sets)} sets for {self.graph.n} vertices")
        for v, gap_set in enumerate(self.sets):
            if not len(gap_set):
                raise ValueError(f"vertex {v} has an empty set")

    def satisfied_by(self, selection: Iterable[int]) -> bool:
        counts = [0] * self.graph.n
        for i in selection:
            u, v = self.graph.edges[i]
            counts[u] += 1
            counts[v] += 1
        return all(counts[v] in self.sets[v] for v in range(self.graph.n))


def parse_sggf(text: str) -> SggfInstance:
    """
    Read an SGGF instance: a multigraph file plus `a <v> <i1> <i2> ...` set records.

    Args:
        text: File contents

    Returns:
        SggfInstance
    """
    extra = {"a": []}
    n, edges = parse_graph_records(text, allow_parallel=True, extra=extra)
    sets: Dict[int, GapSet] = {}
    for number, tokens in extra["a"]:
        try:
            values = [int(t) for t in tokens]
        except ValueError:
            raise GraphFormatError("malformed_line", "set record needs integers", number)
        if not values or not 0 <= values[0] < n:
            raise GraphFormatError("vertex_out_of_range", "set record names no valid vertex", number)
        if values[0] in sets:
            raise GraphFormatError("malformed_line", f"second set for vertex {values[0]}", number)
        sets[values[0]] = GapSet.of(values[1:])
    missing = [v for v in range(n) if v not in sets]
    if missing:
        raise GraphFormatError("missing_set", f"no set record for vertices {missing}")
    return SggfInstance(MultiGraph(n, tuple(edges)), tuple(sets[v] for v in range(n)))


def serialize_sggf(inst: SggfInstance) -> str:
    lines = [f"g {inst.graph.n}"]
    lines.extend(f"e {u} {v}" for u, v in inst.graph.edges)
    lines.extend(" ".join(["a", str(v)] + [str(x) for x in gap_set]) for v, gap_set in enumerate(inst.sets))
    return "\n".join(lines) + "\n"


class _Blossom:
    """Edmonds' augmenting-path search with blossom contraction over adjacency lists."""

    def __init__(self, n: int, adjacency: List[List[int]]):
        self.n = n
        self.adjacency = adjacency
        self.match = [-1] * n
        self.parent = [-1] * n
        self.base = list(range(n))
        self.used = [False] * n
        self.in_blossom = [False] * n

    def _lca(self, a: int, b: int) -> int:
        seen = [False] * self.n
        while True:
            a = self.base[a]
            seen[a] = True
            if self.match[a] == -1:
                break
            a = self.parent[self.match[a]]
        while True:
            b = self.base[b]
            if seen[b]:
                return b
            b = self.parent[self.match[b]]

    def _mark_path(self, v: int, b: int, child: int) -> None:
        while self.base[v] != b:
            self.in_blossom[self.base[v]] = True
            self.in_blossom[self.base[self.match[v]]] = True
            self.parent[v] = child
            child = self.match[v]
            v = self.parent[self.match[v]]

    def _find_path(self, root: int) -> int:
        n = self.n
        self.used = [False] * n
        self.parent = [-1] * n
        self.base = list(range(n))
        self.used[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in self.adjacency[v]:
                if self.base[v] == self.base[to] or self.match[v] == to:
                    continue
                if to == root or (self.match[to] != -1 and self.parent[self.match[to]] != -1):
                    current = self._lca(v, to)
                    self.in_blossom = [False] * n
                    self._mark_path(v, current, to)
                    self._mark_path(to, current, v)
                    for i in range(n):
                        if self.in_blossom[self.base[i]]:
                            self.base[i] = current
                            if not self.used[i]:
                                self.used[i] = True
                                queue.append(i)
                elif self.parent[to] == -1:
                    self.parent[to] = v
                    if self.match[to] == -1:
                        return to
                    self.used[self.match[to]] = True
                    queue.append(self.match[to])
        return -1

    def run(self) -> List[int]:
        for v in range(self.n):
            if self.match[v] != -1:
                continue
            for w in self.adjacency[v]:
                if self.match[w] == -1:
                    self.match[v], self.match[w] = w, v
                    break
        for root in range(self.n):
            if self.match[root] != -1:
                continue
            v = self._find_path(root)
            while v != -1:
                pv = self.parent[v]
                ppv = self.match[pv]
                self.match[v], self.match[pv] = pv, v
                v = ppv
        return self.match


def max_matching(g: MultiGraph) -> List[int]:
    """
    Maximum-cardinality matching of a general multigraph.

    Args:
        g: Multigraph

    Returns:
        Sorted edge ids of the matching (lowest id among parallel edges)
    """
    adjacency: List[List[int]] = [[] for _ in range(g.n)]
    first_edge: Dict[Tuple[int, int], int] = {}
    for i, (u, v) in enumerate(g.edges):
        key = (min(u, v), max(u, v))
        if key in first_edge:
            continue
        first_edge[key] = i
        adjacency[u].append(v)
        adjacency[v].append(u)
    match = _Blossom(g.n, adjacency).run()
    return sorted(first_edge[(v, w)] for v, w in enumerate(match) if v < w)


def bipartite_matching_size(g: MultiGraph, left: Iterable[int]) -> int:
    """Augmenting-path (Kuhn) matching size on a bipartite multigraph with the given left side."""
    left = list(left)
    left_set = set(left)
    neighbors: Dict[int, List[int]] = {v: [] for v in left}
    for u, v in g.edges:
        if u in left_set and v not in left_set:
            neighbors[u].append(v)
        elif v in left_set and u not in left_set:
            neighbors[v].append(u)
        else:
            raise ValueError(f"edge {u}-{v} does not cross the bipartition")
    owner: Dict[int, int] = {}

    def augment(v: int, seen: set) -> bool:
        for w in neighbors[v]:
            if w in seen:
                continue
            seen.add(w)
            if w not in owner or augment(owner[w], seen):
                owner[w] = v
                return True
        return False

    return sum(1 for v in left if augment(v, set()))


@dataclass(frozen=True)
class GadgetPiece:
    """
    One matching piece: `degree` stubs, a core of degree - high vertices and a slack clique of
    high - low vertices, each joined to every stub, plus an optional parity port on the slack.
    """

    degree: int
    low: int
    high: int
    has_port: bool

    @property
    def core(self) -> int:
        return self.degree - self.high

    @property
    def slack(self) -> int:
        return self.high - self.low

    @property
    def size(self) -> int:
        return self.degree + self.core + self.slack + (1 if self.has_port else 0)

    @property
    def port(self) -> Optional[int]:
        return self.size - 1 if self.has_port else None

    def local_edges(self) -> List[Tuple[int, int]]:
        d = self.degree
        core = range(d, d + self.core)
        slack = range(d + self.core, d + self.core + self.slack)
        edges = [(s, c) for c in core for s in range(d)]
        edges.extend((s, z) for z in slack for s in range(d))
        edges.extend(itertools.combinations(slack, 2))
        if self.has_port:
            edges.extend((z, self.port) for z in slack)
        return edges


@dataclass(frozen=True)
class VertexGadget:
    degree: int
    gap_set: GapSet
    pieces: Tuple[GadgetPiece, ...]

    def hull(self) -> GadgetPiece:
        """Interval piece over min..max of the set; admits every count its pieces admit."""
        low, high = self.gap_set.members[0], self.gap_set.members[-1]
        return GadgetPiece(self.degree, low, high, high > low)


@lru_cache(maxsize=None)
def _vertex_gadget(degree: int, members: Tuple[int, ...]) -> VertexGadget:
    gap_set = GapSet(members).trimmed(degree)
    values = gap_set.members
    if not values:
        return VertexGadget(degree, gap_set, ())
    low, high = values[0], values[-1]
    steps = {b - a for a, b in zip(values, values[1:])}
    if steps <= {1}:
        pieces = (GadgetPiece(degree, low, high, high > low),)
    elif steps == {2}:
        pieces = (GadgetPiece(degree, low, high, False),)
    else:
        pieces = tuple(GadgetPiece(degree, a, b, b > a) for a, b in gap_set.runs())
    return VertexGadget(degree, gap_set, pieces)


def build_vertex_gadget(degree: int, gap_set: GapSet) -> VertexGadget:
    """
    Build the matching gadget of a vertex: removing an outward stub set T leaves a perfect
    matching in some piece exactly when |T| is in the set. Intervals and stride-2 sets need
    one piece; a set mixing both steps gets one piece per run of consecutive members.

    Args:
        degree: Number of stubs
        gap_set: Allowed outward counts (small-gap)

    Returns:
        VertexGadget (no pieces when nothing in the set fits the degree)
    """
    if not gap_set.is_small_gap:
        raise NotSmallGapError(gap_set.members)
    return _vertex_gadget(degree, gap_set.members)


def _has_perfect_matching(n: int, edges: Sequence[Tuple[int, int]], removed: Iterable[int]) -> bool:
    removed = set(removed)
    keep = [v for v in range(n) if v not in removed]
    if len(keep) % 2:
        return False
    index = {v: i for i, v in enumerate(keep)}
    sub = MultiGraph(len(keep), tuple((index[u], index[v]) for u, v in edges if u in index and v in index))
    return 2 * len(max_matching(sub)) == len(keep)


def validate_vertex_gadget(gadget: VertexGadget) -> List[Tuple[int, ...]]:
    """
    Exhaustively check every outward stub subset.

    Args:
        gadget: Gadget to check

    Returns:
        Stub subsets where the gadget disagrees with its set (empty when sound)
    """
    failures = []
    for size in range(gadget.degree + 1):
        for outward in itertools.combinations(range(gadget.degree), size):
            feasible = False
            for piece in gadget.pieces:
                edges = piece.local_edges()
                options = [outward, outward + (piece.port,)] if piece.has_port else [outward]
                if any(_has_perfect_matching(piece.size, edges, removed) for removed in options):
                    feasible = True
                    break
            if feasible != (size in gadget.gap_set):
                failures.append(outward)
    return failures


@lru_cache(maxsize=None)
def _validated(degree: int, members: Tuple[int, ...]) -> bool:
    return not validate_vertex_gadget(_vertex_gadget(degree, members))


class PieceSearchCapExceeded(ValueError):
    """Sets with interior gaps needed more piece-choice matchings than allowed."""

    def __init__(self, matchings: int, cap: int):
        self.kind = "size_cap"
        self.matchings = matchings
        self.cap = cap
        super().__init__(f"size_cap: piece search needs more than {cap} matchings; raise DECOMP_SGGF_MAX_MATCHINGS")


class SggfSolver:
    def __init__(self, validate_up_to: int = DEFAULT_VALIDATE_UP_TO, max_matchings: int = DEFAULT_MAX_MATCHINGS):
        """
        Initialize the gadget-reduction solver.

        Args:
            validate_up_to: Gadgets of at most this degree are checked exhaustively before use
            max_matchings: Matching runs allowed when sets with interior gaps force a piece search
        """
        self.validate_up_to = validate_up_to
        self.max_matchings = max_matchings
        logger.debug(f"SGGF solver initialized (validate_up_to={validate_up_to}, max_matchings={max_matchings})")

    def _gadget(self, degree: int, gap_set: GapSet) -> VertexGadget:
        gadget = build_vertex_gadget(degree, gap_set)
        if degree <= self.validate_up_to and not _validated(degree, gap_set.members):
            raise InternalConsistencyError(f"gadget for degree {degree}, set {list(gap_set)} failed validation")
        return gadget

    def solve(self, inst: SggfInstance) -> Optional[List[int]]:
        """
        Find S with d_S(v) in A_v for all v via perfect matching on the gadget graph.

        Vertices whose set splits into several pieces start out relaxed to the interval
        hull of their set. A relaxed instance without a perfect matching settles the
        answer; otherwise pieces are fixed one vertex at a time, pruning every branch
        whose relaxation is already infeasible.

        Args:
            inst: Instance with small-gap sets

        Returns:
            Sorted edge ids of S, or None when infeasible

        Raises:
            PieceSearchCapExceeded: The piece search outgrew max_matchings
        """
        g = inst.graph
        incident = g.incident()
        gadgets = []
        for v in range(g.n):
            gadget = self._gadget(len(incident[v]), inst.sets[v])
            if not gadget.pieces:
                logger.debug(f"Vertex {v} admits no count up to its degree {len(incident[v])}")
                return None
            gadgets.append(gadget)
        pieces = [gadget.pieces[0] if len(gadget.pieces) == 1 else gadget.hull() for gadget in gadgets]
        branching = [v for v, gadget in enumerate(gadgets) if len(gadget.pieces) > 1]
        if branching:
            logger.debug(f"{len(branching)} vertices have sets with interior gaps")
        runs = 0

        def search(depth: int) -> Optional[List[int]]:
            nonlocal runs
            runs += 1
            if runs > self.max_matchings:
                raise PieceSearchCapExceeded(runs, self.max_matchings)
            selection = self._solve_with(inst, incident, pieces)
            if selection is None or inst.satisfied_by(selection):
                return selection
            if depth == len(branching):
                raise InternalConsistencyError("matching-derived selection violates a degree set")
            v = branching[depth]
            relaxed = pieces[v]
            for piece in gadgets[v].pieces:
                pieces[v] = piece
                found = search(depth + 1)
                if found is not None:
                    return found
            pieces[v] = relaxed
            return None

        selection = search(0)
        if runs > 1:
            logger.info(f"Piece search used {runs} matchings")
        return selection

    @staticmethod
    def _solve_with(inst: SggfInstance, incident: List[List[int]], pieces: List[GadgetPiece]) -> Optional[List[int]]:
        edges: List[Tuple[int, int]] = []
        stub: Dict[Tuple[int, int], int] = {}
        ports: List[int] = []
        offset = 0
        for v, piece in enumerate(pieces):
            for slot, edge_id in enumerate(incident[v]):
                stub[(v, edge_id)] = offset + slot
            edges.extend((offset + a, offset + b) for a, b in piece.local_edges())
            if piece.has_port:
                ports.append(offset + piece.port)
            offset += piece.size
        carriers: Dict[int, int] = {}
        for i, (u, v) in enumerate(inst.graph.edges):
            carriers[len(edges)] = i
            edges.append((stub[(u, i)], stub[(v, i)]))
        hub_size = len(ports) + (offset + len(ports)) % 2
        hub = list(range(offset, offset + hub_size))
        edges.extend((p, h) for p in ports for h in hub)
        edges.extend(itertools.combinations(hub, 2))
        n = offset + hub_size
        matching = max_matching(MultiGraph(n, tuple(edges)))
        if 2 * len(matching) != n:
            return None
        return sorted(carriers[i] for i in matching if i in carriers)


def solve_sggf(inst: SggfInstance) -> Optional[List[int]]:
    return SggfSolver().solve(inst)


def solve_sggf_oracle(inst: SggfInstance, max_edges: int = DEFAULT_ORACLE_MAX_EDGES) -> Optional[List[int]]:
    """Exhaustive search in lexicographic order of sorted edge-id tuples; the first hit is returned."""
    m = inst.graph.m
    if m > max_edges:
        raise ValueError(f"too_many_edges: {m} edges exceed the oracle cap of {max_edges}")

    def search(prefix: List[int]) -> Optional[List[int]]:
        if inst.satisfied_by(prefix):
            return list(prefix)
        start = prefix[-1] + 1 if prefix else 0
        for i in range(start, m):
            prefix.append(i)
            found = search(prefix)
            prefix.pop()
            if found is not None:
                return found
        return None

    return search([])
