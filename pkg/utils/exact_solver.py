import itertools
import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

from utils.graph_core import (
    Decomposition,
    DecompositionSpec,
    Graph,
    KBound,
    Label,
    validate_decomposition,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_EDGES = 64
LABEL_ORDER = (Label.MATCHING, Label.FOREST)


class SizeCapExceeded(ValueError):
    """The graph has more edges than the exact search is allowed to handle."""

    def __init__(self, edges: int, cap: int):
        self.kind = "size_cap"
        self.edges = edges
        self.cap = cap
        super().__init__(f"size_cap: {edges} edges exceed the exact-search cap of {cap}; use a polynomial solver or raise the cap")


@dataclass(frozen=True)
class EnumerationProjection:
    core_edges: Tuple[int, ...]

    @classmethod
    def of(cls, g: Graph, pairs: Sequence[Tuple[int, int]]) -> "EnumerationProjection":
        indices = tuple(g.edge_index(u, v) for u, v in pairs)
        if len(set(indices)) != len(indices):
            raise ValueError("projection edges must be distinct")
        return cls(indices)


@dataclass(frozen=True)
class EnumerationResult:
    labelings: FrozenSet[Tuple[Label, ...]]
    count: int


def _bound_value(bound: KBound) -> float:
    return float("inf") if bound.is_infinite else bound.value


class _MatchingPart:
    def __init__(self, n: int):
        self.degree = [0] * n

    def capacity(self, v: int) -> float:
        return 1 - self.degree[v]

    def add(self, u: int, v: int):
        if self.degree[u] or self.degree[v]:
            return None
        self.degree[u] += 1
        self.degree[v] += 1
        return (u, v)

    def remove(self, token) -> None:
        u, v = token
        self.degree[u] -= 1
        self.degree[v] -= 1


class _LinearPart:
    """Paths of bounded length, tracked with an undoable union-find."""

    def __init__(self, n: int, bound: KBound):
        self.degree = [0] * n
        self.parent = list(range(n))
        self.size = [1] * n
        self.length = [0] * n
        self.bound = _bound_value(bound)

    def _find(self, x: int) -> int:
        while self.parent[x] != x:
            x = self.parent[x]
        return x

    def capacity(self, v: int) -> float:
        return 2 - self.degree[v]

    def add(self, u: int, v: int):
        if self.degree[u] >= 2 or self.degree[v] >= 2:
            return None
        ru, rv = self._find(u), self._find(v)
        if ru == rv:
            return None
        total = self.length[ru] + self.length[rv] + 1
        if total > self.bound:
            return None
        if self.size[ru] < self.size[rv]:
            ru, rv = rv, ru
        self.parent[rv] = ru
        self.size[ru] += self.size[rv]
        old = self.length[ru]
        self.length[ru] = total
        self.degree[u] += 1
        self.degree[v] += 1
        return (u, v, ru, rv, old)

    def remove(self, token) -> None:
        u, v, ru, rv, old = token
        self.degree[u] -= 1
        self.degree[v] -= 1
        self.length[ru] = old
        self.size[ru] -= self.size[rv]
        self.parent[rv] = rv


class _StarPart:
    """Stars K_{1,m} with m bounded; a new edge must touch an uncovered vertex."""

    def __init__(self, n: int, bound: KBound):
        self.neighbors: List[List[int]] = [[] for _ in range(n)]
        self.bound = _bound_value(bound)

    def capacity(self, v: int) -> float:
        return self.bound - len(self.neighbors[v])

    def _can_grow(self, center: int) -> bool:
        around = self.neighbors[center]
        if len(around) + 1 > self.bound:
            return False
        if len(around) == 1:
            return len(self.neighbors[around[0]]) == 1
        return True

    def add(self, u: int, v: int):
        if self.neighbors[u] and self.neighbors[v]:
            return None
        if self.neighbors[v]:
            u, v = v, u
        if self.neighbors[u] and not self._can_grow(u):
            return None
        self.neighbors[u].append(v)
        self.neighbors[v].append(u)
        return (u, v)

    def remove(self, token) -> None:
        u, v = token
        self.neighbors[u].pop()
        self.neighbors[v].pop()


def _make_parts(n: int, spec: DecompositionSpec):
    if spec.kind == "star":
        return {Label.MATCHING: _MatchingPart(n), Label.FOREST: _StarPart(n, spec.k)}
    matching = _MatchingPart(n) if spec.l == KBound(1) else _LinearPart(n, spec.l)
    return {Label.MATCHING: matching, Label.FOREST: _LinearPart(n, spec.k)}


def edge_order(g: Graph) -> List[int]:
    """Breadth-first edge order so each edge touches already-labeled vertices when possible."""
    order: List[int] = []
    placed = [False] * g.m
    visited = [False] * g.n
    for source in range(g.n):
        if visited[source] or g.degree(source) == 0:
            continue
        visited[source] = True
        queue = [source]
        head = 0
        while head < len(queue):
            v = queue[head]
            head += 1
            for w, i in zip(g.neighbors(v), g.incident_edges(v)):
                if not placed[i]:
                    placed[i] = True
                    order.append(i)
                if not visited[w]:
                    visited[w] = True
                    queue.append(w)
    return order


class ExactSolver:
    def __init__(self, max_edges: int = DEFAULT_MAX_EDGES):
        """
        Initialize the backtracking solver.

        Args:
            max_edges: Largest edge count the exhaustive search accepts
        """
        self.max_edges = max_edges
        logger.debug(f"Exact solver initialized (max_edges={max_edges})")

    def _check_cap(self, g: Graph) -> None:
        if g.m > self.max_edges:
            logger.warning(f"Exact search refused: {g.m} edges > cap {self.max_edges}")
            raise SizeCapExceeded(g.m, self.max_edges)

    def iter_decompositions(
        self,
        g: Graph,
        spec: DecompositionSpec,
        fixed: Optional[Mapping[int, Label]] = None,
    ) -> Iterator[Tuple[Label, ...]]:
        """
        Yield every valid labeling (aligned with g.edges) in a deterministic order.

        Args:
            g: Graph to decompose
            spec: Target decomposition spec
            fixed: Optional edge index -> label constraints

        Returns:
            Iterator over label tuples
        """
        self._check_cap(g)
        fixed = dict(fixed or {})
        order = edge_order(g)
        parts = _make_parts(g.n, spec)
        labels: List[Optional[Label]] = [None] * g.m
        remaining = [g.degree(v) for v in range(g.n)]

        def fits(x: int) -> bool:
            spare = parts[Label.MATCHING].capacity(x) + parts[Label.FOREST].capacity(x)
            return remaining[x] <= spare

        def extend(position: int) -> Iterator[Tuple[Label, ...]]:
            if position == len(order):
                yield tuple(labels)
                return
            i = order[position]
            u, v = g.edges[i]
            choices = (fixed[i],) if i in fixed else LABEL_ORDER
            remaining[u] -= 1
            remaining[v] -= 1
            for label in choices:
                part = parts[label]
                token = part.add(u, v)
                if token is None:
                    continue
                if fits(u) and fits(v):
                    labels[i] = label
                    yield from extend(position + 1)
                    labels[i] = None
                part.remove(token)
            remaining[u] += 1
            remaining[v] += 1

        yield from extend(0)

    def solve(self, g: Graph, spec: DecompositionSpec) -> Optional[Decomposition]:
        for labels in self.iter_decompositions(g, spec):
            return Decomposition(g, labels, spec)
        return None

    def enumerate(self, g: Graph, spec: DecompositionSpec, proj: EnumerationProjection) -> EnumerationResult:
        seen = set()
        count = 0
        for labels in self.iter_decompositions(g, spec):
            count += 1
            seen.add(tuple(labels[i] for i in proj.core_edges))
        logger.debug(f"Enumerated {count} decompositions of a {g.m}-edge graph under {spec}")
        return EnumerationResult(frozenset(seen), count)


def solve_exact(g: Graph, spec: DecompositionSpec, max_edges: int = DEFAULT_MAX_EDGES) -> Optional[Decomposition]:
    return ExactSolver(max_edges).solve(g, spec)


def enumerate_decompositions(
    g: Graph,
    spec: DecompositionSpec,
    proj: EnumerationProjection,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> EnumerationResult:
    return ExactSolver(max_edges).enumerate(g, spec, proj)


def brute_force_decompositions(g: Graph, spec: DecompositionSpec) -> List[Tuple[Label, ...]]:
    """Filter all 2^|E| labelings through the validator (test oracle for small graphs)."""
    valid = []
    for labels in itertools.product(LABEL_ORDER, repeat=g.m):
        if validate_decomposition(Decomposition(g, labels, spec)).valid:
            valid.append(labels)
    return valid
