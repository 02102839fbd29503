import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import networkx as nx

from utils.graph_core import (
    Decomposition,
    DecompositionSpec,
    Graph,
    InternalConsistencyError,
    KBound,
    Label,
    MultiGraph,
    validate_decomposition,
)
from utils.sggf_solver import GapSet, SggfInstance, SggfSolver

logger = logging.getLogger(__name__)

M, S = Label.MATCHING, Label.FOREST

Pattern = Tuple[bool, ...]


class ChainKind(str, Enum):
    PATH = "path"
    CYCLE = "cycle"


class EndClass(str, Enum):
    HUB = "hub"
    LEAF = "leaf"


@dataclass(frozen=True)
class Chain:
    """
    A maximal path or cycle whose interior vertices have degree 2.

    Cycles repeat their first vertex at the end; `start` and `end` are both HUB for a cycle
    through a degree->=3 vertex and None for a cycle of degree-2 vertices.
    """

    kind: ChainKind
    vertices: Tuple[int, ...]
    start: Optional[EndClass]
    end: Optional[EndClass]

    @property
    def length(self) -> int:
        return len(self.vertices) - 1

    @property
    def edges(self) -> List[Tuple[int, int]]:
        return list(zip(self.vertices, self.vertices[1:]))

    @property
    def hub_slots(self) -> List[Tuple[int, int]]:
        """(position, hub vertex) for each end-edge at a HUB end; position 0 is the first edge."""
        slots = []
        if self.start is EndClass.HUB:
            slots.append((0, self.vertices[0]))
        if self.end is EndClass.HUB:
            slots.append((self.length - 1, self.vertices[-1]))
        return slots

    def reversed(self) -> "Chain":
        return Chain(self.kind, tuple(reversed(self.vertices)), self.end, self.start)


@dataclass(frozen=True)
class ChainFamily:
    chains: Tuple[Chain, ...]
    hubs: Tuple[int, ...]
    interior: Tuple[int, ...]
    leaves: Tuple[int, ...]
    saturated: Tuple[int, ...]


def _end_class(g: Graph, v: int) -> EndClass:
    return EndClass.HUB if g.degree(v) >= 3 else EndClass.LEAF


def chain_decompose(g: Graph, k=None) -> ChainFamily:
    """
    Split the edges of g into chains: paths between vertices of degree other than 2, cycles through
    at most one degree->=3 vertex, and cycles made only of degree-2 vertices.

    Args:
        g: Graph
        k: Optional star bound; fills `saturated` with the vertices of degree >= k+1

    Returns:
        ChainFamily
    """
    used = [False] * g.m
    chains: List[Chain] = []

    def walk(start: int, first: int) -> List[int]:
        vertices = [start, first]
        used[g.edge_index(start, first)] = True
        current = first
        while g.degree(current) == 2 and current != start:
            nxt = next(w for w in g.neighbors(current) if not used[g.edge_index(current, w)])
            used[g.edge_index(current, nxt)] = True
            vertices.append(nxt)
            current = nxt
        return vertices

    for v in range(g.n):
        if g.degree(v) in (0, 2):
            continue
        for w in g.neighbors(v):
            if used[g.edge_index(v, w)]:
                continue
            vertices = walk(v, w)
            if vertices[-1] == v:
                chains.append(Chain(ChainKind.CYCLE, tuple(vertices), EndClass.HUB, EndClass.HUB))
            else:
                chains.append(Chain(ChainKind.PATH, tuple(vertices), _end_class(g, v), _end_class(g, vertices[-1])))
    for i, (u, w) in enumerate(g.edges):
        if not used[i]:
            chains.append(Chain(ChainKind.CYCLE, tuple(walk(u, w)), None, None))

    bound = None if k is None else KBound.parse(k)
    saturated = () if bound is None or bound.is_infinite else tuple(
        v for v in range(g.n) if g.degree(v) >= bound.value + 1
    )
    family = ChainFamily(
        chains=tuple(chains),
        hubs=tuple(v for v in range(g.n) if g.degree(v) >= 3),
        interior=tuple(v for v in range(g.n) if g.degree(v) == 2),
        leaves=tuple(v for v in range(g.n) if g.degree(v) == 1),
        saturated=saturated,
    )
    logger.debug(f"Chain decomposition: {len(chains)} chains, {len(family.hubs)} hubs")
    return family


@dataclass(frozen=True)
class ChainProfile:
    achievable: FrozenSet[int]
    witnesses: Dict[Pattern, Tuple[Label, ...]]

    def witness_for(self, pattern: Pattern) -> Optional[Tuple[Label, ...]]:
        return self.witnesses.get(pattern)


# (first label, leading S-run length once an M has appeared, previous label, trailing S-run length)
_State = Tuple[Optional[Label], Optional[int], Optional[Label], int]


def _accepts(chain: Chain, state: _State) -> bool:
    first, lead, prev, run = state
    start_hub = chain.start is EndClass.HUB
    end_hub = chain.end is EndClass.HUB
    if chain.kind is ChainKind.PATH:
        if end_hub and prev is S:
            return run == 1 and not (lead is None and start_hub)
        return True
    if first is M and prev is M:
        return False
    if start_hub:
        return prev is M or run == 1
    if lead is None:
        return False
    if first is S and prev is S:
        return lead + run <= 2
    return True


def _pattern(chain: Chain, state: _State) -> Pattern:
    first, _, prev, _ = state
    pattern = []
    if chain.start is EndClass.HUB:
        pattern.append(first is M)
    if chain.end is EndClass.HUB:
        pattern.append(prev is M)
    return tuple(pattern)


def chain_profile(chain: Chain, k=2) -> ChainProfile:
    """
    Which numbers of hub end-edges can sit in the matching, with one interior labeling per pattern.

    Matching edges are pairwise non-adjacent, forest runs inside the chain are stars with at most
    two edges, and a forest end-edge at a hub is a single edge joining the hub's own star.

    Args:
        chain: Chain to profile
        k: Star bound (k >= 2 or INFINITY); the interior rules do not depend on it

    Returns:
        ChainProfile
    """
    bound = KBound.parse(k)
    if not bound.is_infinite and bound.value < 2:
        raise ValueError("chain profiles need k >= 2")
    start_hub = chain.start is EndClass.HUB
    layers: List[Dict[_State, Tuple[Optional[_State], Label]]] = []
    frontier: Dict[_State, Tuple[Optional[_State], Optional[Label]]] = {(None, None, None, 0): (None, None)}
    for _ in range(chain.length):
        layer: Dict[_State, Tuple[Optional[_State], Label]] = {}
        for state in frontier:
            first, lead, prev, run = state
            for label in (M, S):
                if label is M:
                    if prev is M:
                        continue
                    nxt = (M if first is None else first, run if lead is None else lead, M, 0)
                else:
                    limit = 1 if lead is None and start_hub else 2
                    if run + 1 > limit:
                        continue
                    nxt = (S if first is None else first, lead, S, run + 1)
                if nxt not in layer:
                    layer[nxt] = (state, label)
        layers.append(layer)
        frontier = layer

    witnesses: Dict[Pattern, Tuple[Label, ...]] = {}
    for state in frontier:
        if not _accepts(chain, state):
            continue
        pattern = _pattern(chain, state)
        if pattern in witnesses:
            continue
        labels = []
        current = state
        for layer in reversed(layers):
            current, label = layer[current]
            labels.append(label)
        witnesses[pattern] = tuple(reversed(labels))
    return ChainProfile(frozenset(sum(p) for p in witnesses), witnesses)


@dataclass(frozen=True)
class SggfMapping:
    """H vertex order (hubs, then one node per chain) and, per H-edge, its (chain, hub slot)."""

    hubs: Tuple[int, ...]
    slots: Tuple[Tuple[int, int], ...]


def build_sggf_instance(g: Graph, k, family: Optional[ChainFamily] = None,
                        profiles: Optional[Sequence[ChainProfile]] = None) -> Tuple[SggfInstance, SggfMapping]:
    """
    Build the bipartite SGGF instance: hubs on one side, one node per chain on the other,
    one H-edge per hub end-edge of a chain.

    Args:
        g: Graph with maximum degree at most k+1
        k: Star bound (k >= 2 or INFINITY)
        family: Precomputed chain decomposition
        profiles: Precomputed chain profiles aligned with family.chains

    Returns:
        Tuple of instance and mapping back to chains
    """
    bound = KBound.parse(k)
    if not bound.is_infinite and g.max_degree() > bound.value + 1:
        raise ValueError(f"maximum degree {g.max_degree()} exceeds k+1 = {bound.value + 1}")
    family = family or chain_decompose(g, bound)
    profiles = profiles if profiles is not None else [chain_profile(c, bound) for c in family.chains]
    index = {x: i for i, x in enumerate(family.hubs)}
    offset = len(family.hubs)
    edges: List[Tuple[int, int]] = []
    slots: List[Tuple[int, int]] = []
    for j, chain in enumerate(family.chains):
        for slot, (_, hub) in enumerate(chain.hub_slots):
            edges.append((index[hub], offset + j))
            slots.append((j, slot))
    sets = [
        GapSet((1,)) if not bound.is_infinite and g.degree(x) >= bound.value + 1 else GapSet((0, 1))
        for x in family.hubs
    ]
    sets.extend(GapSet.of(p.achievable) for p in profiles)
    instance = SggfInstance(MultiGraph(offset + len(family.chains), tuple(edges)), tuple(sets))
    return instance, SggfMapping(family.hubs, tuple(slots))


def lift_solution(g: Graph, family: ChainFamily, profiles: Sequence[ChainProfile],
                  mapping: SggfMapping, selection: Sequence[int], k) -> Decomposition:
    """
    Turn an SGGF solution into a matching plus star forest: a selected H-edge puts its chain's
    end-edge in the matching, and every chain interior comes from the witness of its pattern.

    Args:
        g: Graph
        family: Chain decomposition of g
        profiles: Chain profiles aligned with family.chains
        mapping: Mapping returned with the SGGF instance
        selection: Selected H-edge ids
        k: Star bound

    Returns:
        Decomposition validated under STAR(k)
    """
    chosen = set(selection)
    patterns: List[List[bool]] = [[] for _ in family.chains]
    for i, (j, _) in enumerate(mapping.slots):
        patterns[j].append(i in chosen)
    labels: List[Optional[Label]] = [None] * g.m
    for j, chain in enumerate(family.chains):
        witness = profiles[j].witness_for(tuple(patterns[j]))
        if witness is None:
            raise InternalConsistencyError(f"chain {j} has no witness for pattern {patterns[j]}")
        for (u, v), label in zip(chain.edges, witness):
            labels[g.edge_index(u, v)] = label
    decomposition = Decomposition(g, tuple(labels), DecompositionSpec.star(k))
    verdict = validate_decomposition(decomposition)
    if not verdict.valid:
        raise InternalConsistencyError(f"lifted decomposition is invalid: {verdict.violations[0].detail}")
    return decomposition


class MbsfdSolver:
    def __init__(self, sggf_solver: Optional[SggfSolver] = None):
        """
        Initialize the matching plus star-forest solver.

        Args:
            sggf_solver: Solver used for the degree-set stage
        """
        self.sggf_solver = sggf_solver or SggfSolver()
        logger.debug("MBSFD solver initialized")

    def solve(self, g: Graph, k) -> Optional[Decomposition]:
        """
        Decide whether g splits into a matching and a forest of stars with at most k edges each.

        Args:
            g: Graph
            k: Positive integer bound or INFINITY

        Returns:
            Decomposition under STAR(k), or None when none exists
        """
        bound = KBound.parse(k)
        if not bound.is_infinite and g.max_degree() >= bound.value + 2:
            logger.info(f"Degree {g.max_degree()} >= k+2: no decomposition")
            return None
        if bound == KBound(1):
            return self._solve_two_matchings(g)
        family = chain_decompose(g, bound)
        profiles = [chain_profile(chain, bound) for chain in family.chains]
        if any(not p.achievable for p in profiles):
            logger.info("A chain admits no labeling: no decomposition")
            return None
        instance, mapping = build_sggf_instance(g, bound, family, profiles)
        logger.debug(f"SGGF instance with {instance.graph.n} vertices, {instance.graph.m} edges")
        selection = self.sggf_solver.solve(instance)
        if selection is None:
            return None
        return lift_solution(g, family, profiles, mapping, selection, bound)

    @staticmethod
    def _solve_two_matchings(g: Graph) -> Optional[Decomposition]:
        if g.max_degree() > 2:
            return None
        nxg = g.to_networkx()
        for component in nx.connected_components(nxg):
            if not nx.is_bipartite(nxg.subgraph(component)):
                return None
        labels: List[Optional[Label]] = [None] * g.m
        for chain in chain_decompose(g).chains:
            for position, (u, v) in enumerate(chain.edges):
                labels[g.edge_index(u, v)] = M if position % 2 == 0 else S
        decomposition = Decomposition(g, tuple(labels), DecompositionSpec.star(1))
        if not validate_decomposition(decomposition).valid:
            raise InternalConsistencyError("alternating labeling of paths and even cycles is invalid")
        return decomposition


def solve_mbsfd(g: Graph, k) -> Optional[Decomposition]:
    return MbsfdSolver().solve(g, k)
