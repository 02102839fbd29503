from hypothesis import strategies as st

from utils.graph_core import Graph, MultiGraph


def star(n_leaves: int) -> Graph:
    return Graph.from_edges(n_leaves + 1, [(0, i) for i in range(1, n_leaves + 1)])


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path(n_edges: int) -> Graph:
    return Graph.from_edges(n_edges + 1, [(i, i + 1) for i in range(n_edges)])


@st.composite
def graphs(draw: st.DrawFn, max_vertices: int = 7, max_edges: int = 8) -> Graph:
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if not pairs:
        return Graph(n, ())
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges))
    return Graph.from_edges(n, chosen)


@st.composite
def multigraphs(draw: st.DrawFn, max_vertices: int = 6, max_edges: int = 8) -> MultiGraph:
    n = draw(st.integers(min_value=2, max_value=max_vertices))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    edges = draw(st.lists(pair, max_size=max_edges))
    return MultiGraph(n, tuple(edges))


@st.composite
def small_gap_sets(draw: st.DrawFn, top: int = 4) -> tuple:
    """Start somewhere in 0..top and keep stepping by 1 or 2; every such set has small gaps."""
    current = draw(st.integers(min_value=0, max_value=top))
    members = [current]
    while draw(st.booleans()):
        current += draw(st.sampled_from([1, 2]))
        if current > top:
            break
        members.append(current)
    return tuple(members)


@st.composite
def bipartite_multigraphs(draw: st.DrawFn, max_side: int = 4, max_edges: int = 10):
    left = draw(st.integers(min_value=1, max_value=max_side))
    right = draw(st.integers(min_value=1, max_value=max_side))
    pair = st.tuples(st.integers(0, left - 1), st.integers(left, left + right - 1))
    edges = draw(st.lists(pair, max_size=max_edges))
    return MultiGraph(left + right, tuple(edges)), list(range(left))


def _degree_capped(n: int, candidates, max_degree) -> list:
    degree = [0] * n
    kept = []
    for u, v in candidates:
        if max_degree is not None and max(degree[u], degree[v]) >= max_degree:
            continue
        degree[u] += 1
        degree[v] += 1
        kept.append((u, v))
    return kept


@st.composite
def bounded_degree_graphs(draw: st.DrawFn, max_degree=None, max_vertices: int = 8, max_edges: int = 10) -> Graph:
    """Random simple graphs; edges that would push a vertex past max_degree are skipped."""
    n = draw(st.integers(min_value=1, max_value=max_vertices))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if not pairs:
        return Graph(n, ())
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges))
    return Graph.from_edges(n, _degree_capped(n, chosen, max_degree))


@st.composite
def graphs_with_a_heavy_vertex(draw: st.DrawFn, k: int, max_extra: int = 4) -> Graph:
    """Vertex 0 gets k + 2 neighbours; a few random edges are added elsewhere."""
    n = draw(st.integers(min_value=k + 3, max_value=k + 5))
    spokes = [(0, i) for i in range(1, k + 3)]
    pairs = [(u, v) for u in range(1, n) for v in range(u + 1, n)]
    extra = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_extra))
    return Graph.from_edges(n, spokes + extra)


@st.composite
def bounded_multigraphs(draw: st.DrawFn, max_degree: int = 5, max_vertices: int = 6, max_edges: int = 8) -> MultiGraph:
    n = draw(st.integers(min_value=2, max_value=max_vertices))
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1])
    edges = draw(st.lists(pair, max_size=max_edges))
    return MultiGraph(n, tuple(_degree_capped(n, edges, max_degree)))
