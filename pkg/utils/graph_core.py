import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

logger = logging.getLogger(__name__)

INF_TOKEN = "inf"


class GraphFormatError(ValueError):
    """Raised for malformed graph files or invalid graph construction."""

    def __init__(self, kind: str, message: str, line: Optional[int] = None):
        self.kind = kind
        self.line = line
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"{kind}: {message}{where}")


class CertificateError(ValueError):
    """Raised when a certificate does not partition the edge set of its graph."""

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


class InternalConsistencyError(RuntimeError):
    """A construction produced something its correctness argument rules out."""


class Label(str, Enum):
    MATCHING = "matching"
    FOREST = "forest"


@dataclass(frozen=True)
class KBound:
    """A positive integer bound, or INFINITY when value is None."""

    value: Optional[int] = None

    def __post_init__(self):
        if self.value is not None and self.value < 1:
            raise GraphFormatError("bad_bound", f"bound must be positive, got {self.value}")

    @classmethod
    def parse(cls, text) -> "KBound":
        if isinstance(text, KBound):
            return text
        if text is None:
            raise GraphFormatError("bad_bound", "missing bound")
        if isinstance(text, int):
            return cls(text)
        token = str(text).strip().lower()
        if token == INF_TOKEN:
            return cls(None)
        try:
            return cls(int(token))
        except ValueError:
            raise GraphFormatError("bad_bound", f"not an integer or '{INF_TOKEN}': {text!r}")

    @classmethod
    def infinity(cls) -> "KBound":
        return cls(None)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def admits(self, size: int) -> bool:
        return self.value is None or size <= self.value

    def plus(self, other: "KBound") -> "KBound":
        if self.is_infinite or other.is_infinite:
            return KBound(None)
        return KBound(self.value + other.value)

    def to_json(self):
        return INF_TOKEN if self.value is None else self.value

    def __str__(self) -> str:
        return INF_TOKEN if self.value is None else str(self.value)


@dataclass(frozen=True)
class DecompositionSpec:
    """Target of a decomposition: LINEAR(k, l) or STAR(k)."""

    kind: str
    k: KBound
    l: Optional[KBound] = None

    def __post_init__(self):
        if self.kind not in ("linear", "star"):
            raise GraphFormatError("bad_spec", f"unknown spec kind {self.kind!r}")
        if self.kind == "linear" and self.l is None:
            object.__setattr__(self, "l", KBound(1))
        if self.kind == "star" and self.l is not None:
            raise GraphFormatError("bad_spec", "STAR spec takes no l bound")

    @classmethod
    def linear(cls, k, l=1) -> "DecompositionSpec":
        return cls("linear", KBound.parse(k), KBound.parse(l))

    @classmethod
    def star(cls, k) -> "DecompositionSpec":
        return cls("star", KBound.parse(k))

    @property
    def matching_is_plain(self) -> bool:
        return self.kind == "star" or self.l == KBound(1)

    def __str__(self) -> str:
        if self.kind == "star":
            return f"STAR({self.k})"
        return f"LINEAR({self.k},{self.l})"


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 0..n-1 with canonically sorted edges."""

    n: int
    edges: Tuple[Tuple[int, int], ...]
    _adjacency: Tuple[Tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    _index: Dict[Tuple[int, int], int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise GraphFormatError("malformed_line", f"negative vertex count {self.n}")
        seen = set()
        normalized = []
        for u, v in self.edges:
            if u == v:
                raise GraphFormatError("self_loop", f"self-loop at vertex {u}")
            for x in (u, v):
                if not 0 <= x < self.n:
                    raise GraphFormatError("vertex_out_of_range", f"vertex {x} not in 0..{self.n - 1}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError("duplicate_edge", f"duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
            normalized.append(key)
        normalized.sort()
        object.__setattr__(self, "edges", tuple(normalized))
        adjacency = [[] for _ in range(self.n)]
        for u, v in normalized:
            adjacency[u].append(v)
            adjacency[v].append(u)
        object.__setattr__(self, "_adjacency", tuple(tuple(sorted(a)) for a in adjacency))
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(normalized)})

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> "Graph":
        return cls(n, tuple(tuple(e) for e in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return self._adjacency[v]

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._index

    def edge_index(self, u: int, v: int) -> int:
        key = (min(u, v), max(u, v))
        if key not in self._index:
            raise KeyError(f"no edge {u}-{v}")
        return self._index[key]

    def incident_edges(self, v: int) -> List[int]:
        return [self._index[(min(v, w), max(v, w))] for w in self._adjacency[v]]

    def max_degree(self) -> int:
        return max((len(a) for a in self._adjacency), default=0)

    def degree_profile(self) -> Dict[int, int]:
        profile: Dict[int, int] = {}
        for a in self._adjacency:
            profile[len(a)] = profile.get(len(a), 0) + 1
        return dict(sorted(profile.items()))

    def is_subcubic(self) -> bool:
        return self.max_degree() <= 3

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g


@dataclass(frozen=True)
class MultiGraph:
    """Undirected multigraph; an edge's identity is its position in `edges`."""

    n: int
    edges: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        normalized = []
        for u, v in self.edges:
            if u == v:
                raise GraphFormatError("self_loop", f"self-loop at vertex {u}")
            for x in (u, v):
                if not 0 <= x < self.n:
                    raise GraphFormatError("vertex_out_of_range", f"vertex {x} not in 0..{self.n - 1}")
            normalized.append((u, v))
        object.__setattr__(self, "edges", tuple(normalized))
        degrees = [0] * self.n
        for u, v in normalized:
            degrees[u] += 1
            degrees[v] += 1
        object.__setattr__(self, "_degrees", tuple(degrees))

    @property
    def m(self) -> int:
        return len(self.edges)

    def incident(self) -> List[List[int]]:
        """Edge ids incident to each vertex, in edge-id order."""
        result: List[List[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            result[u].append(i)
            result[v].append(i)
        return result

    def degree(self, v: int) -> int:
        return self._degrees[v]


@dataclass(frozen=True)
class Violation:
    """One structural defect found by validate_decomposition."""

    kind: str
    part: Label
    vertices: Tuple[int, ...]
    detail: str

    def to_dict(self) -> Dict[str, object]:
        return {"kind": self.kind, "part": self.part.value, "vertices": list(self.vertices), "detail": self.detail}


@dataclass(frozen=True)
class Decomposition:
    """A total labeling of graph edges, aligned with `graph.edges`."""

    graph: Graph
    labels: Tuple[Label, ...]
    spec: DecompositionSpec

    def __post_init__(self):
        if len(self.labels) != self.graph.m:
            raise CertificateError("not_total", f"{len(self.labels)} labels for {self.graph.m} edges")

    def label_of(self, u: int, v: int) -> Label:
        return self.labels[self.graph.edge_index(u, v)]

    def edges_with(self, label: Label) -> List[Tuple[int, int]]:
        return [e for e, lab in zip(self.graph.edges, self.labels) if lab is label]


@dataclass(frozen=True)
class ValidationResult:
    violations: Tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations


def _iter_records(text: str) -> Iterator[Tuple[int, List[str]]]:
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line.split()


def _parse_int(token: str, number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError("malformed_line", f"expected integer, got {token!r}", number)


def parse_graph_records(text: str, allow_parallel: bool = False, extra: Optional[Dict[str, list]] = None):
    """
    Read the `g`/`e` records of a graph file.

    Args:
        text: File contents
        allow_parallel: Accept repeated edges (multigraph files)
        extra: Optional map of additional record tags to lists that collect them

    Returns:
        Tuple of vertex count and edge list in file order
    """
    n = None
    edges: List[Tuple[int, int]] = []
    seen = set()
    for number, tokens in _iter_records(text):
        tag = tokens[0]
        if tag == "g":
            if n is not None or len(tokens) != 2:
                raise GraphFormatError("malformed_line", "bad or repeated header", number)
            n = _parse_int(tokens[1], number)
            if n < 0:
                raise GraphFormatError("malformed_line", "negative vertex count", number)
        elif tag == "e":
            if n is None:
                raise GraphFormatError("missing_header", "edge before 'g <n>' header", number)
            if len(tokens) != 3:
                raise GraphFormatError("malformed_line", "edge line needs two vertices", number)
            u, v = _parse_int(tokens[1], number), _parse_int(tokens[2], number)
            if u == v:
                raise GraphFormatError("self_loop", f"self-loop at vertex {u}", number)
            for x in (u, v):
                if not 0 <= x < n:
                    raise GraphFormatError("vertex_out_of_range", f"vertex {x} not in 0..{n - 1}", number)
            key = (min(u, v), max(u, v))
            if key in seen and not allow_parallel:
                raise GraphFormatError("duplicate_edge", f"duplicate edge {key[0]}-{key[1]}", number)
            seen.add(key)
            edges.append((u, v))
        elif extra is not None and tag in extra:
            extra[tag].append((number, tokens[1:]))
        else:
            raise GraphFormatError("malformed_line", f"unknown record {tag!r}", number)
    if n is None:
        raise GraphFormatError("missing_header", "no 'g <n>' header")
    return n, edges


def parse_graph(text: str) -> Graph:
    n, edges = parse_graph_records(text)
    return Graph.from_edges(n, edges)


def serialize_graph(g: Graph, comment: Optional[str] = None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"g {g.n}")
    lines.extend(f"e {u} {v}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def part_components(g: Graph, labels: Sequence[Label], label: Label) -> List[List[int]]:
    """Connected components of the subgraph formed by one label, as sorted edge-index lists."""
    sub = nx.Graph()
    for i, (u, v) in enumerate(g.edges):
        if labels[i] is label:
            sub.add_edge(u, v, index=i)
    components = [
        sorted(i for _, _, i in sub.subgraph(nodes).edges(data="index"))
        for nodes in nx.connected_components(sub)
    ]
    return sorted(components)


def _component_vertices(g: Graph, component: Sequence[int]) -> Tuple[int, ...]:
    return tuple(sorted({x for i in component for x in g.edges[i]}))


def _check_linear(g: Graph, labels: Sequence[Label], part: Label, bound: KBound) -> List[Violation]:
    violations = []
    plain_matching = part is Label.MATCHING and bound == KBound(1)
    for component in part_components(g, labels, part):
        vertices = _component_vertices(g, component)
        degree: Dict[int, int] = {}
        for i in component:
            for x in g.edges[i]:
                degree[x] = degree.get(x, 0) + 1
        if plain_matching:
            for x in vertices:
                if degree[x] >= 2:
                    violations.append(Violation(
                        "adjacent_matching", part, (x,), f"adjacent matching edges at vertex {x}"))
            continue
        heavy = [x for x in vertices if degree[x] >= 3]
        for x in heavy:
            violations.append(Violation(
                "degree", part, (x,), f"vertex {x} has {part.value} degree {degree[x]} >= 3"))
        if len(component) >= len(vertices):
            violations.append(Violation("cycle", part, vertices, f"{part.value} cycle through {list(vertices)}"))
        elif not heavy and not bound.admits(len(component)):
            violations.append(Violation(
                "path_too_long", part, vertices, f"path length {len(component)} > {bound}"))
    return violations


def _check_star(g: Graph, labels: Sequence[Label], bound: KBound) -> List[Violation]:
    violations = []
    for component in part_components(g, labels, Label.FOREST):
        vertices = _component_vertices(g, component)
        degree: Dict[int, int] = {}
        for i in component:
            for x in g.edges[i]:
                degree[x] = degree.get(x, 0) + 1
        centers = [x for x in vertices if degree[x] == len(component)]
        is_star = len(component) == len(vertices) - 1 and (len(component) == 1 or len(centers) == 1)
        if not is_star:
            violations.append(Violation("non_star", Label.FOREST, vertices, f"component {list(vertices)} is not a star"))
        elif not bound.admits(len(component)):
            violations.append(Violation(
                "star_too_large", Label.FOREST, (centers[0],),
                f"star at {centers[0]} has {len(component)} edges > {bound}"))
    return violations


def validate_decomposition(d: Decomposition) -> ValidationResult:
    """
    Check a labeling against its spec.

    Args:
        d: Decomposition to check

    Returns:
        ValidationResult listing every violation (empty when valid)
    """
    g, labels, spec = d.graph, d.labels, d.spec
    if spec.kind == "star":
        violations = _check_linear(g, labels, Label.MATCHING, KBound(1)) + _check_star(g, labels, spec.k)
    else:
        violations = _check_linear(g, labels, Label.MATCHING, spec.l) + _check_linear(g, labels, Label.FOREST, spec.k)
    return ValidationResult(tuple(violations))


def certificate_from_decomposition(d: Decomposition) -> Dict[str, object]:
    return {
        "spec": {
            "kind": d.spec.kind,
            "k": d.spec.k.to_json(),
            "l": d.spec.l.to_json() if d.spec.l is not None else None,
        },
        "matching": [list(e) for e in d.edges_with(Label.MATCHING)],
        "forest": [list(e) for e in d.edges_with(Label.FOREST)],
    }


def decomposition_from_certificate(g: Graph, certificate: Dict[str, object]) -> Decomposition:
    """
    Rebuild a decomposition from certificate JSON data.

    Args:
        g: Graph the certificate refers to
        certificate: Parsed certificate mapping

    Returns:
        Decomposition over g
    """
    raw_spec = certificate["spec"]
    if raw_spec["kind"] == "star":
        spec = DecompositionSpec.star(raw_spec["k"])
    else:
        l = raw_spec.get("l")
        spec = DecompositionSpec.linear(raw_spec["k"], 1 if l is None else l)
    labels: List[Optional[Label]] = [None] * g.m
    for key, label in (("matching", Label.MATCHING), ("forest", Label.FOREST)):
        for pair in certificate[key]:
            u, v = pair
            if not g.has_edge(u, v):
                raise CertificateError("unknown_edge", f"edge {u}-{v} is not in the graph")
            i = g.edge_index(u, v)
            if labels[i] is not None:
                raise CertificateError("double_label", f"edge {u}-{v} listed twice")
            labels[i] = label
    missing = [g.edges[i] for i, lab in enumerate(labels) if lab is None]
    if missing:
        raise CertificateError("not_total", f"unlabeled edges {missing[:5]}")
    return Decomposition(g, tuple(labels), spec)
