import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from utils.exact_solver import (
    DEFAULT_MAX_EDGES,
    ExactSolver,
    SizeCapExceeded,
)
from utils.graph_core import (
    Decomposition,
    DecompositionSpec,
    Graph,
    InternalConsistencyError,
    Label,
    part_components,
    serialize_graph,
)
from utils.schemas import PinSidecarModel

logger = logging.getLogger(__name__)

M, F = Label.MATCHING, Label.FOREST


class GadgetParameterError(ValueError):
    def __init__(self, message: str):
        self.kind = "gadget_parameter"
        super().__init__(message)


class GadgetKind(str, Enum):
    M_FORCER = "m_forcer"
    F_FORCER = "f_forcer"
    OR = "or"
    REJECTOR = "rejector"
    VARIABLE = "variable"


# Pin vertex names that must have degree 1, and pin edge names with their endpoints.
PIN_VERTICES = {
    GadgetKind.M_FORCER: ("v",),
    GadgetKind.F_FORCER: ("v",),
    GadgetKind.OR: ("p1", "p2", "o"),
    GadgetKind.REJECTOR: ("n'", "n"),
    GadgetKind.VARIABLE: ("p1", "p2", "n"),
}


@dataclass(frozen=True, eq=False)
class PinnedGadget:
    """
    A gadget graph with its named pins.

    `pins` maps pin vertex names to indices, `pin_edges` maps pin edge names
    to vertex pairs. `roles` names the interior edges the canonical labeling
    needs, and `parts` lists embedded sub-gadgets with their vertex maps.
    """

    kind: GadgetKind
    k: int
    ell: Optional[int]
    graph: Graph
    pins: Dict[str, int]
    pin_edges: Dict[str, Tuple[int, int]]
    roles: Dict[str, Tuple[int, int]] = field(default_factory=dict)
    parts: Tuple[Tuple["PinnedGadget", Tuple[int, ...]], ...] = ()

    def edge_index(self, name: str) -> int:
        u, v = self.pin_edges[name]
        return self.graph.edge_index(u, v)

    def sidecar(self) -> Dict[str, object]:
        return {
            "kind": self.kind.value,
            "k": self.k,
            "ell": self.ell,
            "pins": dict(self.pins),
            "pin_edges": {name: list(pair) for name, pair in self.pin_edges.items()},
        }


class _Sketch:
    """Incremental vertex/edge collector; vertex indices follow allocation order."""

    def __init__(self):
        self.names: Dict[str, int] = {}
        self.count = 0
        self.edges: List[Tuple[int, int]] = []
        self.parts: List[Tuple[PinnedGadget, Tuple[int, ...]]] = []

    def vertex(self, name: str) -> int:
        if name not in self.names:
            self.names[name] = self.count
            self.count += 1
        return self.names[name]

    def vertices(self, names: Sequence[str]) -> None:
        for name in names:
            self.vertex(name)

    def edge(self, a: str, b: str) -> Tuple[int, int]:
        pair = (self.vertex(a), self.vertex(b))
        self.edges.append(pair)
        return pair

    def embed(self, gadget: PinnedGadget, prefix: str, identify: Dict[int, str]) -> Tuple[int, ...]:
        """Copy a gadget in, gluing the listed sub-gadget vertices onto named vertices."""
        mapping = []
        for x in range(gadget.graph.n):
            mapping.append(self.vertex(identify.get(x, f"{prefix}.{x}")))
        for u, v in gadget.graph.edges:
            self.edges.append((mapping[u], mapping[v]))
        vertex_map = tuple(mapping)
        self.parts.append((gadget, vertex_map))
        return vertex_map

    def finish(self, kind, k, ell, pins, pin_edges, roles=None) -> PinnedGadget:
        """`pins` is a list of vertex names, or a map from pin name to vertex name."""
        unique = sorted({(min(u, v), max(u, v)) for u, v in self.edges})
        graph = Graph.from_edges(self.count, unique)
        if not isinstance(pins, dict):
            pins = {name: name for name in pins}
        return PinnedGadget(
            kind=kind,
            k=k,
            ell=ell,
            graph=graph,
            pins={pin: self.names[name] for pin, name in pins.items()},
            pin_edges={name: (self.names[a], self.names[b]) for name, (a, b) in pin_edges.items()},
            roles={name: (self.names[a], self.names[b]) for name, (a, b) in (roles or {}).items()},
            parts=tuple(self.parts),
        )


def _half(prefix: str, depth: int) -> List[Tuple[str, str]]:
    """One wing of the k in 4..7 M-forcers: x{p} attaches to a ladder of `depth` rungs."""
    a = lambda i: f"{prefix}{i}"
    edges = [("x", f"x{prefix}"), (f"x{prefix}", f"y{prefix}"), (f"x{prefix}", a(1)),
             (a(1), a(2)), (a(1), a(3)), (a(2), a(3)), (a(2), a(4)), (a(3), a(5)), (a(4), a(5))]
    if depth == 3:
        edges += [(a(4), a(6)), (a(5), a(7)), (a(6), a(7))]
    return edges


def _m_forcer_table(k: int) -> Tuple[List[str], List[Tuple[str, str]], Tuple[str, str]]:
    if k == 3:
        order = ["v", "x", "y", "v1", "v2", "v3", "u1", "u2", "u3"]
        edges = [("y", "v"), ("x", "y"), ("x", "u1"), ("x", "v1"),
                 ("v1", "v2"), ("v1", "v3"), ("u1", "u2"), ("u1", "u3")]
        return order, edges, ("v", "y")
    if k in (4, 5, 6, 7):
        depth = 2 if k <= 5 else 3
        size = 5 if depth == 2 else 7
        order = ["v", "x", "xv", "yv", "xu", "yu"]
        order += [f"v{i}" for i in range(1, size + 1)] + [f"u{i}" for i in range(1, size + 1)]
        edges = [("x", "v")] + _half("v", depth) + _half("u", depth)
        return order, edges, ("v", "x")
    order = ["v", "x", "v1", "v2", "v3", "v4", "u1", "u2", "u3", "u4"]
    edges = [("x", "v"), ("x", "u1"), ("x", "v1")]
    for side in ("v", "u"):
        s = lambda i: f"{side}{i}"
        edges += [(s(1), s(2)), (s(1), s(3)), (s(2), s(3)), (s(2), s(4)), (s(3), s(4))]
    return order, edges, ("v", "x")


def _check_k(k) -> int:
    if not isinstance(k, int) or k < 3:
        raise GadgetParameterError(f"gadgets need an integer k >= 3, got {k!r}")
    return k


@lru_cache(maxsize=None)
def build_m_forcer(k: int) -> PinnedGadget:
    order, edges, pin_edge = _m_forcer_table(_check_k(k))
    sketch = _Sketch()
    sketch.vertices(order)
    for a, b in edges:
        sketch.edge(a, b)
    return sketch.finish(GadgetKind.M_FORCER, k, None, ["v"], {"e": pin_edge})


@lru_cache(maxsize=None)
def build_f_forcer(k: int, ell: int) -> PinnedGadget:
    _check_k(k)
    if not isinstance(ell, int) or not 1 <= ell <= k:
        raise GadgetParameterError(f"ell must satisfy 1 <= ell <= k={k}, got {ell!r}")
    forcer = build_m_forcer(k)
    pin = forcer.pins["v"]
    sketch = _Sketch()
    sketch.vertex("v")
    if ell == 1:
        sketch.vertex("v'")
        sketch.embed(forcer, "m1", {pin: "v'"})
        sketch.edge("v", "v'")
        return sketch.finish(GadgetKind.F_FORCER, k, ell, ["v"], {"e": ("v", "v'")})
    path = ["v"] + [f"v{i}" for i in range(1, ell)] + ["u"]
    sketch.vertices(path)
    for a, b in zip(path, path[1:]):
        sketch.edge(a, b)
    for i in range(1, ell):
        sketch.embed(forcer, f"m{i}", {pin: f"v{i}"})
    return sketch.finish(GadgetKind.F_FORCER, k, ell, ["v"], {"e": ("v", "v1")})


@lru_cache(maxsize=None)
def build_or(k: int) -> PinnedGadget:
    _check_k(k)
    forcer = build_f_forcer(k, k - 2)
    sketch = _Sketch()
    sketch.vertices(["p1", "p2", "o", "x", "v1", "v2"])
    sketch.edge("x", "o")
    sketch.edge("v1", "x")
    sketch.edge("v2", "x")
    sketch.edge("p1", "v1")
    sketch.edge("p2", "v2")
    sketch.embed(forcer, "g", {forcer.pins["v"]: "v2"})
    return sketch.finish(
        GadgetKind.OR, k, None, ["p1", "p2", "o"],
        {"e1": ("p1", "v1"), "e2": ("p2", "v2"), "f": ("x", "o")},
        roles={"v1x": ("v1", "x"), "v2x": ("v2", "x")},
    )


@lru_cache(maxsize=None)
def build_rejector(k: int) -> PinnedGadget:
    _check_k(k)
    forcer = build_f_forcer(k, k - 2)
    half = k // 2
    sketch = _Sketch()
    sketch.vertices(["n'", "n"])
    for j in range(1, half + 1):
        sketch.vertices([f"u{j}", f"w{j}", f"v{j}"])
    sketch.vertex(f"u{half + 1}")
    roles = {}
    for j in range(1, half + 1):
        roles[f"vw{j}"] = (f"v{j}", f"w{j}")
        roles[f"uw{j}"] = (f"u{j}", f"w{j}")
        roles[f"wu{j}"] = (f"w{j}", f"u{j + 1}")
        for a, b in roles[f"vw{j}"], roles[f"uw{j}"], roles[f"wu{j}"]:
            sketch.edge(a, b)
    sketch.edge("n'", "u1")
    sketch.edge("n", f"u{half + 1}")
    for j in range(1, half + 1):
        sketch.embed(forcer, f"g{j}", {forcer.pins["v"]: f"v{j}"})
    return sketch.finish(
        GadgetKind.REJECTOR, k, None, {"n'": "n'", "n": "n", "o": "u1"},
        {"e'": ("n'", "u1"), "e": ("n", f"u{half + 1}")},
        roles=roles,
    )


@lru_cache(maxsize=None)
def build_variable(k: int) -> PinnedGadget:
    or_gadget = build_or(k)
    rejector = build_rejector(k)
    sketch = _Sketch()
    sketch.vertices(["p1", "p2", "n"])
    sketch.embed(or_gadget, "O", {
        or_gadget.pins["p1"]: "p1", or_gadget.pins["p2"]: "p2",
        or_gadget.pins["o"]: "o", or_gadget.pin_edges["f"][0]: "n'",
    })
    sketch.embed(rejector, "R", {
        rejector.pins["n"]: "n", rejector.pins["n'"]: "n'", rejector.pins["o"]: "o",
    })
    v1 = f"O.{or_gadget.pin_edges['e1'][1]}"
    v2 = f"O.{or_gadget.pin_edges['e2'][1]}"
    u_last = f"R.{rejector.pin_edges['e'][1]}"
    return sketch.finish(
        GadgetKind.VARIABLE, k, None, ["p1", "p2", "n"],
        {"e1": ("p1", v1), "e2": ("p2", v2), "e": ("n", u_last), "e'": ("n'", "o")},
    )


def build_gadget(kind, k, ell: Optional[int] = None) -> PinnedGadget:
    """
    Build a gadget with deterministic vertex numbering (pins first).

    Args:
        kind: GadgetKind or its string value
        k: Path bound, integer >= 3
        ell: Forest path length, only for F_FORCER

    Returns:
        PinnedGadget
    """
    try:
        kind = GadgetKind(kind)
    except ValueError:
        raise GadgetParameterError(f"unknown gadget kind {kind!r}")
    if kind is not GadgetKind.F_FORCER and ell is not None:
        raise GadgetParameterError(f"ell is only meaningful for f_forcer, not {kind.value}")
    if kind is GadgetKind.M_FORCER:
        gadget = build_m_forcer(_check_k(k))
    elif kind is GadgetKind.F_FORCER:
        if ell is None:
            raise GadgetParameterError("f_forcer needs ell")
        gadget = build_f_forcer(k, ell)
    elif kind is GadgetKind.OR:
        gadget = build_or(_check_k(k))
    elif kind is GadgetKind.REJECTOR:
        gadget = build_rejector(_check_k(k))
    else:
        gadget = build_variable(_check_k(k))
    logger.info(f"Built {kind.value} gadget for k={k}: {gadget.graph.n} vertices, {gadget.graph.m} edges")
    return gadget


def write_gadget(gadget: PinnedGadget, path: str) -> str:
    """Write the graph file and its `<path>.pins.json` sidecar; returns the sidecar path."""
    comment = f"{gadget.kind.value} k={gadget.k}" + (f" ell={gadget.ell}" if gadget.ell else "")
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_graph(gadget.graph, comment))
    sidecar = f"{path}.pins.json"
    with open(sidecar, "w", encoding="utf-8") as f:
        f.write(PinSidecarModel.model_validate(gadget.sidecar()).model_dump_json(indent=2))
    return sidecar


def with_graph(gadget: PinnedGadget, graph: Graph) -> PinnedGadget:
    """Same pins on a different edge set (mutation testing)."""
    return PinnedGadget(gadget.kind, gadget.k, gadget.ell, graph, dict(gadget.pins), dict(gadget.pin_edges))


def mutations(gadget: PinnedGadget) -> Iterator[Tuple[str, PinnedGadget]]:
    """Single-edge deletions and additions that leave pin vertices and pin edges alone."""
    g = gadget.graph
    pinned = {gadget.pins[name] for name in PIN_VERTICES[gadget.kind]}
    pin_pairs = {tuple(sorted(pair)) for pair in gadget.pin_edges.values()}
    for i, (u, v) in enumerate(g.edges):
        if (u, v) in pin_pairs:
            continue
        remaining = g.edges[:i] + g.edges[i + 1:]
        yield f"delete {u}-{v}", with_graph(gadget, Graph.from_edges(g.n, remaining))
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if u in pinned or v in pinned or g.has_edge(u, v):
                continue
            yield f"add {u}-{v}", with_graph(gadget, Graph.from_edges(g.n, g.edges + ((u, v),)))


# Canonical decompositions, built without search except for one M-forcer solve per k.

OR_CASES = {
    (M, M): {"f": M, "v1x": F, "v2x": F},
    (F, M): {"f": F, "v1x": M, "v2x": F},
    (M, F): {"f": F, "v1x": F, "v2x": M},
    (F, F): {"f": F, "v1x": F, "v2x": M},
}


@lru_cache(maxsize=None)
def _m_forcer_witness(k: int) -> Tuple[Label, ...]:
    gadget = build_m_forcer(k)
    found = ExactSolver(max(DEFAULT_MAX_EDGES, gadget.graph.m)).solve(gadget.graph, DecompositionSpec.linear(k, 1))
    if found is None:
        raise InternalConsistencyError(f"m_forcer for k={k} admits no decomposition")
    return found.labels


def _relabel(labels: Dict[Tuple[int, int], Label], vertex_map, sub: Dict[Tuple[int, int], Label]):
    for (a, b), label in sub.items():
        u, v = vertex_map[a], vertex_map[b]
        labels[(min(u, v), max(u, v))] = label


def _edge_labels(gadget: PinnedGadget, case: Tuple[Label, ...]) -> Dict[Tuple[int, int], Label]:
    g = gadget.graph
    labels: Dict[Tuple[int, int], Label] = {}

    def put(pair, label):
        u, v = pair
        labels[(min(u, v), max(u, v))] = label

    if gadget.kind is GadgetKind.M_FORCER:
        return dict(zip(g.edges, _m_forcer_witness(gadget.k)))
    if gadget.kind is GadgetKind.VARIABLE:
        e1, e2, e = case
        if F in (e1, e2) and e is F:
            raise GadgetParameterError("a clashing pair {e_i, e} cannot both lie in the forest")
        (or_gadget, or_map), (rejector, rej_map) = gadget.parts
        f = OR_CASES[(e1, e2)]["f"]
        _relabel(labels, or_map, _edge_labels(or_gadget, (e1, e2)))
        _relabel(labels, rej_map, _edge_labels(rejector, (f, e)))
        return labels
    for sub, vertex_map in gadget.parts:
        _relabel(labels, vertex_map, _edge_labels(sub, ()))
    if gadget.kind is GadgetKind.F_FORCER:
        for pair in g.edges:
            labels.setdefault(pair, F)
    elif gadget.kind is GadgetKind.OR:
        e1, e2 = case
        put(gadget.pin_edges["e1"], e1)
        put(gadget.pin_edges["e2"], e2)
        for name, label in OR_CASES[(e1, e2)].items():
            put(gadget.pin_edges[name] if name == "f" else gadget.roles[name], label)
    elif gadget.kind is GadgetKind.REJECTOR:
        e_prime, e = case
        if e_prime is F and e is F:
            raise GadgetParameterError("a rejector needs e' or e in the matching")
        put(gadget.pin_edges["e'"], e_prime)
        put(gadget.pin_edges["e"], e)
        matched = "uw" if e_prime is F else ("wu" if e is F else "vw")
        for name, pair in gadget.roles.items():
            put(pair, M if name.startswith(matched) else F)
    return labels


def canonical_labeling(gadget: PinnedGadget, case: Tuple[Label, ...] = ()) -> Tuple[Label, ...]:
    """
    Construct a decomposition of a gadget for the given pin-edge case.

    Args:
        gadget: Gadget to label
        case: OR (e1, e2); REJECTOR (e', e); VARIABLE (e1, e2, e); empty otherwise

    Returns:
        Labels aligned with gadget.graph.edges
    """
    labels = _edge_labels(gadget, tuple(case))
    return tuple(labels[pair] for pair in gadget.graph.edges)


# Verification

@dataclass
class VerificationReport:
    kind: GadgetKind
    k: int
    ell: Optional[int]
    status: str
    failing_clause: Optional[str] = None
    witness: Optional[Tuple[Label, ...]] = None
    core_labelings: List[Dict[str, str]] = field(default_factory=list)
    full_count: Optional[int] = None
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> Dict[str, object]:
        return {
            "kind": self.kind.value,
            "k": self.k,
            "ell": self.ell,
            "status": self.status,
            "failing_clause": self.failing_clause,
            "witness": [label.value for label in self.witness] if self.witness else None,
            "core_labelings": self.core_labelings,
            "full_count": self.full_count,
            "detail": self.detail,
        }


def _path_length(g: Graph, labels: Sequence[Label], edge: int) -> int:
    """Number of FOREST edges in the component holding `edge` (0 if edge is MATCHING)."""
    if labels[edge] is not F:
        return 0
    for component in part_components(g, labels, F):
        if edge in component:
            return len(component)
    return 0


class GadgetVerifier:
    def __init__(self, max_edges: int = DEFAULT_MAX_EDGES):
        """
        Initialize the gadget verifier.

        Args:
            max_edges: Size cap handed to the exact solver
        """
        self.max_edges = max_edges
        self.solver = ExactSolver(max_edges)
        logger.info(f"Gadget verifier initialized (max_edges={max_edges})")

    def verify(self, gadget: PinnedGadget) -> VerificationReport:
        """
        Enumerate every decomposition of the gadget and check its defining property.

        Args:
            gadget: Gadget to verify

        Returns:
            VerificationReport with status pass, fail or size_cap
        """
        report = VerificationReport(gadget.kind, gadget.k, gadget.ell, "pass")
        bad_pin = self._pin_degree_problem(gadget)
        if bad_pin:
            report.status, report.failing_clause = "fail", bad_pin
            return report
        spec = DecompositionSpec.linear(gadget.k, 1)
        try:
            decompositions = list(self.solver.iter_decompositions(gadget.graph, spec))
        except SizeCapExceeded as e:
            report.status = "size_cap"
            report.detail = f"{str(e)}; verifiable at desk scale: {self.verifiable_ks(gadget.kind, gadget.ell)}"
            logger.warning(f"Verification of {gadget.kind.value} k={gadget.k} skipped: {report.detail}")
            return report
        report.full_count = len(decompositions)
        check = {
            GadgetKind.M_FORCER: self._check_m_forcer,
            GadgetKind.F_FORCER: self._check_f_forcer,
            GadgetKind.OR: self._check_or,
            GadgetKind.REJECTOR: self._check_rejector,
            GadgetKind.VARIABLE: self._check_variable,
        }[gadget.kind]
        check(gadget, decompositions, report)
        logger.info(f"Verified {gadget.kind.value} k={gadget.k}: {report.status} ({report.full_count} decompositions)")
        return report

    def verifiable_ks(self, kind: GadgetKind, ell: Optional[int] = None, k_max: int = 12) -> List[int]:
        ks = []
        for k in range(3, k_max + 1):
            if kind is GadgetKind.F_FORCER and (ell is None or ell > k):
                continue
            gadget = build_gadget(kind, k, ell if kind is GadgetKind.F_FORCER else None)
            if gadget.graph.m <= self.max_edges:
                ks.append(k)
        return ks

    @staticmethod
    def _pin_degree_problem(gadget: PinnedGadget) -> Optional[str]:
        g = gadget.graph
        for name in PIN_VERTICES[gadget.kind]:
            if g.degree(gadget.pins[name]) != 1:
                return f"pin {name} must have degree 1"
        for name, (u, v) in gadget.pin_edges.items():
            if not g.has_edge(u, v):
                return f"pin edge {name} missing"
        return None

    @staticmethod
    def _fail(report: VerificationReport, clause: str, witness=None) -> None:
        report.status = "fail"
        report.failing_clause = clause
        report.witness = witness

    def _check_m_forcer(self, gadget, decompositions, report) -> None:
        if not decompositions:
            return self._fail(report, "no decomposition exists")
        e = gadget.edge_index("e")
        for labels in decompositions:
            if labels[e] is not M:
                return self._fail(report, "pin edge e lies in the forest", labels)

    def _check_f_forcer(self, gadget, decompositions, report) -> None:
        if not decompositions:
            return self._fail(report, "no decomposition exists")
        e = gadget.edge_index("e")
        for labels in decompositions:
            length = _path_length(gadget.graph, labels, e)
            if length != gadget.ell:
                return self._fail(report, f"pin v lies on a forest path of length {length}, expected {gadget.ell}", labels)

    def _check_or(self, gadget, decompositions, report) -> None:
        e1, e2, f = (gadget.edge_index(name) for name in ("e1", "e2", "f"))
        cores = {}
        for labels in decompositions:
            cores.setdefault((labels[e1], labels[e2], labels[f]), labels)
        report.core_labelings = [
            {"e1": a.value, "e2": b.value, "f": c.value} for a, b, c in sorted(cores, key=lambda t: [x.value for x in t])
        ]
        for a in (M, F):
            for b in (M, F):
                if not any(core[:2] == (a, b) for core in cores):
                    return self._fail(report, f"no decomposition with e1={a.value}, e2={b.value}")
        for (a, b, c), labels in cores.items():
            if a is M and b is M and c is not M:
                return self._fail(report, "e1, e2 in the matching but f in the forest", labels)
            if (a is F or b is F) and c is not F:
                return self._fail(report, "an input edge in the forest but f in the matching", labels)

    def _check_rejector(self, gadget, decompositions, report) -> None:
        e_prime, e = gadget.edge_index("e'"), gadget.edge_index("e")
        short = {}
        for labels in decompositions:
            if labels[e_prime] is F and labels[e] is F:
                return self._fail(report, "both e' and e lie in the forest", labels)
            if _path_length(gadget.graph, labels, e_prime) <= 1 and _path_length(gadget.graph, labels, e) <= 1:
                short.setdefault((labels[e_prime], labels[e]), labels)
        for case in ((F, M), (M, F), (M, M)):
            if case not in short:
                return self._fail(report, f"no decomposition with e'={case[0].value}, e={case[1].value} and short pin paths")

    def _check_variable(self, gadget, decompositions, report) -> None:
        e1, e2, e = (gadget.edge_index(name) for name in ("e1", "e2", "e"))
        realized = {}
        for labels in decompositions:
            realized.setdefault((labels[e1], labels[e2], labels[e]), labels)
        for a in (M, F):
            for b in (M, F):
                for c in (M, F):
                    clash = c is F and F in (a, b)
                    if clash and (a, b, c) in realized:
                        return self._fail(report, f"clashing partition e1={a.value}, e2={b.value}, e={c.value} extends",
                                          realized[(a, b, c)])
                    if not clash and (a, b, c) not in realized:
                        return self._fail(report, f"partition e1={a.value}, e2={b.value}, e={c.value} does not extend")


def verify_gadget(gadget: PinnedGadget, max_edges: int = DEFAULT_MAX_EDGES) -> VerificationReport:
    return GadgetVerifier(max_edges).verify(gadget)


def as_decomposition(gadget: PinnedGadget, labels: Sequence[Label]) -> Decomposition:
    return Decomposition(gadget.graph, tuple(labels), DecompositionSpec.linear(gadget.k, 1))
