import itertools
import logging
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from utils.gadgets import (
    PinnedGadget,
    build_f_forcer,
    build_variable,
    canonical_labeling,
)
from utils.graph_core import (
    Decomposition,
    DecompositionSpec,
    Graph,
    InternalConsistencyError,
    Label,
    validate_decomposition,
)

logger = logging.getLogger(__name__)

DEFAULT_MAX_VARS = 24

Assignment = Dict[int, bool]


class CnfFormatError(ValueError):
    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


class UnsatisfiedClauseError(ValueError):
    def __init__(self, clause: int, literals: Sequence[int]):
        self.kind = "unsatisfied_clause"
        self.clause = clause
        super().__init__(f"unsatisfied_clause: clause {clause + 1} {list(literals)} has no true literal")


@dataclass(frozen=True)
class Occurrences:
    positive: Tuple[int, int]
    negative: int


@dataclass(frozen=True)
class CnfInstance:
    """A (<=3,3)-SAT instance with 1-based variables and 0-based clause positions."""

    n_vars: int
    clauses: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for i, clause in enumerate(self.clauses):
            if len(clause) not in (2, 3):
                raise CnfFormatError("clause_size", f"clause {i + 1} has {len(clause)} literals, expected 2 or 3")
            if len(set(clause)) != len(clause):
                raise CnfFormatError("duplicate_literal", f"clause {i + 1} repeats a literal")
            for literal in clause:
                if literal == 0 or abs(literal) > self.n_vars:
                    raise CnfFormatError("variable_out_of_range", f"literal {literal} in clause {i + 1}")
        for x in range(1, self.n_vars + 1):
            positive = [i for i, c in enumerate(self.clauses) if x in c]
            negative = [i for i, c in enumerate(self.clauses) if -x in c]
            if len(positive) != 2 or len(negative) != 1:
                raise CnfFormatError(
                    "occurrence_count",
                    f"variable {x} appears positively in {len(positive)} and negatively in {len(negative)} clauses "
                    f"(expected 2 and 1)",
                )

    @property
    def occurrences(self) -> Dict[int, Occurrences]:
        result = {}
        for x in range(1, self.n_vars + 1):
            positive = [i for i, c in enumerate(self.clauses) if x in c]
            negative = [i for i, c in enumerate(self.clauses) if -x in c]
            result[x] = Occurrences((positive[0], positive[1]), negative[0])
        return result


def load_instance(text: str) -> CnfInstance:
    """
    Parse DIMACS CNF text into a validated instance.

    Args:
        text: DIMACS contents ('c' comments, 'p cnf <vars> <clauses>', 0-terminated clauses)

    Returns:
        CnfInstance
    """
    n_vars = None
    expected = None
    clauses: List[Tuple[int, ...]] = []
    current: List[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf" or n_vars is not None:
                raise CnfFormatError("malformed_line", f"invalid problem line: {line}")
            try:
                n_vars, expected = int(parts[2]), int(parts[3])
            except ValueError:
                raise CnfFormatError("malformed_line", f"invalid problem line: {line}")
            continue
        if n_vars is None:
            raise CnfFormatError("malformed_line", "clause before the 'p cnf' line")
        for token in line.split():
            try:
                literal = int(token)
            except ValueError:
                raise CnfFormatError("malformed_line", f"not a literal: {token!r}")
            if literal == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(literal)
    if n_vars is None:
        raise CnfFormatError("malformed_line", "missing 'p cnf' line")
    if current:
        raise CnfFormatError("malformed_line", "last clause is not terminated by 0")
    if expected != len(clauses):
        raise CnfFormatError("malformed_line", f"header announces {expected} clauses, found {len(clauses)}")
    return CnfInstance(n_vars, tuple(clauses))


def serialize_instance(inst: CnfInstance) -> str:
    lines = [f"p cnf {inst.n_vars} {len(inst.clauses)}"]
    lines.extend(" ".join(str(lit) for lit in clause) + " 0" for clause in inst.clauses)
    return "\n".join(lines) + "\n"


def evaluate(inst: CnfInstance, assignment: Assignment) -> Optional[int]:
    """Index of the first clause the assignment leaves false, or None if all are satisfied."""
    for i, clause in enumerate(inst.clauses):
        if not any(assignment[abs(lit)] == (lit > 0) for lit in clause):
            return i
    return None


def brute_force_sat(inst: CnfInstance, max_vars: int = DEFAULT_MAX_VARS) -> Optional[Assignment]:
    if inst.n_vars > max_vars:
        raise ValueError(f"too_many_variables: {inst.n_vars} > {max_vars}")
    for values in itertools.product((False, True), repeat=inst.n_vars):
        assignment = {x + 1: value for x, value in enumerate(values)}
        if evaluate(inst, assignment) is None:
            return assignment
    return None


def random_instance(n_vars: int, seed: int, attempts: int = 1000) -> CnfInstance:
    """
    Draw a (<=3,3)-SAT instance: every variable's three occurrences shuffled into 2- and 3-clauses.

    Args:
        n_vars: Number of variables (0 or at least 2)
        seed: Random seed; equal seeds give equal instances
        attempts: Reshuffles allowed before giving up

    Returns:
        CnfInstance
    """
    if n_vars == 1 or n_vars < 0:
        raise ValueError("random instances need 0 or at least 2 variables")
    rng = random.Random(seed)
    slots = [lit for x in range(1, n_vars + 1) for lit in (x, x, -x)]
    for _ in range(attempts):
        pairs = rng.randint(0, n_vars // 2)
        sizes = [2] * (3 * pairs) + [3] * (n_vars - 2 * pairs)
        rng.shuffle(sizes)
        rng.shuffle(slots)
        clauses, start = [], 0
        for size in sizes:
            clauses.append(tuple(slots[start:start + size]))
            start += size
        if all(len(set(c)) == len(c) for c in clauses):
            return CnfInstance(n_vars, tuple(clauses))
    raise ValueError(f"no valid instance found for {n_vars} variables after {attempts} attempts")


@dataclass(frozen=True)
class VariablePins:
    variable: int
    clauses: Tuple[int, int, int]
    inputs: Tuple[int, int, int]
    input_edges: Tuple[Tuple[int, int], Tuple[int, int], Tuple[int, int]]
    vertex_map: Tuple[int, ...]


@dataclass(frozen=True)
class ClausePins:
    clause: int
    vertex: int
    connectors: Tuple[Tuple[int, Tuple[int, int]], ...]
    forcer_edge: Optional[Tuple[int, int]]
    forcer_map: Optional[Tuple[int, ...]]


@dataclass(frozen=True)
class ReductionPinMap:
    k: int
    variables: Tuple[VariablePins, ...]
    clauses: Tuple[ClausePins, ...]

    def input_edge(self, variable: int, clause: int) -> Tuple[int, int]:
        pins = self.variables[variable - 1]
        return pins.input_edges[pins.clauses.index(clause)]


@lru_cache(maxsize=None)
def _clause_forcer(k: int) -> PinnedGadget:
    return build_f_forcer(k, 1)


class ReductionBuilder:
    def __init__(self, k: int):
        """
        Initialize the SAT-to-decomposition reduction for one path bound.

        Args:
            k: Path bound, integer >= 3
        """
        self.k = k
        self.gadget = build_variable(k)
        self.forcer = _clause_forcer(k)
        logger.info(f"Reduction builder initialized for k={k}")

    def build(self, inst: CnfInstance) -> Tuple[Graph, ReductionPinMap]:
        """
        Build the reduction graph: clause vertices first, then one variable gadget per variable,
        then one (1F,k)-forcer per 2-clause glued on its clause vertex.

        Args:
            inst: Validated instance

        Returns:
            Tuple of graph and pin map
        """
        edges: List[Tuple[int, int]] = []
        count = len(inst.clauses)
        occurrences = inst.occurrences
        gadget = self.gadget
        variables = []
        connectors: Dict[int, List[Tuple[int, Tuple[int, int]]]] = {i: [] for i in range(len(inst.clauses))}
        for x in range(1, inst.n_vars + 1):
            vertex_map = tuple(range(count, count + gadget.graph.n))
            count += gadget.graph.n
            edges.extend((vertex_map[u], vertex_map[v]) for u, v in gadget.graph.edges)
            occ = occurrences[x]
            clause_ids = (occ.positive[0], occ.positive[1], occ.negative)
            inputs = tuple(vertex_map[gadget.pins[name]] for name in ("p1", "p2", "n"))
            input_edges = tuple(
                (vertex_map[gadget.pin_edges[name][0]], vertex_map[gadget.pin_edges[name][1]])
                for name in ("e1", "e2", "e")
            )
            for clause, pin, literal in zip(clause_ids, inputs, (x, x, -x)):
                connector = (clause, pin)
                edges.append(connector)
                connectors[clause].append((literal, connector))
            variables.append(VariablePins(x, clause_ids, inputs, input_edges, vertex_map))
        clauses = []
        forcer = self.forcer
        pin = forcer.pins["v"]
        for i, clause in enumerate(inst.clauses):
            forcer_edge, forcer_map = None, None
            if len(clause) == 2:
                mapping = []
                for y in range(forcer.graph.n):
                    if y == pin:
                        mapping.append(i)
                    else:
                        mapping.append(count)
                        count += 1
                forcer_map = tuple(mapping)
                edges.extend((forcer_map[u], forcer_map[v]) for u, v in forcer.graph.edges)
                a, b = forcer.pin_edges["e"]
                forcer_edge = (forcer_map[a], forcer_map[b])
            ordered = tuple(sorted(connectors[i]))
            clauses.append(ClausePins(i, i, ordered, forcer_edge, forcer_map))
        graph = Graph.from_edges(count, edges)
        pins = ReductionPinMap(self.k, tuple(variables), tuple(clauses))
        for c in clauses:
            if graph.degree(c.vertex) != 3:
                raise InternalConsistencyError(f"clause vertex {c.vertex} has degree {graph.degree(c.vertex)}")
        logger.info(f"Reduction graph for {inst.n_vars} variables, {len(inst.clauses)} clauses: "
                    f"{graph.n} vertices, {graph.m} edges")
        return graph, pins

    def assignment_to_decomposition(self, inst: CnfInstance, assignment: Assignment) -> Decomposition:
        """
        Turn a satisfying assignment into a decomposition of the reduction graph.

        Args:
            inst: Instance
            assignment: Variable -> truth value

        Returns:
            Decomposition validated under LINEAR(k,1)
        """
        failed = evaluate(inst, assignment)
        if failed is not None:
            raise UnsatisfiedClauseError(failed, inst.clauses[failed])
        graph, pins = self.build(inst)
        labels: Dict[Tuple[int, int], Label] = {}

        def put(pair, label):
            u, v = pair
            labels[(min(u, v), max(u, v))] = label

        input_labels: Dict[Tuple[int, int], Label] = {}
        for i, clause in enumerate(inst.clauses):
            witness = min((lit for lit in clause if assignment[abs(lit)] == (lit > 0)), key=abs)
            for literal, connector in pins.clauses[i].connectors:
                chosen = literal == witness
                put(connector, Label.MATCHING if chosen else Label.FOREST)
                input_labels[(literal, i)] = Label.FOREST if chosen else Label.MATCHING
            forcer_map = pins.clauses[i].forcer_map
            if forcer_map is not None:
                for (u, v), label in zip(self.forcer.graph.edges, canonical_labeling(self.forcer)):
                    put((forcer_map[u], forcer_map[v]), label)
        for var in pins.variables:
            literals = (var.variable, var.variable, -var.variable)
            case = tuple(input_labels[(lit, c)] for lit, c in zip(literals, var.clauses))
            for (u, v), label in zip(self.gadget.graph.edges, canonical_labeling(self.gadget, case)):
                put((var.vertex_map[u], var.vertex_map[v]), label)
        decomposition = Decomposition(graph, tuple(labels[e] for e in graph.edges), DecompositionSpec.linear(self.k, 1))
        verdict = validate_decomposition(decomposition)
        if not verdict.valid:
            raise InternalConsistencyError(f"constructed decomposition is invalid: {verdict.violations[0].detail}")
        return decomposition

    def decomposition_to_assignment(self, inst: CnfInstance, pins: ReductionPinMap, d: Decomposition) -> Assignment:
        """
        Read a truth assignment off a decomposition: x is TRUE iff a positive input edge is in the forest.

        Args:
            inst: Instance
            pins: Pin map of the reduction graph
            d: Valid decomposition of the reduction graph

        Returns:
            Satisfying assignment
        """
        verdict = validate_decomposition(d)
        if not verdict.valid:
            raise ValueError(f"invalid_decomposition: {verdict.violations[0].detail}")
        assignment = {}
        for var in pins.variables:
            positive = [d.label_of(*edge) for edge in var.input_edges[:2]]
            assignment[var.variable] = Label.FOREST in positive
        failed = evaluate(inst, assignment)
        if failed is not None:
            raise InternalConsistencyError(f"decoded assignment leaves clause {failed + 1} unsatisfied")
        return assignment


def build_reduction_graph(inst: CnfInstance, k: int) -> Tuple[Graph, ReductionPinMap]:
    return ReductionBuilder(k).build(inst)


def assignment_to_decomposition(inst: CnfInstance, k: int, assignment: Assignment) -> Decomposition:
    return ReductionBuilder(k).assignment_to_decomposition(inst, assignment)


def decomposition_to_assignment(inst: CnfInstance, pins: ReductionPinMap, d: Decomposition) -> Assignment:
    return ReductionBuilder(pins.k).decomposition_to_assignment(inst, pins, d)


def clashing_variables(pins: ReductionPinMap, d: Decomposition) -> List[int]:
    """Variables with a positive input edge and the negative input edge both in the forest."""
    clashes = []
    for var in pins.variables:
        e1, e2, e = (d.label_of(*edge) for edge in var.input_edges)
        if e is Label.FOREST and Label.FOREST in (e1, e2):
            clashes.append(var.variable)
    return clashes

