import itertools

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tests.strategies import bipartite_multigraphs, bounded_multigraphs, multigraphs, small_gap_sets
from utils.graph_core import GraphFormatError, MultiGraph
from utils.sggf_solver import (
    GadgetPiece,
    GapSet,
    NotSmallGapError,
    PieceSearchCapExceeded,
    SggfInstance,
    SggfSolver,
    bipartite_matching_size,
    build_vertex_gadget,
    is_small_gap,
    max_matching,
    parse_sggf,
    serialize_sggf,
    solve_sggf,
    solve_sggf_oracle,
    validate_vertex_gadget,
)


def multigraph_of(nx_graph) -> MultiGraph:
    return MultiGraph(nx_graph.number_of_nodes(), tuple(nx_graph.edges()))


def instance(n, edges, sets) -> SggfInstance:
    return SggfInstance(MultiGraph(n, tuple(edges)), tuple(GapSet.of(s) for s in sets))


def is_matching(g: MultiGraph, ids) -> bool:
    ends = [x for i in ids for x in g.edges[i]]
    return len(ends) == len(set(ends))


@pytest.mark.parametrize(
    "members, expected",
    [((), True), ((1,), True), ((0, 2, 4), True), ((0, 1, 3), True), ((0, 3), False), ((0, 1, 4), False)],
)
def test_is_small_gap(members, expected):
    assert is_small_gap(members) is expected


class TestGapSet:
    def test_runs(self):
        assert GapSet.of([4, 0, 1, 3]).runs() == [(0, 1), (3, 4)]

    def test_trimmed(self):
        assert GapSet.of([1, 3, 5]).trimmed(3).members == (1, 3)

    def test_negative_members(self):
        with pytest.raises(ValueError):
            GapSet.of([-1, 0])


class TestMatching:
    @pytest.mark.parametrize(
        "nx_graph, size",
        [(nx.cycle_graph(3), 1), (nx.cycle_graph(6), 3), (nx.petersen_graph(), 5), (nx.empty_graph(3), 0)],
    )
    def test_known_sizes(self, nx_graph, size):
        g = multigraph_of(nx_graph)
        found = max_matching(g)
        assert len(found) == size
        assert is_matching(g, found)

    def test_parallel_edges_pick_lowest_id(self):
        g = MultiGraph(2, ((0, 1), (1, 0), (0, 1)))
        assert max_matching(g) == [0]

    @given(multigraphs(max_vertices=8, max_edges=14))
    def test_against_networkx(self, g):
        found = max_matching(g)
        assert is_matching(g, found)
        simple = nx.Graph()
        simple.add_nodes_from(range(g.n))
        simple.add_edges_from(g.edges)
        assert len(found) == len(nx.max_weight_matching(simple, maxcardinality=True))

    @given(bipartite_multigraphs())
    def test_bipartite_agrees(self, sample):
        g, left = sample
        assert bipartite_matching_size(g, left) == len(max_matching(g))

    def test_bipartite_rejects_inner_edges(self):
        with pytest.raises(ValueError):
            bipartite_matching_size(MultiGraph(3, ((0, 1), (1, 2))), [0, 1])


class TestGadgets:
    def test_piece_shape(self):
        piece = GadgetPiece(4, 1, 3, True)
        assert (piece.core, piece.slack, piece.size, piece.port) == (1, 2, 8, 7)

    def test_interval_is_one_piece_with_port(self):
        gadget = build_vertex_gadget(4, GapSet.of([1, 2, 3]))
        assert gadget.pieces == (GadgetPiece(4, 1, 3, True),)

    def test_stride_two_has_no_port(self):
        gadget = build_vertex_gadget(4, GapSet.of([0, 2, 4]))
        assert gadget.pieces == (GadgetPiece(4, 0, 4, False),)

    def test_mixed_steps_split_into_runs(self):
        gadget = build_vertex_gadget(5, GapSet.of([0, 1, 3, 4]))
        assert [(p.low, p.high) for p in gadget.pieces] == [(0, 1), (3, 4)]

    def test_set_above_degree_gives_no_piece(self):
        assert build_vertex_gadget(2, GapSet.of([3, 4])).pieces == ()

    def test_large_gap_is_refused(self):
        with pytest.raises(NotSmallGapError) as info:
            build_vertex_gadget(3, GapSet.of([0, 3]))
        assert info.value.kind == "not_small_gap"

    def test_hull_spans_the_whole_set(self):
        gadget = build_vertex_gadget(3, GapSet.of([0, 1, 3]))
        assert gadget.hull() == GadgetPiece(3, 0, 3, True)
        assert build_vertex_gadget(4, GapSet.of([0, 2, 4])).hull() == GadgetPiece(4, 0, 4, True)

    @pytest.mark.parametrize("degree", range(0, 7))
    def test_every_small_gap_set_is_realized(self, degree):
        values = range(degree + 1)
        for size in range(1, degree + 2):
            for members in itertools.combinations(values, size):
                if not is_small_gap(members):
                    continue
                gadget = build_vertex_gadget(degree, GapSet.of(members))
                assert validate_vertex_gadget(gadget) == [], members


class TestSolver:
    def test_theta_has_no_perfect_matching(self, data_dir):
        inst = parse_sggf((data_dir / "theta.sggf").read_text())
        assert solve_sggf(inst) is None
        assert solve_sggf_oracle(inst) is None

    @pytest.mark.parametrize(
        "n, edges, sets, expected",
        [
            (1, [], [[0]], []),
            (2, [(0, 1)], [[1], [1]], [0]),
            (3, [(0, 1), (1, 2)], [[1], [2], [1]], [0, 1]),
        ],
    )
    def test_oracle_examples(self, n, edges, sets, expected):
        inst = instance(n, edges, sets)
        assert solve_sggf_oracle(inst) == expected
        assert solve_sggf(inst) == expected

    def test_empty_instance(self):
        assert solve_sggf(instance(0, [], [])) == []

    def test_parallel_edges(self):
        inst = instance(2, [(0, 1), (0, 1), (0, 1)], [[2], [2]])
        found = solve_sggf(inst)
        assert found is not None and len(found) == 2
        assert inst.satisfied_by(found)

    def test_stride_two_sets(self):
        # a 4-cycle where every vertex must keep an even degree
        inst = instance(4, [(0, 1), (1, 2), (2, 3), (3, 0)], [[0, 2]] * 4)
        assert solve_sggf(inst) is not None
        odd = instance(3, [(0, 1), (1, 2), (2, 0)], [[1]] * 3)
        assert solve_sggf(odd) is None

    def test_interior_gap_uses_piece_combinations(self):
        inst = instance(4, [(0, 1), (0, 2), (0, 3)], [[0, 1, 3], [1], [1], [1]])
        assert sorted(solve_sggf(inst)) == [0, 1, 2]

    def test_oracle_cap(self):
        inst = instance(2, [(0, 1)] * 5, [[0]] * 2)
        with pytest.raises(ValueError, match="too_many_edges"):
            solve_sggf_oracle(inst, max_edges=4)

    @settings(max_examples=80)
    @given(st.data())
    def test_matches_oracle(self, data):
        g = data.draw(multigraphs(max_vertices=6, max_edges=8))
        sets = tuple(GapSet.of(data.draw(small_gap_sets(top=4))) for _ in range(g.n))
        inst = SggfInstance(g, sets)
        found = solve_sggf(inst)
        expected = solve_sggf_oracle(inst)
        assert (found is None) == (expected is None)
        if found is not None:
            assert inst.satisfied_by(found)


def count_matchings(monkeypatch) -> list:
    calls = []
    original = SggfSolver._solve_with

    def counting(inst, incident, pieces):
        calls.append(tuple(pieces))
        return original(inst, incident, pieces)

    monkeypatch.setattr(SggfSolver, "_solve_with", staticmethod(counting))
    return calls


def disjoint_k4s_with_a_bad_edge(copies: int) -> SggfInstance:
    edges = [(4 * i + a, 4 * i + b) for i in range(copies) for a, b in itertools.combinations(range(4), 2)]
    u, v = 4 * copies, 4 * copies + 1
    sets = [[0, 1, 3]] * (4 * copies) + [[1], [0]]
    return instance(4 * copies + 2, edges + [(u, v)], sets)


class TestPieceSearch:
    def test_infeasible_relaxation_needs_one_matching(self, monkeypatch):
        calls = count_matchings(monkeypatch)
        assert solve_sggf(disjoint_k4s_with_a_bad_edge(4)) is None
        assert len(calls) == 1

    def test_feasible_relaxation_that_already_fits_needs_one_matching(self, monkeypatch):
        calls = count_matchings(monkeypatch)
        inst = instance(4, [(0, 1), (0, 2), (0, 3)], [[0, 1, 3], [0], [0], [0]])
        assert solve_sggf(inst) == []
        assert len(calls) == 1

    def test_gap_vertex_branches_over_its_pieces(self, monkeypatch):
        # the hull admits degree 2 at the centre, which its own set forbids
        inst = instance(4, [(0, 1), (0, 2), (0, 3)], [[0, 1, 3], [1], [1], [0]])
        calls = count_matchings(monkeypatch)
        assert solve_sggf(inst) is None
        assert solve_sggf_oracle(inst) is None
        assert len(calls) == 3

    def test_cap_is_enforced(self):
        inst = instance(4, [(0, 1), (0, 2), (0, 3)], [[0, 1, 3], [1], [1], [0]])
        with pytest.raises(PieceSearchCapExceeded) as info:
            SggfSolver(max_matchings=1).solve(inst)
        assert info.value.kind == "size_cap"
        assert info.value.cap == 1
        assert SggfSolver(max_matchings=3).solve(inst) is None

    @pytest.mark.slow
    @settings(max_examples=10000)
    @given(st.data())
    def test_matches_oracle_at_scale(self, data):
        g = data.draw(bounded_multigraphs(max_degree=5, max_vertices=6, max_edges=8))
        sets = tuple(GapSet.of(data.draw(small_gap_sets(top=4))) for _ in range(g.n))
        inst = SggfInstance(g, sets)
        found = solve_sggf(inst)
        expected = solve_sggf_oracle(inst)
        assert (found is None) == (expected is None)
        if found is not None:
            assert inst.satisfied_by(found)


class TestFormat:
    def test_round_trip(self, data_dir):
        inst = parse_sggf((data_dir / "theta.sggf").read_text())
        assert parse_sggf(serialize_sggf(inst)) == inst
        assert inst.graph.m == 6
        assert all(s.members == (1,) for s in inst.sets)

    @pytest.mark.parametrize(
        "text, kind",
        [
            ("g 2\ne 0 1\na 0 1\n", "missing_set"),
            ("g 2\ne 0 1\na 0 1\na 0 0\na 1 1\n", "malformed_line"),
            ("g 2\ne 0 1\na 0 x\na 1 1\n", "malformed_line"),
            ("g 2\ne 0 1\na 5 1\na 1 1\n", "vertex_out_of_range"),
        ],
    )
    def test_errors(self, text, kind):
        with pytest.raises(GraphFormatError) as info:
            parse_sggf(text)
        assert info.value.kind == kind
