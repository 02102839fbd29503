import pytest
from hypothesis import given

from tests.strategies import graphs, path, star
from utils.graph_core import (
    CertificateError,
    Decomposition,
    DecompositionSpec,
    Graph,
    GraphFormatError,
    KBound,
    Label,
    MultiGraph,
    certificate_from_decomposition,
    decomposition_from_certificate,
    parse_graph,
    part_components,
    serialize_graph,
    validate_decomposition,
)

M, F = Label.MATCHING, Label.FOREST


def labeled(g: Graph, spec: DecompositionSpec, mapping) -> Decomposition:
    return Decomposition(g, tuple(mapping[e] for e in g.edges), spec)


class TestParsing:
    def test_parse_with_comments(self):
        g = parse_graph("# a path\ng 3\ne 1 0\n\ne 1 2\n")
        assert g.n == 3
        assert g.edges == ((0, 1), (1, 2))

    @pytest.mark.parametrize(
        "text, kind",
        [
            ("e 0 1\n", "missing_header"),
            ("", "missing_header"),
            ("g 2\ne 0 0\n", "self_loop"),
            ("g 2\ne 0 2\n", "vertex_out_of_range"),
            ("g 2\ne 0 1\ne 1 0\n", "duplicate_edge"),
            ("g 2\ne 0 x\n", "malformed_line"),
            ("g 2\nq 0 1\n", "malformed_line"),
            ("g 2\ng 3\n", "malformed_line"),
        ],
    )
    def test_format_errors(self, text, kind):
        with pytest.raises(GraphFormatError) as info:
            parse_graph(text)
        assert info.value.kind == kind

    def test_error_names_the_line(self):
        with pytest.raises(GraphFormatError) as info:
            parse_graph("g 3\ne 0 1\ne 0 5\n")
        assert info.value.line == 3

    @given(graphs())
    def test_serialize_then_parse_is_identity(self, g):
        assert parse_graph(serialize_graph(g, "sample")) == g


class TestGraph:
    def test_degrees(self):
        g = star(3)
        assert g.max_degree() == 3
        assert g.degree_profile() == {1: 3, 3: 1}
        assert g.is_subcubic()
        assert not star(4).is_subcubic()

    def test_edge_index_is_symmetric(self, triangle):
        assert triangle.edge_index(2, 0) == triangle.edge_index(0, 2)
        with pytest.raises(KeyError):
            path(2).edge_index(0, 2)

    def test_to_networkx(self, theta):
        nxg = theta.to_networkx()
        assert nxg.number_of_nodes() == 5
        assert nxg.number_of_edges() == 6

    def test_multigraph_degrees_count_parallel_edges(self):
        g = MultiGraph(4, ((0, 1), (1, 0), (1, 2)))
        assert [g.degree(v) for v in range(4)] == [2, 3, 1, 0]
        assert g == MultiGraph(4, ((0, 1), (1, 0), (1, 2)))


class TestBounds:
    def test_parse(self):
        assert KBound.parse("inf").is_infinite
        assert KBound.parse("3") == KBound(3)
        assert KBound.parse(2) == KBound(2)

    @pytest.mark.parametrize("text", ["0", "-1", "many"])
    def test_bad_bound(self, text):
        with pytest.raises(GraphFormatError) as info:
            KBound.parse(text)
        assert info.value.kind == "bad_bound"

    def test_infinity_absorbs(self):
        assert KBound(2).plus(KBound.infinity()).is_infinite
        assert KBound(2).plus(KBound(1)) == KBound(3)
        assert KBound.infinity().admits(10 ** 9)
        assert not KBound(2).admits(3)

    def test_linear_defaults_to_plain_matching(self):
        spec = DecompositionSpec.linear(3)
        assert spec.l == KBound(1)
        assert spec.matching_is_plain
        assert str(DecompositionSpec.star("inf")) == "STAR(inf)"


class TestValidation:
    def test_triangle_linear(self, triangle):
        d = labeled(triangle, DecompositionSpec.linear(2), {(0, 1): M, (1, 2): F, (0, 2): F})
        assert validate_decomposition(d).valid

    def test_path_too_long(self, triangle):
        d = labeled(triangle, DecompositionSpec.linear(1), {(0, 1): M, (1, 2): F, (0, 2): F})
        kinds = [v.kind for v in validate_decomposition(d).violations]
        assert kinds == ["path_too_long"]

    def test_forest_cycle(self, triangle):
        d = Decomposition(triangle, (F, F, F), DecompositionSpec.linear("inf"))
        assert [v.kind for v in validate_decomposition(d).violations] == ["cycle"]

    def test_adjacent_matching(self):
        g = path(2)
        d = Decomposition(g, (M, M), DecompositionSpec.linear(2))
        violation = validate_decomposition(d).violations[0]
        assert violation.kind == "adjacent_matching"
        assert violation.vertices == (1,)
        assert violation.detail == "adjacent matching edges at vertex 1"

    def test_linear_matching_part(self):
        g = path(3)
        d = Decomposition(g, (M, M, F), DecompositionSpec.linear(1, 2))
        assert validate_decomposition(d).valid

    def test_forest_degree(self):
        d = Decomposition(star(3), (F, F, F), DecompositionSpec.linear(5))
        assert [v.kind for v in validate_decomposition(d).violations] == ["degree"]

    def test_star_specs(self):
        g = star(3)
        assert validate_decomposition(Decomposition(g, (F, F, F), DecompositionSpec.star(3))).valid
        too_large = validate_decomposition(Decomposition(g, (F, F, F), DecompositionSpec.star(2))).violations
        assert [v.kind for v in too_large] == ["star_too_large"]
        assert too_large[0].vertices == (0,)

    def test_path_is_not_a_star(self):
        d = Decomposition(path(3), (F, F, F), DecompositionSpec.star("inf"))
        assert [v.kind for v in validate_decomposition(d).violations] == ["non_star"]

    def test_part_components(self, theta):
        labels = tuple(F if 0 in e else M for e in theta.edges)
        components = part_components(theta, labels, F)
        assert len(components) == 1
        assert sorted(components[0]) == [i for i, e in enumerate(theta.edges) if 0 in e]

    def test_part_components_are_sorted_edge_lists(self):
        labels = (F, F, M, F, F)
        assert part_components(path(5), labels, F) == [[0, 1], [3, 4]]
        assert part_components(path(5), labels, M) == [[2]]
        assert part_components(path(2), (M, M), F) == []

    def test_violation_to_dict(self, triangle):
        d = Decomposition(triangle, (F, F, F), DecompositionSpec.linear(2))
        record = validate_decomposition(d).violations[0].to_dict()
        assert record["kind"] == "cycle"
        assert record["vertices"] == [0, 1, 2]


class TestCertificates:
    def test_round_trip(self, triangle):
        d = Decomposition(triangle, (M, F, F), DecompositionSpec.linear(2))
        certificate = certificate_from_decomposition(d)
        assert certificate["spec"] == {"kind": "linear", "k": 2, "l": 1}
        assert decomposition_from_certificate(triangle, certificate) == d

    def test_star_certificate_has_no_l(self):
        d = Decomposition(star(2), (F, F), DecompositionSpec.star("inf"))
        assert certificate_from_decomposition(d)["spec"] == {"kind": "star", "k": "inf", "l": None}

    @pytest.mark.parametrize(
        "matching, forest, kind",
        [
            ([[0, 1]], [[1, 2], [0, 5]], "unknown_edge"),
            ([[0, 1]], [[1, 0], [1, 2], [0, 2]], "double_label"),
            ([[0, 1]], [[1, 2]], "not_total"),
        ],
    )
    def test_certificate_errors(self, triangle, matching, forest, kind):
        certificate = {"spec": {"kind": "linear", "k": 2, "l": 1}, "matching": matching, "forest": forest}
        with pytest.raises(CertificateError) as info:
            decomposition_from_certificate(triangle, certificate)
        assert info.value.kind == kind
