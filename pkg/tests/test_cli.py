import networkx as nx
import pytest

from cli import classify, main
from tests.strategies import star
from utils.graph_core import Graph, serialize_graph
from utils.schemas import CommandReport
from utils.sggf_solver import PieceSearchCapExceeded


def run(capsys, *argv) -> CommandReport:
    code = main([str(a) for a in argv])
    report = CommandReport.model_validate_json(capsys.readouterr().out)
    assert report.exit_code == code
    return report


@pytest.fixture
def graph_file(tmp_path):
    def write(g: Graph, name: str = "graph.txt") -> str:
        target = tmp_path / name
        target.write_text(serialize_graph(g))
        return str(target)

    return write


@pytest.mark.parametrize(
    "k, l, expected",
    [
        (1, 1, "POLYNOMIAL"),
        (1, 2, "POLYNOMIAL"),
        (2, 1, "POLYNOMIAL"),
        (2, 2, "NP_COMPLETE"),
        (3, 1, "NP_COMPLETE"),
        (1, 3, "NP_COMPLETE"),
        ("inf", 1, "NP_COMPLETE"),
        (1, "inf", "NP_COMPLETE"),
    ],
)
def test_classify(k, l, expected):
    assert classify(k, l) == expected


def test_classify_command(capsys):
    report = run(capsys, "classify", "--k", 2, "--l", 2)
    assert report.status == "NP_COMPLETE"
    assert report.exit_code == 0


class TestSolve:
    def test_exact_triangle(self, capsys, graph_file, triangle, tmp_path):
        path = graph_file(triangle)
        cert = tmp_path / "cert.json"
        report = run(capsys, "solve", "exact", path, "--k", 2, "--out", cert)
        assert report.status == "yes"
        assert report.result["certificate"]["spec"] == {"kind": "linear", "k": 2, "l": 1}
        assert run(capsys, "verify", "cert", path, cert).status == "valid"

    def test_exact_size_cap(self, capsys, graph_file):
        k5 = Graph.from_edges(5, nx.complete_graph(5).edges())
        report = run(capsys, "solve", "exact", graph_file(k5), "--k", 3, "--max-edges", 5)
        assert (report.status, report.exit_code) == ("size_cap", 2)
        assert report.result == {"edges": 10, "cap": 5}

    def test_mbsfd_degree_too_large(self, capsys, graph_file):
        report = run(capsys, "solve", "mbsfd", graph_file(star(4)), "--k", 2)
        assert (report.status, report.exit_code) == ("no", 1)

    def test_mbsfd_subdivided_claw(self, capsys, graph_file, subdivided_claw):
        report = run(capsys, "solve", "mbsfd", graph_file(subdivided_claw), "--k", 2)
        assert report.status == "yes"
        assert report.result["certificate"]["spec"]["kind"] == "star"

    def test_bad_bound(self, capsys, graph_file, triangle):
        report = run(capsys, "solve", "mbsfd", graph_file(triangle), "--k", "zero")
        assert (report.status, report.exit_code) == ("error", 2)
        assert report.result["kind"] == "bad_bound"

    def test_sggf_theta(self, capsys, data_dir):
        report = run(capsys, "solve", "sggf", data_dir / "theta.sggf")
        assert (report.status, report.exit_code) == ("no", 1)

    def test_sggf_piece_search_cap(self, capsys, data_dir, monkeypatch):
        def capped(inst):
            raise PieceSearchCapExceeded(5, 4)

        monkeypatch.setattr("cli.solve_sggf", capped)
        report = run(capsys, "solve", "sggf", data_dir / "theta.sggf")
        assert (report.status, report.exit_code) == ("size_cap", 2)
        assert report.result == {"matchings": 5, "cap": 4}


class TestVerify:
    def test_mislabeled_edge(self, capsys, graph_file, triangle, tmp_path):
        cert = tmp_path / "bad.json"
        cert.write_text(
            '{"spec": {"kind": "linear", "k": 2, "l": 1}, "matching": [[0, 1], [1, 2]], "forest": [[0, 2]]}'
        )
        report = run(capsys, "verify", "cert", graph_file(triangle), cert)
        assert (report.status, report.exit_code) == ("invalid", 1)
        assert report.result["violations"][0]["kind"] == "adjacent_matching"

    def test_missing_file(self, capsys, tmp_path):
        report = run(capsys, "verify", "cert", tmp_path / "nope.txt", tmp_path / "nope.json")
        assert (report.status, report.exit_code) == ("error", 2)


class TestGadgetCommands:
    def test_verify_or(self, capsys):
        report = run(capsys, "gadget", "verify", "--kind", "or", "--k", 3)
        assert (report.status, report.exit_code) == ("pass", 0)
        assert len(report.result["core_labelings"]) == 4

    def test_verify_beyond_cap(self, capsys):
        report = run(capsys, "gadget", "verify", "--kind", "or", "--k", 6)
        assert (report.status, report.exit_code) == ("size_cap", 2)

    def test_build_writes_sidecar(self, capsys, tmp_path):
        out = tmp_path / "m3.txt"
        report = run(capsys, "gadget", "build", "--kind", "m_forcer", "--k", 3, "--out", out)
        assert report.result["vertices"] == 9
        assert (tmp_path / "m3.txt.pins.json").exists()


class TestSatCommands:
    def test_random_is_reproducible(self, capsys):
        main(["sat", "random", "--vars", "6", "--seed", "11"])
        first = capsys.readouterr().out
        main(["sat", "random", "--vars", "6", "--seed", "11"])
        assert capsys.readouterr().out == first

    def test_brute_unsat(self, capsys, data_dir):
        report = run(capsys, "sat", "brute", data_dir / "unsat4.cnf")
        assert (report.status, report.exit_code) == ("unsat", 1)

    def test_reduce(self, capsys, data_dir, tmp_path):
        report = run(capsys, "reduce", "sat2blfd", data_dir / "sample6.cnf", "--k", 3, "--out", tmp_path / "g.txt")
        assert (report.result["vertices"], report.result["edges"]) == (202, 207)
        assert report.result["clause_vertices"] == list(range(7))

    def test_assignment_round_trip(self, capsys, data_dir, tmp_path):
        cnf = data_dir / "sample6.cnf"
        assignment, cert = tmp_path / "a.json", tmp_path / "c.json"
        assert run(capsys, "sat", "brute", cnf, "--out", assignment).status == "sat"
        report = run(capsys, "sat", "assign2dec", cnf, assignment, "--k", 3, "--out", cert)
        assert report.status == "valid"
        assert report.result["clashes"] == []
        assert run(capsys, "sat", "dec2assign", cnf, cert, "--k", 3).status == "sat"

    def test_unsatisfying_assignment(self, capsys, data_dir, tmp_path):
        assignment = tmp_path / "a.json"
        assignment.write_text('{"assignment": {"1": false, "2": false, "3": false, "4": false, "5": false, "6": false}}')
        report = run(capsys, "sat", "assign2dec", data_dir / "sample6.cnf", assignment, "--k", 3)
        assert (report.status, report.exit_code) == ("unsatisfied", 1)
        assert report.result["clause"] == 2


def test_profile_chain(capsys):
    report = run(capsys, "profile", "chain", "--length", 3)
    assert report.result["achievable"] == [0, 2]


def test_profile_rejects_short_cycles(capsys):
    report = run(capsys, "profile", "chain", "--length", 2, "--shape", "cycle")
    assert (report.status, report.exit_code) == ("error", 2)


def test_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["solve"])
    assert info.value.code == 2
