import argparse
import logging
import os
import sys
from typing import Callable, List, Optional

from dotenv import load_dotenv

from utils.exact_solver import SizeCapExceeded, solve_exact
from utils.gadgets import GadgetKind, build_gadget, verify_gadget, write_gadget
from utils.graph_core import (
    DecompositionSpec,
    InternalConsistencyError,
    KBound,
    parse_graph,
    serialize_graph,
    validate_decomposition,
)
from utils.mbsfd_solver import Chain, ChainKind, EndClass, chain_profile, solve_mbsfd
from utils.sat_reduction import (
    ReductionBuilder,
    UnsatisfiedClauseError,
    brute_force_sat,
    clashing_variables,
    load_instance,
    random_instance,
    serialize_instance,
)
from utils.schemas import AssignmentModel, CertificateModel, CommandReport
from utils.sggf_solver import PieceSearchCapExceeded, parse_sggf, solve_sggf

load_dotenv()

logger = logging.getLogger(__name__)

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


def configure_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else getattr(logging, os.getenv("DECOMP_LOG_LEVEL", "INFO").upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )


def classify(k, l) -> str:
    """NP_COMPLETE when k + l >= 4 (INFINITY absorbs), POLYNOMIAL otherwise."""
    total = KBound.parse(k).plus(KBound.parse(l))
    return "NP_COMPLETE" if total.is_infinite or total.value >= 4 else "POLYNOMIAL"


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as f:
        return f.read()


def _write(path: Optional[str], text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Wrote {path}")


def _report(command: str, status: str, exit_code: int, **result) -> CommandReport:
    return CommandReport(command=command, status=status, exit_code=exit_code, result=result)


class CommandRunner:
    def __init__(self, max_edges: int, sat_max_vars: int):
        """
        Initialize the command runner with its search limits.

        Args:
            max_edges: Exact solver edge cap
            sat_max_vars: Brute-force SAT variable cap
        """
        self.max_edges = max_edges
        self.sat_max_vars = sat_max_vars
        logger.debug(f"Command runner initialized (max_edges={max_edges}, sat_max_vars={sat_max_vars})")

    def gadget_build(self, args) -> CommandReport:
        gadget = build_gadget(args.kind, KBound.parse(args.k).value, args.ell)
        if args.out:
            write_gadget(gadget, args.out)
        return _report(
            "gadget build", "built", EXIT_YES,
            vertices=gadget.graph.n, edges=gadget.graph.m, **gadget.sidecar(),
        )

    def gadget_verify(self, args) -> CommandReport:
        gadget = build_gadget(args.kind, KBound.parse(args.k).value, args.ell)
        report = verify_gadget(gadget, self.max_edges)
        exit_code = {"pass": EXIT_YES, "fail": EXIT_NO}.get(report.status, EXIT_ERROR)
        return CommandReport(command="gadget verify", status=report.status, exit_code=exit_code, result=report.to_dict())

    def reduce_sat2blfd(self, args) -> CommandReport:
        inst = load_instance(_read(args.cnf))
        graph, pins = ReductionBuilder(KBound.parse(args.k).value).build(inst)
        _write(args.out, serialize_graph(graph, f"reduction graph, k={args.k}"))
        return _report(
            "reduce sat2blfd", "built", EXIT_YES,
            vertices=graph.n, edges=graph.m, max_degree=graph.max_degree(),
            clause_vertices=[c.vertex for c in pins.clauses],
            variables={str(v.variable): {"inputs": list(v.inputs), "input_edges": [list(e) for e in v.input_edges]}
                       for v in pins.variables},
        )

    def sat_brute(self, args) -> CommandReport:
        inst = load_instance(_read(args.cnf))
        assignment = brute_force_sat(inst, self.sat_max_vars)
        if assignment is None:
            return _report("sat brute", "unsat", EXIT_NO)
        model = AssignmentModel.from_assignment(assignment)
        _write(args.out, model.model_dump_json(indent=2))
        return _report("sat brute", "sat", EXIT_YES, **model.model_dump())

    def sat_assign2dec(self, args) -> CommandReport:
        inst = load_instance(_read(args.cnf))
        assignment = AssignmentModel.model_validate_json(_read(args.assignment)).to_assignment()
        builder = ReductionBuilder(KBound.parse(args.k).value)
        decomposition = builder.assignment_to_decomposition(inst, assignment)
        _, pins = builder.build(inst)
        certificate = CertificateModel.from_decomposition(decomposition)
        _write(args.out, certificate.model_dump_json(indent=2))
        return _report(
            "sat assign2dec", "valid", EXIT_YES,
            certificate=certificate.model_dump(), clashes=clashing_variables(pins, decomposition),
        )

    def sat_dec2assign(self, args) -> CommandReport:
        inst = load_instance(_read(args.cnf))
        builder = ReductionBuilder(KBound.parse(args.k).value)
        graph, pins = builder.build(inst)
        decomposition = CertificateModel.model_validate_json(_read(args.cert)).to_decomposition(graph)
        verdict = validate_decomposition(decomposition)
        if not verdict.valid:
            return _report("sat dec2assign", "invalid", EXIT_NO, violations=[v.to_dict() for v in verdict.violations])
        model = AssignmentModel.from_assignment(builder.decomposition_to_assignment(inst, pins, decomposition))
        _write(args.out, model.model_dump_json(indent=2))
        return _report("sat dec2assign", "sat", EXIT_YES, **model.model_dump())

    def sat_random(self, args) -> CommandReport:
        inst = random_instance(args.vars, args.seed)
        text = serialize_instance(inst)
        _write(args.out, text)
        return _report(
            "sat random", "built", EXIT_YES,
            seed=args.seed, n_vars=inst.n_vars, clauses=[list(c) for c in inst.clauses], dimacs=text,
        )

    def _decided(self, command: str, decomposition, out: Optional[str]) -> CommandReport:
        if decomposition is None:
            return _report(command, "no", EXIT_NO)
        certificate = CertificateModel.from_decomposition(decomposition)
        _write(out, certificate.model_dump_json(indent=2))
        return _report(command, "yes", EXIT_YES, certificate=certificate.model_dump())

    def solve_exact(self, args) -> CommandReport:
        graph = parse_graph(_read(args.graph))
        if args.spec == "star":
            spec = DecompositionSpec.star(args.k)
        else:
            spec = DecompositionSpec.linear(args.k, args.l)
        return self._decided("solve exact", solve_exact(graph, spec, self.max_edges), args.out)

    def solve_mbsfd(self, args) -> CommandReport:
        graph = parse_graph(_read(args.graph))
        return self._decided("solve mbsfd", solve_mbsfd(graph, args.k), args.out)

    def solve_sggf(self, args) -> CommandReport:
        inst = parse_sggf(_read(args.instance))
        selection = solve_sggf(inst)
        if selection is None:
            return _report("solve sggf", "no", EXIT_NO)
        return _report(
            "solve sggf", "yes", EXIT_YES,
            selection=selection, edges=[list(inst.graph.edges[i]) for i in selection],
        )

    def verify_cert(self, args) -> CommandReport:
        graph = parse_graph(_read(args.graph))
        decomposition = CertificateModel.model_validate_json(_read(args.cert)).to_decomposition(graph)
        verdict = validate_decomposition(decomposition)
        if verdict.valid:
            return _report("verify cert", "valid", EXIT_YES, spec=str(decomposition.spec))
        return _report(
            "verify cert", "invalid", EXIT_NO,
            spec=str(decomposition.spec), violations=[v.to_dict() for v in verdict.violations],
        )

    def classify(self, args) -> CommandReport:
        verdict = classify(args.k, args.l)
        return _report("classify", verdict, EXIT_YES, k=str(args.k), l=str(args.l))

    def profile_chain(self, args) -> CommandReport:
        length = args.length
        if length < 1:
            raise ValueError("chains need at least one edge")
        if args.shape == "path":
            chain = Chain(ChainKind.PATH, tuple(range(length + 1)), EndClass(args.start), EndClass(args.end))
        else:
            if length < 3:
                raise ValueError("cycles need at least 3 edges")
            hub = EndClass.HUB if args.shape == "hub-cycle" else None
            chain = Chain(ChainKind.CYCLE, tuple(range(length)) + (0,), hub, hub)
        profile = chain_profile(chain, args.k)
        return _report(
            "profile chain", "computed", EXIT_YES,
            achievable=sorted(profile.achievable),
            witnesses=[{"pattern": list(p), "labels": [label.value for label in w]}
                       for p, w in profile.witnesses.items()],
        )


def build_parser() -> argparse.ArgumentParser:
    default_max_edges = int(os.getenv("DECOMP_MAX_EDGES", "64"))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-edges", type=int, default=default_max_edges, help="Exact search edge cap")
    common.add_argument("--out", type=str, help="Write the main artifact to this path")
    common.add_argument("--verbose", action="store_true", help="Debug logging on stderr")

    parser = argparse.ArgumentParser(description="Matching plus forest decomposition toolkit")
    groups = parser.add_subparsers(dest="group", required=True)

    def sub(group_parser, name, handler, help_text):
        p = group_parser.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(handler=handler)
        return p

    gadget = groups.add_parser("gadget", help="Build or verify gadgets").add_subparsers(dest="action", required=True)
    for name, handler in (("build", "gadget_build"), ("verify", "gadget_verify")):
        p = sub(gadget, name, handler, f"{name} a gadget")
        p.add_argument("--kind", required=True, choices=[k.value for k in GadgetKind])
        p.add_argument("--k", required=True, type=str)
        p.add_argument("--ell", type=int)

    reduce = groups.add_parser("reduce", help="Reductions").add_subparsers(dest="action", required=True)
    p = sub(reduce, "sat2blfd", "reduce_sat2blfd", "Build the reduction graph of a CNF instance")
    p.add_argument("cnf")
    p.add_argument("--k", required=True, type=str)

    sat = groups.add_parser("sat", help="SAT instances and assignment maps").add_subparsers(dest="action", required=True)
    p = sub(sat, "brute", "sat_brute", "Exhaustive satisfiability check")
    p.add_argument("cnf")
    p = sub(sat, "assign2dec", "sat_assign2dec", "Assignment to decomposition certificate")
    p.add_argument("cnf")
    p.add_argument("assignment")
    p.add_argument("--k", required=True, type=str)
    p = sub(sat, "dec2assign", "sat_dec2assign", "Decomposition certificate to assignment")
    p.add_argument("cnf")
    p.add_argument("cert")
    p.add_argument("--k", required=True, type=str)
    p = sub(sat, "random", "sat_random", "Random (<=3,3) instance")
    p.add_argument("--vars", required=True, type=int)
    p.add_argument("--seed", type=int, default=0)

    solve = groups.add_parser("solve", help="Decision procedures").add_subparsers(dest="action", required=True)
    p = sub(solve, "exact", "solve_exact", "Exhaustive search")
    p.add_argument("graph")
    p.add_argument("--spec", choices=["linear", "star"], default="linear")
    p.add_argument("--k", required=True, type=str)
    p.add_argument("--l", type=str, default="1")
    p = sub(solve, "mbsfd", "solve_mbsfd", "Matching plus k-bounded star forest")
    p.add_argument("graph")
    p.add_argument("--k", required=True, type=str)
    p = sub(solve, "sggf", "solve_sggf", "Small-gap general factor")
    p.add_argument("instance")

    verify = groups.add_parser("verify", help="Certificate checks").add_subparsers(dest="action", required=True)
    p = sub(verify, "cert", "verify_cert", "Validate a certificate against a graph")
    p.add_argument("graph")
    p.add_argument("cert")

    p = groups.add_parser("classify", parents=[common], help="Complexity of LINEAR(k,l)")
    p.set_defaults(handler="classify")
    p.add_argument("--k", required=True, type=str)
    p.add_argument("--l", required=True, type=str)

    profile = groups.add_parser("profile", help="Inspect chain profiles").add_subparsers(dest="action", required=True)
    p = sub(profile, "chain", "profile_chain", "Achievable matching counts of one chain")
    p.add_argument("--length", required=True, type=int)
    p.add_argument("--shape", choices=["path", "hub-cycle", "cycle"], default="path")
    p.add_argument("--start", choices=["hub", "leaf"], default="hub")
    p.add_argument("--end", choices=["hub", "leaf"], default="hub")
    p.add_argument("--k", type=str, default="2")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    command = f"{args.group} {args.action}" if getattr(args, "action", None) else args.group
    runner = CommandRunner(args.max_edges, int(os.getenv("DECOMP_SAT_MAX_VARS", "24")))
    handler: Callable = getattr(runner, args.handler)
    try:
        report = handler(args)
    except SizeCapExceeded as e:
        logger.warning(f"Size cap reached: {str(e)}")
        report = _report(command, "size_cap", EXIT_ERROR, edges=e.edges, cap=e.cap)
    except PieceSearchCapExceeded as e:
        logger.warning(f"Size cap reached: {str(e)}")
        report = _report(command, "size_cap", EXIT_ERROR, matchings=e.matchings, cap=e.cap)
    except UnsatisfiedClauseError as e:
        logger.error(f"Assignment rejected: {str(e)}")
        report = _report(command, "unsatisfied", EXIT_NO, clause=e.clause + 1, error=str(e))
    except InternalConsistencyError as e:
        logger.error(f"Internal consistency failure: {str(e)}")
        report = _report(command, "internal_error", EXIT_ERROR, error=str(e))
    except (ValueError, OSError) as e:
        logger.error(f"Error running {command}: {str(e)}")
        report = _report(command, "error", EXIT_ERROR, kind=getattr(e, "kind", type(e).__name__), error=str(e))
    print(report.model_dump_json(indent=2))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
