"""compjac: strata, stability and Delaunay cells for dual graphs of nodal curves.

Exit codes: 0 success, 2 validation failure, 3 cap exceeded, 4 invariant
breach (for example a strata/cells mismatch).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

from . import report
from .errors import CompJacError, GraphValidationError, InvariantError
from .families import run_examples
from .graph import CurveGraph, arithmetic_genus
from .lattice import build_lattice, compare_with_strata, enumerate_cells
from .polarization import (
    Polarization,
    SheafModel,
    canonical_multidegree,
    classify_L,
    compute_phi,
    sheaf_chi,
    sheaf_degree,
    slope,
)
from .stability import Verdict, classify, denormalize, is_stable_orientation, normalize, realize_orientation
from .stratification import enumerate_strata

EXIT_OK, EXIT_VALIDATION, EXIT_CAP, EXIT_INVARIANT = 0, 2, 3, 4


def int_list(text: str) -> list[int]:
    text = text.strip().strip("()[]")
    if not text:
        return []
    try:
        return [int(x) for x in text.replace(" ", "").split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _common(p: argparse.ArgumentParser, graph: bool = True):
    if graph:
        p.add_argument("--input", "-i", required=True, metavar="FILE", help="graph JSON file")
    p.add_argument("--format", choices=["json", "table"], default="table")
    p.add_argument("--jobs", type=int, default=1, metavar="N")
    p.add_argument("--max-edges", type=int, default=None, metavar="K")
    p.add_argument("--full", action="store_true", help="dump every stratum / cell representative")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="compjac", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    _common(sub.add_parser("info", help="basic invariants of the dual graph"))

    p = sub.add_parser("check", help="classify a (normalized) multidegree in degree g-1")
    _common(p)
    vec = p.add_mutually_exclusive_group(required=True)
    vec.add_argument("--e", type=int_list, help="normalized multidegree")
    vec.add_argument("--d", type=int_list, help="multidegree")
    p.add_argument("--edges", type=int_list, default=None, help="kept edge ids (default: all)")

    _common(sub.add_parser("strata", help="stratification of the canonical compactified Jacobian"))
    _common(sub.add_parser("cells", help="Delaunay cells of the cycle lattice"))
    _common(sub.add_parser("compare", help="strata versus Delaunay cells per codimension"))

    p = sub.add_parser("stability", help="slope stability of an admissible sheaf")
    _common(p)
    p.add_argument("--dprime", type=int_list, required=True, help="multidegree on the partial normalization")
    p.add_argument("--edges", type=int_list, default=None, help="nodes where the sheaf is invertible")
    p.add_argument("--lambda", dest="lam", type=int_list, required=True, help="multidegree of the polarization")

    p = sub.add_parser("phi", help="Oda-Seshadri parameter of (d, L)")
    _common(p)
    p.add_argument("--lambda", dest="lam", type=int_list, required=True)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--omega", type=int_list, default=None, help="default: canonical multidegree")
    p.add_argument("--d-choice", type=int_list, default=None)
    p.add_argument("--ntilde", type=int_list, default=None)

    p = sub.add_parser("examples", help="check strata and cell counts on the built-in model curves")
    _common(p, graph=False)
    p.add_argument("--max-n", type=int, default=4)
    p.add_argument("--inject-failure", metavar="NAME", default=None, help=argparse.SUPPRESS)
    return parser


def _caps(args, default):
    cap = default if args.max_edges is None else args.max_edges
    if cap <= 0:
        raise GraphValidationError("--max-edges must be positive")
    if args.jobs <= 0:
        raise GraphValidationError("--jobs must be positive")
    return cap


def _subgraph(graph: CurveGraph, edges):
    return graph.full() if edges is None else graph.subgraph(edges)


def cmd_info(args, graph, out):
    rep = report.info_report(graph, build_lattice(graph))
    if args.format == "json":
        out.write(report.dumps(rep))
    else:
        rows = [(k, rep[k]) for k in ("vertices", "edges", "loops", "h", "g", "det_gram")]
        rows.append(("components", len(rep["components"])))
        rows += [(f"genus[{vid}]", g) for vid, g in rep["genera"].items()]
        out.write(report.render_table(["field", "value"], rows))
    return EXIT_OK


def cmd_check(args, graph, out):
    sub = _subgraph(graph, args.edges)
    e = tuple(args.e) if args.e is not None else normalize(args.d, graph)
    v_abs, w_abs = classify(e, sub, "abs")
    v_edges, w_edges = classify(e, sub, "edges")
    if v_abs is not v_edges:
        raise InvariantError(f"conditions disagree: abs={v_abs} edges={v_edges}")
    orient = realize_orientation(e, sub)
    if orient is None:
        v_orient = Verdict.UNSTABLE
    elif is_stable_orientation(orient):
        v_orient = Verdict.STABLE
    else:
        v_orient = Verdict.STRICTLY_SEMISTABLE
    if v_orient is not v_edges:
        raise InvariantError(f"orientation test gives {v_orient}, inequalities give {v_edges}")
    rep = report.header("check")
    rep.update(
        kept_edges=list(sub.edge_ids),
        e=list(e),
        d=list(denormalize(e, graph)),
        verdict=v_edges.value,
        conditions={"abs": v_abs.value, "edges": v_edges.value, "orientation": v_orient.value},
        witness=report.witness(graph, w_edges),
        orientation=None if orient is None else report.orientation_arcs(graph, orient),
    )
    if args.format == "json":
        out.write(report.dumps(rep))
    else:
        out.write(f"verdict {rep['verdict']}\n")
        for k, v in rep["conditions"].items():
            out.write(f"  ({k}) {v}\n")
        if rep["witness"] is not None:
            out.write(f"witness D = {{{', '.join(rep['witness'])}}}\n")
        if orient is not None:
            out.write("orientation " + " ".join(f"{eid}:{t}->{h}" for eid, t, h in rep["orientation"]) + "\n")
    return EXIT_OK


def cmd_strata(args, graph, out):
    strat = enumerate_strata(graph, max_edges=_caps(args, 16), jobs=args.jobs)
    if args.format == "json":
        out.write(report.dumps(report.strata_report(strat, args.full)))
    else:
        out.write(report.strata_text(strat, args.full))
    return EXIT_OK


def _census_and_comparison(args, graph):
    cap = _caps(args, 10)
    census = enumerate_cells(build_lattice(graph), max_edges=cap, jobs=args.jobs)
    strata = enumerate_strata(graph, max_edges=max(cap, 16), jobs=args.jobs)
    return census, compare_with_strata(graph, census=census, strata=strata)


def cmd_cells(args, graph, out):
    census, comparison = _census_and_comparison(args, graph)
    if args.format == "json":
        out.write(report.dumps(report.cells_report(census, comparison, args.full)))
    else:
        out.write(report.cells_text(census, comparison, args.full))
    return EXIT_OK if comparison.match else EXIT_INVARIANT


def cmd_compare(args, graph, out):
    _, comparison = _census_and_comparison(args, graph)
    if args.format == "json":
        out.write(report.dumps(report.compare_report(comparison)))
    else:
        out.write(report.compare_text(comparison))
    if not comparison.match:
        sys.stderr.write(f"strata/cells mismatch at codimension(s) {comparison.mismatches}\n")
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_stability(args, graph, out):
    sheaf = SheafModel(_subgraph(graph, args.edges), tuple(args.dprime))
    pol = Polarization(tuple(args.lam))
    verdict, mask = classify_L(sheaf, pol)
    rep = report.header("stability")
    rep.update(
        kept_edges=list(sheaf.subgraph.edge_ids),
        dprime=list(sheaf.dprime),
        polarization=list(pol.degrees),
        chi=sheaf_chi(sheaf),
        degree=sheaf_degree(sheaf),
        canonical_degree=arithmetic_genus(graph) - 1,
        slope=report.rational(slope(sheaf, pol)),
        verdict=verdict.value,
        witness=report.witness(graph, mask),
    )
    if args.format == "json":
        out.write(report.dumps(rep))
    else:
        keys = ("degree", "chi", "slope", "verdict")
        out.write(report.render_table(["field", "value"], [(k, rep[k]) for k in keys]))
        if rep["witness"] is not None:
            out.write(f"witness D = {{{', '.join(rep['witness'])}}}\n")
    return EXIT_OK


def cmd_phi(args, graph, out):
    pol = Polarization(tuple(args.lam))
    omega = tuple(args.omega) if args.omega is not None else canonical_multidegree(graph)
    phi = compute_phi(pol, omega, args.degree, args.d_choice, args.ntilde, graph=graph)
    rep = report.header("phi")
    rep.update(
        degree=args.degree,
        polarization=list(pol.degrees),
        omega=list(omega),
        phi=[report.rational(x) for x in phi.values],
        phi_reduced=[report.rational(x) for x in phi.reduced()],
        phi_sum=report.rational(sum(phi.values)),
    )
    if args.format == "json":
        out.write(report.dumps(rep))
    else:
        rows = [(vid, a, b) for vid, a, b in zip(graph.vertex_ids, rep["phi"], rep["phi_reduced"])]
        out.write(report.render_table(["vertex", "phi", "phi mod Z"], rows))
    return EXIT_OK


def cmd_examples(args, out):
    results = run_examples(max_n=args.max_n, jobs=args.jobs, inject_failure=args.inject_failure)
    failed = [r.name for r in results if not r.passed]
    if args.format == "json":
        rep = report.header("examples")
        rep["results"] = [
            {
                "name": r.name,
                "expected": {str(k): v for k, v in r.expected.items()},
                "strata": {str(k): v for k, v in r.strata.items()},
                "cells": {str(k): v for k, v in r.cells.items()},
                "passed": r.passed,
            }
            for r in results
        ]
        rep["passed"] = not failed
        out.write(report.dumps(rep))
    else:
        fmt = lambda t: " ".join(f"{k}:{v}" for k, v in t.items())  # noqa: E731
        rows = [(r.name, fmt(r.expected), fmt(r.strata), fmt(r.cells), "PASS" if r.passed else "FAIL") for r in results]
        out.write(report.render_table(["example", "expected", "strata", "cells", ""], rows))
    if failed:
        sys.stderr.write("failed: " + ", ".join(failed) + "\n")
        return EXIT_INVARIANT
    return EXIT_OK


COMMANDS = {
    "info": cmd_info,
    "check": cmd_check,
    "strata": cmd_strata,
    "cells": cmd_cells,
    "compare": cmd_compare,
    "stability": cmd_stability,
    "phi": cmd_phi,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    try:
        if args.command == "examples":
            _caps(args, 1)
            return cmd_examples(args, out)
        graph = CurveGraph.load(args.input)
        return COMMANDS[args.command](args, graph, out)
    except OSError as exc:
        sys.stderr.write(f"error: cannot read input: {exc}\n")
        return EXIT_VALIDATION
    except CompJacError as exc:
        sys.stderr.write(f"error ({type(exc).__name__}): {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
