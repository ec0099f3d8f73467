"""JSON-ready report dictionaries and plain-text tables."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .graph import CurveGraph, GeneratingSubgraph, arithmetic_genus, connected_components, cyclomatic_number, mask_to_ids
from .lattice import CellCensus, Comparison, CycleLattice, saturation_check
from .stratification import Stratification, stratum_dimension

SCHEMA_VERSION = 1


def rational(x: Fraction) -> str:
    return str(Fraction(x))


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def render_table(headers: Sequence[str], rows: Sequence[Sequence]) -> str:
    cells = [[str(h) for h in headers]] + [[str(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = []
    for k, row in enumerate(cells):
        lines.append("  ".join(c.rjust(w) for c, w in zip(row, widths)).rstrip())
        if k == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def header(command: str) -> dict:
    return {"schema_version": SCHEMA_VERSION, "command": command}


def info_report(graph: CurveGraph, lattice: Optional[CycleLattice] = None) -> dict:
    out = header("info")
    out.update(
        vertices=graph.n_vertices,
        edges=graph.n_edges,
        loops=sum(1 for u, v in graph.edges if u == v),
        components=[list(c) for c in connected_components(graph)],
        h=cyclomatic_number(graph),
        g=arithmetic_genus(graph),
        genera={vid: g for vid, g in zip(graph.vertex_ids, graph.genera)},
    )
    if lattice is not None:
        out["det_gram"] = linalg.det(lattice.gram)
    return out


def orientation_arcs(graph: CurveGraph, orientation) -> list[list]:
    return [[eid, graph.vertex_ids[t], graph.vertex_ids[h]] for eid, t, h in orientation.arcs()]


def strata_report(strat: Stratification, full: bool = False) -> dict:
    graph = strat.graph
    out = header("strata")
    out["graph"] = {
        "vertices": graph.n_vertices,
        "edges": graph.n_edges,
        "h": cyclomatic_number(graph),
        "g": arithmetic_genus(graph),
    }
    out["table"] = [{"codim": k, "count": c} for k, c in strat.table.items()]
    out["total"] = len(strat)
    if full:
        out["strata"] = [
            {
                "codim": s.codim,
                "dim": stratum_dimension(s),
                "kept_edges": list(s.kept_edges),
                "e": list(s.e),
                "d": list(s.d),
            }
            for s in strat.strata
        ]
    return out


def strata_text(strat: Stratification, full: bool = False) -> str:
    text = render_table(["codim", "count"], list(strat.table.items()))
    text += f"total {len(strat)}\n"
    if full:
        rows = [(s.codim, stratum_dimension(s), _edge_list(s.subgraph), s.e, s.d) for s in strat.strata]
        text += "\n" + render_table(["codim", "dim", "kept_edges", "e", "d"], rows)
    return text


def _edge_list(sub: GeneratingSubgraph) -> str:
    return "{" + ",".join(map(str, sub.edge_ids)) + "}"


def cells_report(census: CellCensus, comparison: Optional[Comparison] = None, full: bool = False) -> dict:
    lattice = census.lattice
    out = header("cells")
    out["h"] = lattice.rank
    out["gram"] = [list(row) for row in lattice.gram]
    out["det_gram"] = linalg.det(lattice.gram)
    out["saturated"] = saturation_check(lattice)
    out["sign_vectors"] = census.n_sign_vectors
    out["distinct_cells"] = census.n_distinct_cells
    out["cells"] = [{"dim": k, "count": c} for k, c in census.counts.items()]
    if comparison is not None:
        out["match_strata"] = comparison.match
    if full:
        out["representatives"] = [
            {"dim": c.dim, "sign": c.sign_text, "vertices": [[rational(x) for x in v] for v in c.vertices]}
            for c in census.representatives
        ]
    return out


def cells_text(census: CellCensus, comparison: Optional[Comparison] = None, full: bool = False) -> str:
    lattice = census.lattice
    text = f"h = {lattice.rank}, det(gram) = {linalg.det(lattice.gram)}\n"
    text += render_table(["dim", "count"], list(census.counts.items()))
    if comparison is not None:
        text += f"match_strata {str(comparison.match).lower()}\n"
    if full:
        rows = [
            (c.dim, c.sign_text, " ".join("(" + ",".join(rational(x) for x in v) + ")" for v in c.vertices))
            for c in census.representatives
        ]
        text += "\n" + render_table(["dim", "sign", "vertices"], rows)
    return text


def compare_report(comparison: Comparison) -> dict:
    out = header("compare")
    out["h"] = comparison.h
    out["rows"] = [
        {"codim": k, "strata": comparison.strata_by_codim[k], "cells": comparison.cells_by_codim[k]}
        for k in comparison.strata_by_codim
    ]
    out["match"] = comparison.match
    out["mismatched_codims"] = comparison.mismatches
    return out


def compare_text(comparison: Comparison) -> str:
    rows = [
        (k, comparison.h - k, comparison.strata_by_codim[k], comparison.cells_by_codim[k])
        for k in comparison.strata_by_codim
    ]
    text = render_table(["codim", "cell_dim", "strata", "cells"], rows)
    return text + ("PASS\n" if comparison.match else f"FAIL at codim {comparison.mismatches}\n")


def witness(graph: CurveGraph, mask: Optional[int]) -> Optional[list[str]]:
    return None if mask is None else list(mask_to_ids(graph, mask))
