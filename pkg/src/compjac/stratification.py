"""Strata of the canonical compactified Jacobian in degree g - 1.

Each stratum is a pair (generating subgraph, stable normalized multidegree on
it) and has codimension ``h(G) - h(subgraph)``.  Stability on a subgraph is
taken component by component, so the fully normalized curve always
contributes the stratum ``e = 0``.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .errors import CapExceededError, GraphValidationError
from .graph import CurveGraph, GeneratingSubgraph, cyclomatic_number
from .stability import denormalize, stable_multidegrees

DEFAULT_STRATA_CAP = 16


@dataclass(frozen=True)
class Stratum:
    subgraph: GeneratingSubgraph
    e: tuple[int, ...]
    d: tuple[int, ...]
    codim: int

    @property
    def kept_edges(self) -> tuple[int, ...]:
        return self.subgraph.edge_ids

    def sort_key(self):
        return (self.codim, self.subgraph.mask, self.e)


@dataclass
class Stratification:
    graph: CurveGraph
    strata: list[Stratum]
    table: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.table:
            self.table = dict(sorted(Counter(s.codim for s in self.strata).items()))

    def __len__(self):
        return len(self.strata)

    def codim_zero(self) -> list[tuple[int, ...]]:
        return [s.e for s in self.strata if s.codim == 0]


def _strata_for_masks(graph: CurveGraph, masks) -> list[tuple[int, list[tuple[int, ...]]]]:
    out = []
    for mask in masks:
        sub = GeneratingSubgraph(graph, mask)
        found = stable_multidegrees(sub, componentwise=True)
        if found:
            out.append((mask, found))
    return out


def enumerate_strata(graph: CurveGraph, max_edges: int = DEFAULT_STRATA_CAP, jobs: int = 1) -> Stratification:
    """All strata, ordered by (codim, kept-edge bitmask, e)."""
    if graph.n_edges > max_edges:
        raise CapExceededError("stratification (edges)", graph.n_edges, max_edges)
    masks = list(range(1 << graph.n_edges))
    if jobs > 1 and len(masks) > 1:
        chunks = [masks[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = pool.map(_strata_for_masks, [graph] * jobs, chunks)
            found = [item for part in parts for item in part]
    else:
        found = _strata_for_masks(graph, masks)
    h = cyclomatic_number(graph)
    strata = []
    for mask, multidegrees in found:
        sub = GeneratingSubgraph(graph, mask)
        codim = h - cyclomatic_number(sub)
        for e in multidegrees:
            strata.append(Stratum(sub, e, denormalize(e, graph), codim))
    strata.sort(key=Stratum.sort_key)
    return Stratification(graph, strata)


def strata_for_forest(graph: CurveGraph) -> Stratification:
    """Shortcut for a forest: the full normalization with ``e = 0`` is the only stratum."""
    if cyclomatic_number(graph) != 0:
        raise GraphValidationError("strata_for_forest needs a graph without cycles")
    e = (0,) * graph.n_vertices
    sub = GeneratingSubgraph(graph, 0)
    return Stratification(graph, [Stratum(sub, e, denormalize(e, graph), 0)])


def stratum_dimension(stratum: Stratum, graph: CurveGraph | None = None) -> int:
    """Dimension of Pic^0 of the partial normalization: sum of genera + h(subgraph).

    On a connected graph this is ``g - codim``.
    """
    sub = stratum.subgraph
    return sum(sub.genera) + cyclomatic_number(sub)
