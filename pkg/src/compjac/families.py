"""Small model curves with known strata and cell counts."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Callable, Optional

from .graph import CurveGraph
from .lattice import build_lattice, compare_with_strata, enumerate_cells
from .stratification import enumerate_strata


def two_components(g1: int = 1, g2: int = 2) -> CurveGraph:
    """Two smooth components meeting in one point."""
    return CurveGraph.build([("C1", g1), ("C2", g2)], [("C1", "C2")])


def forest() -> CurveGraph:
    """A star with three leaves next to a separate two-component chain."""
    verts = [(f"C{i}", 1) for i in range(1, 7)]
    edges = [("C1", "C2"), ("C2", "C3"), ("C2", "C4"), ("C5", "C6")]
    return CurveGraph.build(verts, edges)


def nodal_irreducible(n: int = 1, genus: int = 0) -> CurveGraph:
    """One component with ``n`` self-nodes."""
    return CurveGraph.build([("C1", genus)], [("C1", "C1")] * n)


def banana(n: int, g1: int = 0, g2: int = 0) -> CurveGraph:
    """Two smooth components meeting in ``n`` points."""
    return CurveGraph.build([("C1", g1), ("C2", g2)], [("C1", "C2")] * n)


def dollar_sign() -> CurveGraph:
    return banana(3)


def loops_table(n: int) -> dict[int, int]:
    return {n - k: comb(n, k) for k in range(n + 1)}


def banana_table(n: int) -> dict[int, int]:
    table: dict[int, int] = {}
    for k in range(1, n + 1):
        if comb(n, k) * (k - 1):
            table[n - k] = table.get(n - k, 0) + comb(n, k) * (k - 1)
    # the edgeless subgraph has h = 0, i.e. codimension h(G) = n - 1
    table[n - 1] = table.get(n - 1, 0) + 1
    return dict(sorted(table.items()))


@dataclass
class ExampleCase:
    name: str
    graph: CurveGraph
    expected: dict[int, int]


def example_cases(max_n: int = 4) -> list[ExampleCase]:
    cases = [
        ExampleCase("two components, one node", two_components(), {0: 1}),
        ExampleCase("forest", forest(), {0: 1}),
        ExampleCase("one self-node, genus 1", nodal_irreducible(1, genus=1), {0: 1, 1: 1}),
    ]
    for n in range(1, max_n + 1):
        cases.append(ExampleCase(f"{n} self-nodes", nodal_irreducible(n), loops_table(n)))
    cases.append(ExampleCase("dollar sign", dollar_sign(), {0: 2, 1: 3, 2: 1}))
    for n in range(2, max_n + 1):
        cases.append(ExampleCase(f"{n} nodes between two components", banana(n), banana_table(n)))
    return cases


@dataclass
class ExampleResult:
    name: str
    expected: dict[int, int]
    strata: dict[int, int]
    cells: dict[int, int]

    @property
    def passed(self) -> bool:
        return self.expected == self.strata == self.cells


def run_examples(
    max_n: int = 4,
    jobs: int = 1,
    inject_failure: Optional[str] = None,
    progress: Optional[Callable[[ExampleResult], None]] = None,
) -> list[ExampleResult]:
    """Run strata, cells and the comparison on every example.

    ``inject_failure`` names a case whose expected table is deliberately
    corrupted, to exercise the failure path.
    """
    results = []
    for case in example_cases(max_n):
        expected = dict(case.expected)
        if inject_failure is not None and inject_failure in case.name:
            expected[0] = expected.get(0, 0) + 1
        strata = enumerate_strata(case.graph, jobs=jobs)
        census = enumerate_cells(build_lattice(case.graph), jobs=jobs)
        comparison = compare_with_strata(case.graph, census=census, strata=strata)
        cells = {k: c for k, c in comparison.cells_by_codim.items() if c}
        result = ExampleResult(case.name, dict(sorted(expected.items())), strata.table, cells)
        results.append(result)
        if progress:
            progress(result)
    return results
