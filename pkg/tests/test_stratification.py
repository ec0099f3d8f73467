from math import comb

import pytest
from hypothesis import given, settings

from compjac import (
    GraphValidationError,
    arithmetic_genus,
    check_abs,
    cyclomatic_number,
    enumerate_strata,
    strata_for_forest,
    stable_multidegrees,
    stratum_dimension,
)
from compjac.errors import CapExceededError
from compjac.families import banana, dollar_sign, forest, nodal_irreducible, two_components
from compjac.graph import GeneratingSubgraph, component_masks
from compjac.stability import Verdict

from graphgen import graphs, make_graph, multigraphs, oracle_strata_table


def test_dollar_sign_strata_listing():
    strat = enumerate_strata(dollar_sign())
    rows = [(s.codim, s.kept_edges, s.e, s.d) for s in strat.strata]
    assert rows == [
        (0, (0, 1, 2), (1, 2), (0, 1)),
        (0, (0, 1, 2), (2, 1), (1, 0)),
        (1, (0, 1), (1, 1), (0, 0)),
        (1, (0, 2), (1, 1), (0, 0)),
        (1, (1, 2), (1, 1), (0, 0)),
        (2, (), (0, 0), (-1, -1)),
    ]


@pytest.mark.parametrize("n", range(1, 6))
def test_loop_totals(n):
    strat = enumerate_strata(nodal_irreducible(n))
    assert len(strat) == 2**n
    assert strat.table == {n - k: comb(n, k) for k in range(n + 1)}


@pytest.mark.parametrize("n", range(2, 7))
def test_banana_totals(n):
    strat = enumerate_strata(banana(n))
    assert len(strat) == sum(comb(n, k) * (k - 1) for k in range(1, n + 1)) + 1


def test_small_examples():
    assert len(enumerate_strata(make_graph(1, []))) == 1
    path = make_graph(3, [(0, 1), (1, 2)])
    strat = enumerate_strata(path)
    assert len(strat) == 1
    assert strat.strata[0].e == (0, 0, 0)


def test_forest_shortcut():
    g = two_components(1, 2)
    strat = strata_for_forest(g)
    (s,) = strat.strata
    assert s.d == (0, 1)
    assert strat.strata == enumerate_strata(g).strata
    assert strata_for_forest(forest()).strata == enumerate_strata(forest()).strata
    with pytest.raises(GraphValidationError):
        strata_for_forest(dollar_sign())


def test_stratum_dimension_examples():
    strat = enumerate_strata(dollar_sign())
    dims = {s.codim: stratum_dimension(s) for s in strat.strata}
    assert dims[0] == 2 and dims[2] == 0
    three = enumerate_strata(nodal_irreducible(3))
    one_loop = [s for s in three.strata if len(s.kept_edges) == 1]
    assert {stratum_dimension(s) for s in one_loop} == {1}


def test_strata_cap():
    with pytest.raises(CapExceededError):
        enumerate_strata(nodal_irreducible(5), max_edges=4)


def test_parallel_matches_serial():
    g = make_graph(3, [(0, 1), (0, 1), (1, 2), (0, 2), (2, 2)])
    assert enumerate_strata(g, jobs=3).strata == enumerate_strata(g).strata


@given(graphs(max_v=4, max_e=5, max_genus=1))
@settings(max_examples=80, deadline=None)
def test_stratum_invariants(graph):
    strat = enumerate_strata(graph)
    h = cyclomatic_number(graph)
    connected = len(component_masks(graph)) == 1
    g = arithmetic_genus(graph)
    for s in strat.strata:
        sub = s.subgraph
        assert 0 <= s.codim <= h
        assert s.codim == h - cyclomatic_number(sub)
        assert sum(s.e) == sub.n_edges
        assert check_abs(s.e, sub, componentwise=True) is Verdict.STABLE
        # degree on the partial normalization is g' - 1
        assert sum(s.d) == arithmetic_genus(sub) - 1
        if connected:
            assert stratum_dimension(s) == g - s.codim
        assert stratum_dimension(s) >= 0
    assert sorted(strat.strata, key=lambda s: s.sort_key()) == strat.strata


def test_against_brute_force_oracle():
    for graph in multigraphs(3, 4):
        assert enumerate_strata(graph).table == oracle_strata_table(graph), graph.edges


def _has_bridge(graph):
    base = len(component_masks(graph))
    return any(
        len(component_masks(GeneratingSubgraph(graph, graph.mask & ~(1 << k)))) > base for k in range(graph.n_edges)
    )


def test_codim_zero_strata():
    # top strata always exist; they sit on the whole graph exactly when it has no bridge
    for graph in multigraphs(4, 5, connected=True):
        strat = enumerate_strata(graph)
        top = [s for s in strat.strata if s.codim == 0]
        assert top
        on_whole = any(s.subgraph.mask == graph.mask for s in top)
        assert on_whole == (not _has_bridge(graph)), graph.edges
        assert bool(stable_multidegrees(graph)) == on_whole
