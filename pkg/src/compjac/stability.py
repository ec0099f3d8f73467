"""(Semi)stability of normalized multidegrees in degree g - 1.

Three equivalent tests are provided for a normalized multidegree ``e`` on a
(generating sub)graph:

* :func:`check_abs` -- ``|e_D - int(D) - cut(D)/2| <= cut(D)/2`` for every
  proper subcurve ``D`` (done in doubled integers);
* :func:`check_edges` -- ``e_D <= int(D) + cut(D)``;
* :func:`realize_orientation` / :func:`is_stable_orientation` -- ``e`` is the
  indegree vector of some orientation, every cut of which carries arrows in
  both directions.

A cut with no crossing edges counts as one-directional, so on a disconnected
graph nothing is stable in the default (whole-curve) mode.  Passing
``componentwise=True`` applies the tests separately on each connected
component instead and additionally requires ``e_K = #edges(K)`` on every
component ``K``; this is the notion used to index strata of a partial
normalization.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Sequence

import networkx as nx

from .errors import CapExceededError, GraphValidationError, InvariantError, SumMismatchError
from .graph import (
    GeneratingSubgraph,
    Graphish,
    as_subgraph,
    component_masks,
    mask_stats,
    mask_to_ids,
)

DEFAULT_VERTEX_CAP = 20
DEFAULT_ORIENTATION_CAP = 24


class Verdict(str, Enum):
    STABLE = "stable"
    STRICTLY_SEMISTABLE = "strictly_semistable"
    UNSTABLE = "unstable"

    def __str__(self):
        return self.value

    @property
    def semistable(self) -> bool:
        return self is not Verdict.UNSTABLE


def normalize(d: Sequence[int], g: Graphish) -> tuple[int, ...]:
    """``e_i = d_i - (genus_i - 1)``."""
    _check_length(d, g)
    return tuple(di - (gi - 1) for di, gi in zip(d, g.genera))


def denormalize(e: Sequence[int], g: Graphish) -> tuple[int, ...]:
    _check_length(e, g)
    return tuple(ei + gi - 1 for ei, gi in zip(e, g.genera))


def _check_length(vec, g):
    if len(vec) != g.n_vertices:
        raise GraphValidationError(f"vector has length {len(vec)}, graph has {g.n_vertices} vertices")


def _check_sum(e, sub):
    _check_length(e, sub)
    if sum(e) != sub.n_edges:
        raise SumMismatchError(f"normalized multidegree sums to {sum(e)}, expected #edges = {sub.n_edges}")


def proper_subcurves(n_vertices: int, components: Optional[list[int]] = None) -> Iterator[int]:
    """Vertex bitmasks of the proper nonempty subcurves to scan.

    With ``components`` given, only proper nonempty subsets of a single
    component are produced.
    """
    if components is None:
        yield from range(1, (1 << n_vertices) - 1)
        return
    for comp in components:
        sub = (comp - 1) & comp
        while sub:
            yield sub
            sub = (sub - 1) & comp


def require_vertex_cap(sub, cap):
    if sub.n_vertices > cap:
        raise CapExceededError("subcurve scan (vertices)", sub.n_vertices, cap)


def classify(
    e: Sequence[int],
    g: Graphish,
    condition: str = "edges",
    componentwise: bool = False,
    cap: int = DEFAULT_VERTEX_CAP,
) -> tuple[Verdict, Optional[int]]:
    """Classify ``e`` and return ``(verdict, witness)``.

    ``witness`` is the vertex bitmask of the first violating subcurve (for
    unstable) or the first subcurve attaining equality (for strictly
    semistable), else ``None``.  ``condition`` is ``"abs"`` or ``"edges"``.
    """
    sub = as_subgraph(g)
    _check_sum(e, sub)
    require_vertex_cap(sub, cap)
    if condition not in ("abs", "edges"):
        raise ValueError(f"unknown condition {condition!r}")
    edges = sub.edges
    comps = None
    if componentwise:
        comps = component_masks(sub)
        for comp in comps:
            internal, _ = mask_stats(edges, comp)
            if _mask_sum(e, comp) != internal:
                return Verdict.UNSTABLE, comp
    equality = None
    for mask in proper_subcurves(sub.n_vertices, comps):
        internal, cut = mask_stats(edges, mask)
        e_d = _mask_sum(e, mask)
        if condition == "abs":
            # |2 e_D - 2 int - cut| <= cut
            lhs = abs(2 * e_d - 2 * internal - cut)
        else:
            lhs = e_d - internal
        if lhs > cut:
            return Verdict.UNSTABLE, mask
        if lhs == cut and equality is None:
            equality = mask
    if equality is not None:
        return Verdict.STRICTLY_SEMISTABLE, equality
    return Verdict.STABLE, None


def _mask_sum(vec, mask):
    total = 0
    i = 0
    while mask:
        if mask & 1:
            total += vec[i]
        mask >>= 1
        i += 1
    return total


def check_abs(e, g: Graphish, componentwise: bool = False, cap: int = DEFAULT_VERTEX_CAP) -> Verdict:
    """Classify ``e`` by the two-sided (absolute value) inequality."""
    return classify(e, g, "abs", componentwise, cap)[0]


def check_edges(e, g: Graphish, componentwise: bool = False, cap: int = DEFAULT_VERTEX_CAP) -> Verdict:
    """Classify ``e`` by ``e_D <= int(D) + cut(D)``."""
    return classify(e, g, "edges", componentwise, cap)[0]


@dataclass(frozen=True)
class Orientation:
    """Direction of every kept edge of a generating subgraph.

    ``forward[j]`` refers to ``subgraph.edge_ids[j]``; forward means
    first stored endpoint -> second.  Loops are always forward.
    """

    subgraph: GeneratingSubgraph
    forward: tuple[bool, ...]

    def __post_init__(self):
        if len(self.forward) != self.subgraph.n_edges:
            raise GraphValidationError("orientation length does not match the subgraph's edge count")

    @classmethod
    def from_heads(cls, g: Graphish, heads: dict) -> "Orientation":
        """Build from ``{edge_id: head vertex index}``."""
        sub = as_subgraph(g)
        fwd = []
        for eid in sub.edge_ids:
            u, v = sub.parent.edges[eid]
            h = heads[eid]
            if h not in (u, v):
                raise GraphValidationError(f"edge {eid}: head {h} is not an endpoint")
            fwd.append(h == v)
        return cls(sub, tuple(fwd))

    def arcs(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(edge_id, tail, head)``."""
        edges = self.subgraph.parent.edges
        for eid, f in zip(self.subgraph.edge_ids, self.forward):
            u, v = edges[eid]
            yield (eid, u, v) if f else (eid, v, u)

    def heads(self) -> dict[int, int]:
        return {eid: h for eid, _, h in self.arcs()}

    def indegrees(self) -> tuple[int, ...]:
        deg = [0] * self.subgraph.n_vertices
        for _, _, h in self.arcs():
            deg[h] += 1
        return tuple(deg)

    def reversed(self) -> "Orientation":
        """Reverse every non-loop arrow."""
        edges = self.subgraph.parent.edges
        fwd = tuple(
            f if edges[eid][0] == edges[eid][1] else not f for eid, f in zip(self.subgraph.edge_ids, self.forward)
        )
        return Orientation(self.subgraph, fwd)


def orientations(g: Graphish, cap: int = DEFAULT_ORIENTATION_CAP) -> Iterator[Orientation]:
    """All orientations of the kept edges (loops have a single direction)."""
    sub = as_subgraph(g)
    edges = sub.parent.edges
    ids = sub.edge_ids
    free = [j for j, eid in enumerate(ids) if edges[eid][0] != edges[eid][1]]
    if len(free) > cap:
        raise CapExceededError("orientations (non-loop edges)", len(free), cap)
    for bits in range(1 << len(free)):
        fwd = [True] * len(ids)
        for k, j in enumerate(free):
            if bits >> k & 1:
                fwd[j] = False
        yield Orientation(sub, tuple(fwd))


def realize_orientation(e: Sequence[int], g: Graphish) -> Optional[Orientation]:
    """An orientation with indegree vector ``e``, or ``None`` if none exists.

    Solved as a max-flow problem source -> edge -> endpoint -> sink, with
    vertex capacities ``e_i``.
    """
    sub = as_subgraph(g)
    _check_sum(e, sub)
    if any(x < 0 for x in e):
        return None
    edges = sub.parent.edges
    net = nx.DiGraph()
    net.add_node("s")
    for eid in sub.edge_ids:
        u, v = edges[eid]
        net.add_edge("s", ("e", eid), capacity=1)
        net.add_edge(("e", eid), ("v", u), capacity=1)
        if v != u:
            net.add_edge(("e", eid), ("v", v), capacity=1)
    for i, cap in enumerate(e):
        net.add_edge(("v", i), "t", capacity=cap)
    value, flow = nx.maximum_flow(net, "s", "t")
    if value != sub.n_edges:
        return None
    heads = {}
    for eid in sub.edge_ids:
        u, v = edges[eid]
        heads[eid] = u if flow[("e", eid)].get(("v", u), 0) == 1 else v
    return Orientation.from_heads(sub, heads)


def cut_directions(o: Orientation, mask: int) -> tuple[int, int]:
    """``(into, out_of)`` arrow counts across the cut ``(D, C - D)``."""
    into = out = 0
    for _, t, h in o.arcs():
        a, b = mask >> t & 1, mask >> h & 1
        if a and not b:
            out += 1
        elif b and not a:
            into += 1
    return into, out


def one_directional_cut(o: Orientation, componentwise: bool = False) -> Optional[int]:
    """First proper subcurve whose cut is crossed in at most one direction."""
    sub = o.subgraph
    comps = component_masks(sub) if componentwise else None
    for mask in proper_subcurves(sub.n_vertices, comps):
        into, out = cut_directions(o, mask)
        if into == 0 or out == 0:
            return mask
    return None


def is_stable_orientation(o: Orientation, componentwise: bool = False, cap: int = DEFAULT_VERTEX_CAP) -> bool:
    """True iff every proper cut carries arrows in both directions."""
    require_vertex_cap(o.subgraph, cap)
    return one_directional_cut(o, componentwise) is None


def indegree_box(g: Graphish) -> Iterator[tuple[int, ...]]:
    """Vectors with ``0 <= e_i <= incidences(i)`` (loops once) summing to #edges."""
    sub = as_subgraph(g)
    n = sub.n_vertices
    upper = [0] * n
    for u, v in sub.edges:
        upper[u] += 1
        if v != u:
            upper[v] += 1
    total = sub.n_edges
    tail = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        tail[i] = tail[i + 1] + upper[i]

    def rec(i, remaining, prefix):
        if i == n:
            if remaining == 0:
                yield tuple(prefix)
            return
        lo = max(0, remaining - tail[i + 1])
        for x in range(lo, min(upper[i], remaining) + 1):
            prefix.append(x)
            yield from rec(i + 1, remaining - x, prefix)
            prefix.pop()

    yield from rec(0, total, [])


def _box_size(sub):
    return sum(1 for _ in indegree_box(sub))


def stable_multidegrees(
    g: Graphish,
    componentwise: bool = False,
    method: str = "auto",
    self_check: bool = False,
) -> list[tuple[int, ...]]:
    """Sorted list of stable normalized multidegrees of ``g``.

    ``method="orientations"`` collects indegree vectors of stable
    orientations, ``"inequalities"`` filters the indegree box with
    :func:`check_abs`; ``"auto"`` picks the cheaper one.  With
    ``self_check`` both are run and compared.
    """
    sub = as_subgraph(g)
    if method == "auto":
        edges = sub.parent.edges
        nonloop = sum(1 for eid in sub.edge_ids if edges[eid][0] != edges[eid][1])
        method = "orientations" if (1 << nonloop) <= _box_size(sub) * (1 << sub.n_vertices) else "inequalities"
    if method == "orientations":
        found = {o.indegrees() for o in orientations(sub) if is_stable_orientation(o, componentwise)}
    elif method == "inequalities":
        found = {e for e in indegree_box(sub) if check_abs(e, sub, componentwise) is Verdict.STABLE}
    else:
        raise ValueError(f"unknown method {method!r}")
    result = sorted(found)
    if self_check:
        other = "inequalities" if method == "orientations" else "orientations"
        again = stable_multidegrees(sub, componentwise, other)
        if again != result:
            raise InvariantError(f"stable multidegrees differ: {method}={result} {other}={again}")
    return result


def witness_ids(g: Graphish, mask: Optional[int]) -> Optional[list[str]]:
    return None if mask is None else list(mask_to_ids(g.graph, mask))


__all__ = [
    "Verdict",
    "Orientation",
    "normalize",
    "denormalize",
    "classify",
    "check_abs",
    "check_edges",
    "realize_orientation",
    "is_stable_orientation",
    "one_directional_cut",
    "orientations",
    "indegree_box",
    "stable_multidegrees",
    "proper_subcurves",
]
