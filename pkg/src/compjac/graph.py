"""Dual graphs of nodal curves and their subgraph combinatorics.

A :class:`CurveGraph` is a multigraph with one vertex per irreducible
component (carrying the geometric genus of its normalization) and one edge
per node.  Loops and parallel edges are allowed; edges are identified by
their 0-based position in the input, never by their endpoints.

Vertex subsets (subcurves) are handled internally as integer bitmasks over
vertex indices, and edge subsets (generating subgraphs) as bitmasks over
edge ids.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Union

from .errors import CapExceededError, GraphValidationError

DEFAULT_SUBGRAPH_CAP = 24


@dataclass(frozen=True)
class CurveGraph:
    """Dual graph of a nodal curve with per-vertex geometric genus."""

    vertex_ids: tuple[str, ...]
    genera: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if len(self.vertex_ids) != len(self.genera):
            raise GraphValidationError("vertex_ids and genera differ in length")
        index = {}
        for i, vid in enumerate(self.vertex_ids):
            if vid in index:
                raise GraphValidationError(f"vertices[{i}]: duplicate vertex id {vid!r}")
            index[vid] = i
        for i, g in enumerate(self.genera):
            if not isinstance(g, int) or isinstance(g, bool) or g < 0:
                raise GraphValidationError(
                    f"vertices[{i}] ({self.vertex_ids[i]!r}): genus must be a nonnegative integer, got {g!r}"
                )
        n = len(self.vertex_ids)
        for k, (u, v) in enumerate(self.edges):
            if not (0 <= u < n and 0 <= v < n):
                raise GraphValidationError(f"edges[{k}]: endpoint index out of range")
        object.__setattr__(self, "_index", index)

    @classmethod
    def build(cls, vertices: Iterable, edges: Iterable) -> "CurveGraph":
        """Build from ``(id, genus)`` pairs and ``(id, id)`` endpoint pairs."""
        vertices = [(str(vid), genus) for vid, genus in vertices]
        ids = tuple(vid for vid, _ in vertices)
        index = {vid: i for i, vid in enumerate(ids)}
        resolved = []
        for k, edge in enumerate(edges):
            a, b = edge
            for end in (a, b):
                if str(end) not in index:
                    raise GraphValidationError(f"edges[{k}]: unknown vertex id {end!r}")
            resolved.append((index[str(a)], index[str(b)]))
        return cls(ids, tuple(g for _, g in vertices), tuple(resolved))

    @classmethod
    def from_dict(cls, data) -> "CurveGraph":
        if not isinstance(data, dict):
            raise GraphValidationError("graph document must be a JSON object")
        extra = set(data) - {"vertices", "edges"}
        if extra:
            raise GraphValidationError(f"unexpected top-level key(s): {sorted(extra)}")
        verts = data.get("vertices")
        if not isinstance(verts, list):
            raise GraphValidationError("'vertices' must be a list")
        parsed = []
        for i, item in enumerate(verts):
            if not isinstance(item, dict) or "id" not in item:
                raise GraphValidationError(f"vertices[{i}]: expected an object with an 'id'")
            extra = set(item) - {"id", "genus"}
            if extra:
                raise GraphValidationError(f"vertices[{i}]: unexpected key(s) {sorted(extra)}")
            vid = item["id"]
            if not isinstance(vid, (str, int)) or isinstance(vid, bool):
                raise GraphValidationError(f"vertices[{i}]: id must be a string or integer")
            parsed.append((str(vid), item.get("genus", 0)))
        edges = data.get("edges", [])
        if not isinstance(edges, list):
            raise GraphValidationError("'edges' must be a list")
        pairs = []
        for k, e in enumerate(edges):
            if not isinstance(e, list) or len(e) != 2:
                raise GraphValidationError(f"edges[{k}]: expected a pair [id, id], got {e!r}")
            pairs.append((str(e[0]), str(e[1])))
        return cls.build(parsed, pairs)

    @classmethod
    def from_json(cls, text: str) -> "CurveGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphValidationError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "CurveGraph":
        return cls.from_json(Path(path).read_text())

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": vid, "genus": g} for vid, g in zip(self.vertex_ids, self.genera)],
            "edges": [[self.vertex_ids[u], self.vertex_ids[v]] for u, v in self.edges],
        }

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_ids)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def graph(self) -> "CurveGraph":
        return self

    @property
    def mask(self) -> int:
        return (1 << len(self.edges)) - 1

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(range(len(self.edges)))

    def index(self, vertex_id) -> int:
        try:
            return self._index[str(vertex_id)]
        except KeyError:
            raise GraphValidationError(f"unknown vertex id {vertex_id!r}") from None

    def is_loop(self, edge_id: int) -> bool:
        u, v = self.edges[edge_id]
        return u == v

    def full(self) -> "GeneratingSubgraph":
        return GeneratingSubgraph(self, self.mask)

    def subgraph(self, edge_ids: Iterable[int]) -> "GeneratingSubgraph":
        mask = 0
        for eid in edge_ids:
            if not 0 <= eid < self.n_edges:
                raise GraphValidationError(f"edge id {eid} out of range 0..{self.n_edges - 1}")
            mask |= 1 << eid
        return GeneratingSubgraph(self, mask)


@dataclass(frozen=True)
class GeneratingSubgraph:
    """Spanning subgraph: all vertices of ``parent``, edges selected by ``mask``."""

    parent: CurveGraph
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.parent.n_edges:
            raise GraphValidationError(f"edge mask {self.mask:#b} does not fit {self.parent.n_edges} edges")

    @property
    def graph(self) -> CurveGraph:
        return self.parent

    @property
    def kept_edges(self) -> frozenset[int]:
        return frozenset(self.edge_ids)

    @property
    def edge_ids(self) -> tuple[int, ...]:
        return tuple(k for k in range(self.parent.n_edges) if self.mask >> k & 1)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(self.parent.edges[k] for k in self.edge_ids)

    @property
    def n_vertices(self) -> int:
        return self.parent.n_vertices

    @property
    def n_edges(self) -> int:
        return bin(self.mask).count("1")

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return self.parent.vertex_ids

    @property
    def genera(self) -> tuple[int, ...]:
        return self.parent.genera

    def full(self) -> "GeneratingSubgraph":
        return self


Graphish = Union[CurveGraph, GeneratingSubgraph]


def as_subgraph(g: Graphish) -> GeneratingSubgraph:
    return g.full() if isinstance(g, CurveGraph) else g


@dataclass(frozen=True)
class VertexSet:
    """A subcurve D, i.e. a set of vertices of ``graph``."""

    graph: CurveGraph
    mask: int

    @classmethod
    def from_ids(cls, graph: CurveGraph, ids: Iterable) -> "VertexSet":
        mask = 0
        for vid in ids:
            mask |= 1 << graph.index(vid)
        return cls(graph, mask)

    @property
    def ids(self) -> tuple[str, ...]:
        return mask_to_ids(self.graph, self.mask)

    @property
    def is_empty(self) -> bool:
        return self.mask == 0

    @property
    def is_proper(self) -> bool:
        return self.mask != (1 << self.graph.n_vertices) - 1


def mask_to_ids(graph: CurveGraph, mask: int) -> tuple[str, ...]:
    return tuple(vid for i, vid in enumerate(graph.vertex_ids) if mask >> i & 1)


def mask_stats(edges: Iterable[tuple[int, int]], mask: int) -> tuple[int, int]:
    """(internal, crossing) edge counts of the vertex bitmask ``mask``."""
    internal = crossing = 0
    for u, v in edges:
        a, b = mask >> u & 1, mask >> v & 1
        if a and b:
            internal += 1
        elif a or b:
            crossing += 1
    return internal, crossing


def cyclomatic_number(g: Graphish) -> int:
    """Number of independent cycles: E - V + #components."""
    return g.n_edges - g.n_vertices + len(component_masks(g))


def arithmetic_genus(g: Graphish) -> int:
    """Arithmetic genus ``1 - chi(O_C)`` of the curve (partially normalized along ``g``)."""
    return sum(g.genera) + g.n_edges - g.n_vertices + 1


def subcurve_stats(g: Graphish, D) -> tuple[int, int]:
    """Return ``(internal_edges, crossing_edges)`` of the subcurve ``D`` in ``g``.

    ``D`` is a :class:`VertexSet` or an iterable of vertex ids.  Loops on a
    vertex of ``D`` are internal and never cross.
    """
    if not isinstance(D, VertexSet):
        D = VertexSet.from_ids(g.graph, D)
    if D.is_empty:
        raise GraphValidationError("subcurve must be nonempty")
    return mask_stats(g.edges, D.mask)


def generating_subgraphs(g: Graphish, cap: int = DEFAULT_SUBGRAPH_CAP) -> Iterator[GeneratingSubgraph]:
    """All spanning subgraphs of ``g``, in increasing edge-bitmask order.

    For a :class:`GeneratingSubgraph` input only its kept edges are subsetted.
    """
    sub = as_subgraph(g)
    if sub.n_edges > cap:
        raise CapExceededError("generating subgraphs (edges)", sub.n_edges, cap)
    ids = sub.edge_ids
    parent = sub.parent
    for bits in range(1 << len(ids)):
        mask = 0
        for j, eid in enumerate(ids):
            if bits >> j & 1:
                mask |= 1 << eid
        yield GeneratingSubgraph(parent, mask)


def component_masks(g: Graphish) -> list[int]:
    """Connected components as vertex bitmasks, ordered by smallest vertex index."""
    n = g.n_vertices
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
    groups: dict[int, int] = {}
    for i in range(n):
        r = find(i)
        groups[r] = groups.get(r, 0) | 1 << i
    return [groups[r] for r in sorted(groups)]


def connected_components(g: Graphish) -> list[tuple[str, ...]]:
    """Partition of the vertex ids into connected components."""
    return [mask_to_ids(g.graph, m) for m in component_masks(g)]
