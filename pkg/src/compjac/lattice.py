"""Cycle lattice H_1(G, Z) inside the edge lattice C_1(G, Z) and its Delaunay cells.

Coordinates on C_1 are indexed by edge id, with each edge oriented from its
first stored endpoint to its second (the reference orientation).  A sign
vector picks, per edge, the bounds ``[0, 1]`` (``+``), ``[-1, 0]`` (``-``) or
``[0, 0]`` (``0``); the corresponding cell is that box face intersected with
H_1(R).  Every Delaunay cell of the lattice is, up to translation by
H_1(Z), of this form.

All polytope work is exact over the rationals.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from sympy import Matrix as SymMatrix
from sympy import ZZ
from sympy.matrices.normalforms import invariant_factors

from . import linalg
from .errors import CapExceededError, GraphValidationError, InvariantError
from .graph import CurveGraph, GeneratingSubgraph, Graphish, as_subgraph, component_masks, cyclomatic_number
from .stability import Orientation
from .stratification import enumerate_strata

DEFAULT_CELL_CAP = 10

PLUS, MINUS, ZERO = 1, -1, 0
_SIGN_CHARS = {PLUS: "+", MINUS: "-", ZERO: "0"}
_SIGN_ORDER = {ZERO: 0, PLUS: 1, MINUS: 2}
_BOUNDS = {PLUS: (0, 1), MINUS: (-1, 0), ZERO: (0, 0)}

SignVector = tuple[int, ...]


def parse_sign(text: str) -> SignVector:
    lookup = {"+": PLUS, "-": MINUS, "0": ZERO}
    try:
        return tuple(lookup[c] for c in text)
    except KeyError as exc:
        raise GraphValidationError(f"bad sign character {exc.args[0]!r} in {text!r}") from None


def format_sign(sign: SignVector) -> str:
    return "".join(_SIGN_CHARS[s] for s in sign)


def sign_key(sign: SignVector) -> tuple[int, ...]:
    return tuple(_SIGN_ORDER[s] for s in sign)


def bounds(sign: SignVector) -> list[tuple[int, int]]:
    return [_BOUNDS[s] for s in sign]


@dataclass(frozen=True)
class CycleLattice:
    graph: CurveGraph
    basis: tuple[tuple[int, ...], ...]
    gram: tuple[tuple[int, ...], ...]
    forest_edges: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.basis)


def build_lattice(graph: CurveGraph) -> CycleLattice:
    """Fundamental cycles of a spanning forest, chosen greedily in edge order."""
    n = graph.n_vertices
    adjacency: dict[int, list[tuple[int, int, int]]] = {i: [] for i in range(n)}
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    forest, cotree = [], []
    for eid, (u, v) in enumerate(graph.edges):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            forest.append(eid)
            # (neighbour, edge, +1 if traversed along reference direction)
            adjacency[u].append((v, eid, 1))
            adjacency[v].append((u, eid, -1))
        else:
            cotree.append(eid)

    def forest_path(src, dst):
        """Signed edge vector of the forest path src -> dst."""
        prev = {src: None}
        stack = [src]
        while stack:
            x = stack.pop()
            if x == dst:
                break
            for y, eid, s in adjacency[x]:
                if y not in prev:
                    prev[y] = (x, eid, s)
                    stack.append(y)
        vec = [0] * graph.n_edges
        x = dst
        while prev[x] is not None:
            px, eid, s = prev[x]
            vec[eid] += s
            x = px
        return vec

    basis = []
    for eid in cotree:
        u, v = graph.edges[eid]
        vec = forest_path(v, u) if u != v else [0] * graph.n_edges
        vec[eid] += 1
        basis.append(tuple(vec))
    gram = tuple(tuple(sum(a * b for a, b in zip(r, s)) for s in basis) for r in basis)
    return CycleLattice(graph, tuple(basis), gram, tuple(forest))


def boundary(graph: CurveGraph, x: Sequence) -> list:
    """Net inflow at each vertex of the edge chain ``x``."""
    out = [0] * graph.n_vertices
    for (u, v), xe in zip(graph.edges, x):
        out[v] += xe
        out[u] -= xe
    return out


def saturation_check(lattice: CycleLattice) -> bool:
    """True iff the basis spans a saturated sublattice of Z^E.

    Equivalent to every invariant factor of the basis matrix being 1.
    """
    if not lattice.basis:
        return True
    factors = invariant_factors(SymMatrix(lattice.basis), domain=ZZ)
    nonzero = [f for f in factors if f != 0]
    return len(nonzero) == lattice.rank and all(abs(int(f)) == 1 for f in nonzero)


@dataclass(frozen=True)
class DelaunayCell:
    sign: SignVector
    vertices: tuple[tuple[Fraction, ...], ...]
    dim: int

    @property
    def sign_text(self) -> str:
        return format_sign(self.sign)


def polytope_vertices(lattice: CycleLattice, sign: SignVector) -> list[tuple[Fraction, ...]]:
    """Vertices of ``{x in H_1(R) : a <= x <= b}`` by exact enumeration.

    Works in coordinates ``x = M z`` of the subspace of H_1 where the
    zero-sign coordinates vanish, and solves every square subsystem of
    active bounds.
    """
    n_edges = lattice.graph.n_edges
    if len(sign) != n_edges:
        raise GraphValidationError(f"sign vector has length {len(sign)}, graph has {n_edges} edges")
    origin = tuple(Fraction(0) for _ in range(n_edges))
    if not lattice.basis:
        return [origin]
    basis_t = [list(col) for col in zip(*lattice.basis)]  # E x h
    h = lattice.rank
    zero_rows = [basis_t[j] for j in range(n_edges) if sign[j] == ZERO]
    sub = linalg.nullspace(zero_rows, h)  # rows span the allowed y
    if not sub:
        return [origin]
    sub = [linalg.clear_denominators(row) for row in sub]
    m = linalg.matmul(basis_t, [list(c) for c in zip(*sub)])  # E x w, integer
    w = len(sub)
    active = [j for j in range(n_edges) if sign[j] != ZERO]
    bnds = bounds(sign)
    found = set()
    for rows in itertools.combinations(active, w):
        adj, det = linalg.adjugate([m[j] for j in rows])
        if det == 0:
            continue
        if det < 0:
            adj = [[-x for x in row] for row in adj]
            det = -det
        # x = (m @ adj @ c) / det for the chosen bound values c
        p = linalg.matmul(m, adj)
        lo = [bnds[j][0] * det for j in range(n_edges)]
        hi = [bnds[j][1] * det for j in range(n_edges)]
        for choice in itertools.product(*(bnds[j] for j in rows)):
            num = [sum(a * c for a, c in zip(row, choice)) for row in p]
            if all(lo[j] <= num[j] <= hi[j] for j in range(n_edges)):
                found.add(tuple(Fraction(x, det) for x in num))
    return sorted(found)


def _reachability(n: int, arcs: list[tuple[int, int]]) -> list[int]:
    reach = [1 << i for i in range(n)]
    out = [[] for _ in range(n)]
    for t, h in arcs:
        out[t].append(h)
    for s in range(n):
        stack = [s]
        while stack:
            x = stack.pop()
            for y in out[x]:
                if not reach[s] >> y & 1:
                    reach[s] |= 1 << y
                    stack.append(y)
    return reach


def circulating_edges(graph: CurveGraph, sign: SignVector) -> list[int]:
    """Edges lying on a directed cycle of the partial orientation given by ``sign``."""
    arcs = {}
    for eid, s in enumerate(sign):
        if s == ZERO:
            continue
        u, v = graph.edges[eid]
        arcs[eid] = (u, v) if s == PLUS else (v, u)
    reach = _reachability(graph.n_vertices, list(arcs.values()))
    return [eid for eid, (t, h) in arcs.items() if reach[h] >> t & 1]


def canonical_sign(graph: CurveGraph, sign: SignVector) -> SignVector:
    """Zero out the edges that carry no circulation; the cell is unchanged."""
    keep = set(circulating_edges(graph, sign))
    return tuple(s if eid in keep else ZERO for eid, s in enumerate(sign))


def combinatorial_dimension(lattice: CycleLattice, sign: SignVector) -> int:
    """h of the subgraph formed by the circulating edges."""
    graph = lattice.graph
    keep = circulating_edges(graph, sign)
    sub = GeneratingSubgraph(graph, sum(1 << eid for eid in keep))
    return cyclomatic_number(sub)


def cell_from_sign(lattice: CycleLattice, sign: SignVector, verify: bool = True) -> DelaunayCell:
    sign = tuple(sign)
    verts = polytope_vertices(lattice, sign)
    dim = linalg.affine_dimension(verts)
    if verify:
        fast = combinatorial_dimension(lattice, sign)
        if fast != dim:
            raise InvariantError(f"cell {format_sign(sign)}: combinatorial dim {fast} != polytope dim {dim}")
    return DelaunayCell(sign, tuple(verts), dim)


def orientation_sign(orientation: Orientation) -> SignVector:
    sign = [ZERO] * orientation.subgraph.parent.n_edges
    for eid, fwd in zip(orientation.subgraph.edge_ids, orientation.forward):
        sign[eid] = PLUS if fwd else MINUS
    return tuple(sign)


def orientation_to_cell(lattice: CycleLattice, orientation: Orientation) -> DelaunayCell:
    """Cell of the box face selected by an orientation of a generating subgraph."""
    return cell_from_sign(lattice, orientation_sign(orientation))


def orientation_cell_is_tight(lattice: CycleLattice, orientation: Orientation) -> bool:
    """True iff the cell is not squeezed into a smaller face of its box.

    That is, every kept edge is nonzero somewhere on the cell, or equivalently
    lies on a directed cycle.  This holds exactly for orientations that are
    stable on every connected component of the subgraph, and then the cell
    has dimension h(subgraph).
    """
    sign = orientation_sign(orientation)
    return canonical_sign(lattice.graph, sign) == sign


def _translation_key(verts: tuple[tuple[Fraction, ...], ...]):
    base = verts[0]
    shifted = frozenset(tuple(x - b for x, b in zip(v, base)) for v in verts)
    frac = tuple(b - (b.numerator // b.denominator) for b in base)
    return shifted, frac


def _cells_for_signs(lattice: CycleLattice, signs: list[SignVector]) -> list[DelaunayCell]:
    return [cell_from_sign(lattice, s) for s in signs]


@dataclass
class CellCensus:
    lattice: CycleLattice
    representatives: list[DelaunayCell]
    n_sign_vectors: int
    n_distinct_cells: int
    counts: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.counts:
            c = Counter(cell.dim for cell in self.representatives)
            self.counts = dict(sorted(c.items(), reverse=True))


def enumerate_cells(lattice: CycleLattice, max_edges: int = DEFAULT_CELL_CAP, jobs: int = 1) -> CellCensus:
    """Delaunay cells modulo translation by H_1(Z), from all 3^E sign vectors."""
    graph = lattice.graph
    if graph.n_edges > max_edges:
        raise CapExceededError("cell enumeration (edges)", graph.n_edges, max_edges)
    canonical = set()
    n_signs = 0
    for sign in itertools.product((ZERO, PLUS, MINUS), repeat=graph.n_edges):
        n_signs += 1
        canonical.add(canonical_sign(graph, sign))
    signs = sorted(canonical, key=sign_key)
    if jobs > 1 and len(signs) > 1:
        chunks = [signs[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            cells = [c for part in pool.map(_cells_for_signs, [lattice] * jobs, chunks) for c in part]
    else:
        cells = _cells_for_signs(lattice, signs)
    by_points: dict = {}
    for cell in cells:
        key = frozenset(cell.vertices)
        best = by_points.get(key)
        if best is None or sign_key(cell.sign) < sign_key(best.sign):
            by_points[key] = cell
    classes: dict = {}
    for cell in by_points.values():
        key = _translation_key(cell.vertices)
        best = classes.get(key)
        if best is None or sign_key(cell.sign) < sign_key(best.sign):
            classes[key] = cell
    reps = sorted(classes.values(), key=lambda c: (-c.dim, sign_key(c.sign)))
    return CellCensus(lattice, reps, n_signs, len(by_points))


def translation_equivalent(a: DelaunayCell, b: DelaunayCell) -> Optional[tuple[int, ...]]:
    """Integer vector ``t`` with ``a = b + t`` as point sets, if one exists."""
    if len(a.vertices) != len(b.vertices) or not a.vertices:
        return None
    t = tuple(x - y for x, y in zip(min(a.vertices), min(b.vertices)))
    if any(c.denominator != 1 for c in t):
        return None
    moved = {tuple(x + s for x, s in zip(v, t)) for v in b.vertices}
    return tuple(int(c) for c in t) if moved == set(a.vertices) else None


@dataclass
class Comparison:
    h: int
    strata_by_codim: dict[int, int]
    cells_by_codim: dict[int, int]
    mismatches: list[int]

    @property
    def match(self) -> bool:
        return not self.mismatches


def compare_with_strata(graph: CurveGraph, max_edges: int = DEFAULT_CELL_CAP, jobs: int = 1, census=None, strata=None) -> Comparison:
    """Per-codimension counts of strata versus Delaunay cells modulo translation."""
    if census is None:
        census = enumerate_cells(build_lattice(graph), max_edges=max_edges, jobs=jobs)
    if strata is None:
        strata = enumerate_strata(graph, max_edges=max(max_edges, graph.n_edges), jobs=jobs)
    h = cyclomatic_number(graph)
    cells = {h - dim: count for dim, count in census.counts.items()}
    codims = sorted(set(cells) | set(strata.table))
    mismatches = [k for k in codims if cells.get(k, 0) != strata.table.get(k, 0)]
    return Comparison(
        h,
        {k: strata.table.get(k, 0) for k in codims},
        {k: cells.get(k, 0) for k in codims},
        mismatches,
    )


def spanning_tree_count(graph: Graphish) -> int:
    """Product over components of the number of spanning trees (matrix-tree theorem)."""
    sub = as_subgraph(graph)
    total = 1
    for comp in component_masks(sub):
        verts = [i for i in range(sub.n_vertices) if comp >> i & 1]
        pos = {v: k for k, v in enumerate(verts)}
        lap = [[0] * len(verts) for _ in verts]
        for u, v in sub.edges:
            if u == v or u not in pos:
                continue
            a, b = pos[u], pos[v]
            lap[a][a] += 1
            lap[b][b] += 1
            lap[a][b] -= 1
            lap[b][a] -= 1
        minor = [row[1:] for row in lap[1:]]
        total *= linalg.det(minor)
    return total
