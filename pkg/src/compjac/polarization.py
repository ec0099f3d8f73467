"""Slope stability of admissible sheaves for an arbitrary degree and polarization.

An admissible rank-one sheaf is modelled by a :class:`SheafModel`: the
generating subgraph of nodes where it is locally free, and the multidegree
of the line bundle it comes from on the corresponding partial
normalization.  Everything is integer arithmetic except the Oda-Seshadri
parameter, which is an exact rational vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import GraphValidationError, InvariantError
from .graph import CurveGraph, GeneratingSubgraph, Graphish, VertexSet, arithmetic_genus, mask_stats
from .stability import DEFAULT_VERTEX_CAP, Verdict, proper_subcurves, require_vertex_cap


@dataclass(frozen=True)
class Polarization:
    degrees: tuple[int, ...]

    def __post_init__(self):
        if any(not isinstance(x, int) or x < 1 for x in self.degrees):
            raise GraphValidationError(f"polarization degrees must be positive integers, got {self.degrees}")

    @property
    def total(self) -> int:
        return sum(self.degrees)

    def on(self, mask: int) -> int:
        return sum(x for i, x in enumerate(self.degrees) if mask >> i & 1)


@dataclass(frozen=True)
class SheafModel:
    subgraph: GeneratingSubgraph
    dprime: tuple[int, ...]

    def __post_init__(self):
        if len(self.dprime) != self.subgraph.n_vertices:
            raise GraphValidationError("multidegree length does not match the vertex count")

    @classmethod
    def line_bundle(cls, graph: CurveGraph, d: Sequence[int]) -> "SheafModel":
        return cls(graph.full(), tuple(d))

    @property
    def eprime(self) -> tuple[int, ...]:
        return tuple(d - (g - 1) for d, g in zip(self.dprime, self.subgraph.genera))


def sheaf_chi(sheaf: SheafModel) -> int:
    """Euler characteristic: sum(d'_i + 1 - g_i) - #kept edges."""
    sub = sheaf.subgraph
    return sum(d + 1 - g for d, g in zip(sheaf.dprime, sub.genera)) - sub.n_edges


def sheaf_degree(sheaf: SheafModel, graph: Optional[CurveGraph] = None) -> int:
    """``deg F = chi(F) + g - 1`` with g the arithmetic genus of the whole curve."""
    graph = graph or sheaf.subgraph.parent
    deg = sheaf_chi(sheaf) + arithmetic_genus(graph) - 1
    # the line bundle upstairs loses one degree per node where F is not invertible
    if sum(sheaf.dprime) != deg - (graph.n_edges - sheaf.subgraph.n_edges):
        raise InvariantError("degree bookkeeping on the partial normalization is inconsistent")
    return deg


def _subsheaf_chi_mask(sheaf: SheafModel, eprime, mask: int) -> int:
    internal, crossing = mask_stats(sheaf.subgraph.edges, mask)
    return sum(x for i, x in enumerate(eprime) if mask >> i & 1) - internal - crossing


def subsheaf_chi(sheaf: SheafModel, D) -> int:
    """Euler characteristic of the largest subsheaf supported on the subcurve ``D``."""
    if not isinstance(D, VertexSet):
        D = VertexSet.from_ids(sheaf.subgraph.parent, D)
    if D.is_empty or not D.is_proper:
        raise GraphValidationError("subcurve must be nonempty and proper")
    return _subsheaf_chi_mask(sheaf, sheaf.eprime, D.mask)


def slope(sheaf: SheafModel, polarization: Polarization) -> Fraction:
    return Fraction(sheaf_chi(sheaf), polarization.total)


def classify_L(
    sheaf: SheafModel, polarization: Polarization, cap: int = DEFAULT_VERTEX_CAP
) -> tuple[Verdict, Optional[int]]:
    """Verdict and witness subcurve bitmask (first violation, else first equality)."""
    sub = sheaf.subgraph
    if len(polarization.degrees) != sub.n_vertices:
        raise GraphValidationError("polarization length does not match the vertex count")
    require_vertex_cap(sub, cap)
    chi = sheaf_chi(sheaf)
    lam = polarization.total
    ep = sheaf.eprime
    equality = None
    for mask in proper_subcurves(sub.n_vertices):
        lhs = lam * _subsheaf_chi_mask(sheaf, ep, mask)
        rhs = polarization.on(mask) * chi
        if lhs > rhs:
            return Verdict.UNSTABLE, mask
        if lhs == rhs and equality is None:
            equality = mask
    if equality is not None:
        return Verdict.STRICTLY_SEMISTABLE, equality
    return Verdict.STABLE, None


def is_semistable_L(sheaf: SheafModel, polarization: Polarization, cap: int = DEFAULT_VERTEX_CAP) -> Verdict:
    """Seshadri-slope classification of ``sheaf`` with respect to ``polarization``."""
    return classify_L(sheaf, polarization, cap)[0]


def canonical_multidegree(graph: Graphish) -> tuple[int, ...]:
    """Multidegree of the dualizing sheaf: 2 g_i - 2 + (branches through C_i)."""
    omega = [2 * g - 2 for g in graph.genera]
    for u, v in graph.edges:
        omega[u] += 1
        omega[v] += 1
    return tuple(omega)


def proportional_split(total: int, weights: Sequence[int]) -> tuple[int, ...]:
    """Floor of ``total * w_i / sum(w)``, remainder handed out from the first vertex on."""
    wsum = sum(weights)
    parts = [total * w // wsum for w in weights]
    for i in range(total - sum(parts)):
        parts[i] += 1
    return tuple(parts)


@dataclass(frozen=True)
class PhiVector:
    values: tuple[Fraction, ...]

    def reduced(self) -> tuple[Fraction, ...]:
        """Representative modulo Z^n with every entry in [0, 1)."""
        return tuple(x - (x.numerator // x.denominator) for x in self.values)

    def equivalent(self, other: "PhiVector") -> bool:
        return self.reduced() == other.reduced()


def compute_phi(
    polarization: Polarization,
    omega: Sequence[int],
    d: int,
    d_choice: Optional[Sequence[int]] = None,
    ntilde: Optional[Sequence[int]] = None,
    graph: Optional[CurveGraph] = None,
) -> PhiVector:
    """Solve ``(lambda_i/lambda)(d - omega/2) = d_i - omega_i/2 + n_i + phi_i`` for phi.

    ``d_choice`` defaults to the proportional split of ``d`` by the
    polarization and ``ntilde`` to zero; other choices move phi by an
    integer vector.
    """
    lam = polarization.degrees
    n = len(lam)
    if len(omega) != n:
        raise GraphValidationError("omega length does not match the polarization")
    if graph is not None:
        if graph.n_vertices != n:
            raise GraphValidationError("polarization length does not match the vertex count")
        expected = 2 * arithmetic_genus(graph) - 2
        if sum(omega) != expected:
            raise GraphValidationError(f"omega sums to {sum(omega)}, expected 2g - 2 = {expected}")
    if d_choice is None:
        d_choice = proportional_split(d, lam)
    elif len(d_choice) != n or sum(d_choice) != d:
        raise GraphValidationError(f"d_choice must have {n} entries summing to {d}")
    if ntilde is None:
        ntilde = (0,) * n
    elif len(ntilde) != n:
        raise GraphValidationError(f"ntilde must have {n} entries")
    total = Fraction(sum(omega), 2)
    share = Fraction(d) - total
    lam_total = polarization.total
    return PhiVector(
        tuple(
            Fraction(li, lam_total) * share - di + Fraction(wi, 2) - ni
            for li, di, wi, ni in zip(lam, d_choice, omega, ntilde)
        )
    )
