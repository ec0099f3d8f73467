"""Combinatorics of compactified Jacobians of nodal curves.

Strata of the canonical compactified Jacobian in degree g - 1, slope
stability for arbitrary degree and polarization, and Delaunay cells of the
cycle lattice of the dual graph.
"""

from .errors import CapExceededError, CompJacError, GraphValidationError, InvariantError, SumMismatchError
from .graph import (
    CurveGraph,
    GeneratingSubgraph,
    VertexSet,
    arithmetic_genus,
    connected_components,
    cyclomatic_number,
    generating_subgraphs,
    subcurve_stats,
)
from .lattice import (
    CycleLattice,
    DelaunayCell,
    build_lattice,
    cell_from_sign,
    combinatorial_dimension,
    compare_with_strata,
    enumerate_cells,
    orientation_to_cell,
    saturation_check,
)
from .polarization import (
    PhiVector,
    Polarization,
    SheafModel,
    compute_phi,
    is_semistable_L,
    sheaf_degree,
    subsheaf_chi,
)
from .stability import (
    Orientation,
    Verdict,
    check_abs,
    check_edges,
    denormalize,
    is_stable_orientation,
    normalize,
    realize_orientation,
    stable_multidegrees,
)
from .stratification import Stratification, Stratum, enumerate_strata, strata_for_forest, stratum_dimension

__version__ = "0.1.0"
