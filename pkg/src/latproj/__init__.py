"""Projections of point lattices approximating arbitrary target lattices."""

from .approximation import (
    ApproximationResult,
    TargetSpec,
    approximate,
    convergence_sweep,
    make_target,
    make_target_from_dual,
)
from .lattice import Lattice, dual, membership, primitive_check, sublattice_equal
from .projection import ProjectionSpec, TriangularSplit, project, triangular_split
from .svp_density import center_density, density_gap, shortest_vector

__all__ = [
    "ApproximationResult",
    "Lattice",
    "ProjectionSpec",
    "TargetSpec",
    "TriangularSplit",
    "approximate",
    "center_density",
    "convergence_sweep",
    "density_gap",
    "dual",
    "make_target",
    "make_target_from_dual",
    "membership",
    "primitive_check",
    "project",
    "shortest_vector",
    "sublattice_equal",
    "triangular_split",
]
