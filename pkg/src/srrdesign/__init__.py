"""Minimum storage for a desired service rate region of a binary coded storage system.

Given T on the subsets of k files, the target region is
R(T) = {lambda >= 0 : sum_{i in U} lambda_i <= T(U)}.  The package computes
lower bounds on the number of nodes needed to serve all of R(T), the exact
minimum for small k, and explicit schemes with checkable allocations.
"""
from .bounds import (
    BoundReport,
    HyperplaneInequality,
    bound_report,
    cor7_bound,
    hyperplane_inequalities,
    thm8_bound,
    thm10_bound,
    thm11_bound,
)
from .construct import SchemeRecipe, construct_k2, construct_simplex_t_fold, verify_scheme
from .gf2geom import (
    Hyperplane,
    PointMultiset,
    RecoverySet,
    enumerate_hyperplanes,
    enumerate_recovery_sets,
    half_simplex_pair,
    point_vector,
    simplex_points,
)
from .ratlp import LinearProgram, SolveResult, solve_ilp, solve_lp, verify_solution
from .region import (
    RegionSpec,
    canonicalize,
    generating_set,
    generating_set_k2,
    is_strictly_redundant,
    lower_set_conv_hull,
    region_contains,
    region_vertices,
    regions_equal,
)
from .service import Allocation, allocate_k2, covers_region, exact_nmin, in_service_region

__version__ = "0.1.0"
