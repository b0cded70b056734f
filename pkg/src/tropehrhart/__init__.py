"""Exact Ehrhart-type computations for tropical vector bundles.

The package builds tropical vector bundles from integer diagrams over
matroids and complete fans, computes their sections and equivariant Euler
characteristics, realizes them as convex chains, and verifies the
combinatorial Riemann-Roch identity and the vanishing theorem for
tautological bundles of matroids.  All arithmetic is exact.
"""

from .chains import (
    ConvexChain,
    MultiValuedSupportFunction,
    SupportNumbers,
    brianchon_gram,
    convolve,
    degree,
    evaluate,
    integral,
    invert_polytope,
    lattice_sum,
    support_function_chain,
)
from .hrr import (
    MultiPoly,
    apply_todd,
    bernoulli,
    hrr_verify,
    interpolate_I,
    todd_coeffs,
)
from .lattice import (
    Cone,
    Fan,
    HPolyhedron,
    VPolytope,
    dual_cone,
    faces,
    is_complete,
    is_refinement,
    is_smooth,
    lattice_points,
    min_containing_cone,
    minkowski_sum,
    refine_by_hyperplanes,
    stellar_subdivision,
    vertex_enumeration,
    volume,
)
from .matroid import (
    FlagOfFlats,
    Matroid,
    apartment_contains,
    bergman_project,
    circuits,
    closure,
    in_lifted_bergman,
    initial_matroid,
    loops,
    matroid_polytope,
    max_weight_basis,
    rank,
    uniform_matroid,
)
from .taut import (
    PermutahedralFan,
    TautologicalBundle,
    flag_alternating_sum,
    permutahedral_fan,
    taut_chi_u,
    taut_h0_global,
    taut_h0_local,
    tautological_bundle,
    vanishing_check,
)
from .tropvb import (
    SplitBundle,
    TropicalVectorBundle,
    k_class,
    k_class_identity,
    split_resolution,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "Cone", "Fan", "HPolyhedron", "VPolytope",
    "dual_cone", "vertex_enumeration", "minkowski_sum", "volume",
    "lattice_points", "faces", "min_containing_cone",
    "refine_by_hyperplanes", "stellar_subdivision",
    "is_refinement", "is_smooth", "is_complete",
    "ConvexChain", "SupportNumbers", "MultiValuedSupportFunction",
    "evaluate", "degree", "convolve", "invert_polytope", "brianchon_gram",
    "lattice_sum", "integral", "support_function_chain",
    "Matroid", "FlagOfFlats", "uniform_matroid",
    "rank", "closure", "circuits", "loops", "matroid_polytope",
    "max_weight_basis", "bergman_project", "in_lifted_bergman",
    "apartment_contains", "initial_matroid",
    "TropicalVectorBundle", "SplitBundle", "validate",
    "split_resolution", "k_class", "k_class_identity",
    "MultiPoly", "bernoulli", "todd_coeffs", "interpolate_I",
    "apply_todd", "hrr_verify",
    "PermutahedralFan", "TautologicalBundle", "permutahedral_fan",
    "tautological_bundle", "taut_h0_global", "taut_h0_local",
    "taut_chi_u", "vanishing_check", "flag_alternating_sum",
]
