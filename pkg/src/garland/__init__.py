"""Garland's method for simplicial and cubical complexes: link graphs,
spectral gaps, explicit Garland structures and rational cohomology."""
from .cohomology import betti, cohomology_report, connecting_class, lt_dims, theorem_check
from .complex import (
    CUBICAL, SIMPLICIAL, Cell, CellComplex, FacePoset, face_poset, parse_complex,
    serialize_complex, validate,
)
from .exactness import alpha, assemble, beta, h0_dim, rayleigh_residual, verify_block_decomposition, \
    verify_complex_identities
from .generators import (
    RandomModelParams, cross_polytope, cube, cube_skeleton, cycle, moment_angle, random_cubical,
    random_simplicial, sample, simplex, small_library, torus_cubical, torus_simplicial,
)
from .poset import PHI, build_garland, check_axioms, check_monodromy_free, link_components, \
    orient_transversal
from .spectral import evaluate_criterion, normalized_laplacian, spectral_gap, spectrum, threshold

__all__ = [
    "CUBICAL", "SIMPLICIAL", "PHI", "Cell", "CellComplex", "FacePoset", "RandomModelParams",
    "alpha", "assemble", "beta", "betti", "build_garland", "check_axioms", "check_monodromy_free",
    "cohomology_report", "connecting_class", "cross_polytope", "cube", "cube_skeleton", "cycle",
    "evaluate_criterion", "face_poset", "h0_dim", "link_components", "lt_dims", "moment_angle",
    "normalized_laplacian", "orient_transversal", "parse_complex", "random_cubical",
    "random_simplicial", "rayleigh_residual", "sample", "serialize_complex", "simplex",
    "small_library", "spectral_gap", "spectrum", "theorem_check", "threshold", "torus_cubical",
    "torus_simplicial", "validate", "verify_block_decomposition", "verify_complex_identities",
]
