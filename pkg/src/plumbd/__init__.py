"""Exact d-invariants and lattice-homology gradings of negative-definite plumbed 3-manifolds."""

from .charlattice import (SpincClass, canonical_rep, chi, class_index, class_of, enumerate_spinc,
                          is_characteristic, same_spinc, square)
from .grading import (GradedRoot, LatticeGenerator, d_from_root, f_weight, g_weight, graded_root,
                      grading, sublevel_components)
from .optimizer import (DInvariantReport, MinChiResult, brute_force_min_chi, continuous_minimizer,
                        d_invariant, d_invariants_all, lambda_lower_bound, max_square_in_class,
                        min_chi)
from .plumbing import (PlumbingGraph, PlumbingMatrix, accept, build_matrix, check_negative_definite,
                       topology_invariants, validate_graph)

__version__ = "0.1.0"

__all__ = [
    "SpincClass", "canonical_rep", "chi", "class_index", "class_of", "enumerate_spinc",
    "is_characteristic", "same_spinc", "square", "GradedRoot", "LatticeGenerator", "d_from_root",
    "f_weight", "g_weight", "graded_root", "grading", "sublevel_components", "DInvariantReport",
    "MinChiResult", "brute_force_min_chi", "continuous_minimizer", "d_invariant",
    "d_invariants_all", "lambda_lower_bound", "max_square_in_class", "min_chi", "PlumbingGraph",
    "PlumbingMatrix", "accept", "build_matrix", "check_negative_definite", "topology_invariants",
    "validate_graph",
]
