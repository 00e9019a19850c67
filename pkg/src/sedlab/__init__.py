"""sedlab: exact Cayley-Dickson arithmetic, determinant factorization
checks for sedenion multiplication operators, cyclic-slice level sets,
and discrete frame-transport holonomy."""

__version__ = "0.1.0"

from .algebra import (CDElement, OctonionPair, basis, cd_multiply, conjugate,
                      element, format_element, inner, join, norm_sq,
                      parse_element, split, zero)
from .invariants import (Frame, InvariantTriple, check_factorization, d1,
                         d2_component, d2_geometric, find_annihilator,
                         invariant_triple, is_zero_divisor, stiefel_normalize,
                         stiefel_scale)
from .operators import det_exact, det_float, left_mult_matrix, \
    right_mult_matrix

__all__ = [
    "CDElement", "OctonionPair", "Frame", "InvariantTriple",
    "basis", "cd_multiply", "conjugate", "element", "format_element",
    "inner", "join", "norm_sq", "parse_element", "split", "zero",
    "check_factorization", "d1", "d2_component", "d2_geometric",
    "find_annihilator", "invariant_triple", "is_zero_divisor",
    "stiefel_normalize", "stiefel_scale",
    "det_exact", "det_float", "left_mult_matrix", "right_mult_matrix",
    "__version__",
]
