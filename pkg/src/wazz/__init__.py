"""Exact trace equivalence of weighted automata with zig-zag witnesses."""

from .formats import ParseError
from .linalg import Mat, Lattice, rref, kernel_basis, solve, hnf, closure_under_maps
from .automata import (SemiringTag, WeightedAutomaton, Trace, NotEquivalent,
                       step, trace, pair_submodule, equivalent, extend_scalars,
                       parse_automaton, automaton_to_text)
from .hilbert import (IntConeSpec, hilbert_basis, nat_restriction,
                      qplus_restriction_by_scaling, hilbert_bruteforce_oracle)
from .polyhedra import (HRep, VRep, PcaPolytope, INFINITY, dd_h_to_v, dd_v_to_h,
                        gauge, lp_feasible, cone_restriction, simplex_restriction)
from .pca import (GhatElement, LinearCoalgebra, PyramidCert, InconsistentValues,
                  InvariantZeroSet, ghat_member, linear_extension,
                  is_ghat_coalgebra, pyramid_extension, reduce_invariant_set,
                  ghat_apply)
from .zigzag import (ZigZag, ZigZagNode, cubic_zigzag, ghat_zigzag, verify_zigzag,
                     parse_zigzag, zigzag_to_text)

__all__ = [
    "ParseError",
    "Mat", "Lattice", "rref", "kernel_basis", "solve", "hnf",
    "closure_under_maps",
    "SemiringTag", "WeightedAutomaton", "Trace", "NotEquivalent",
    "step", "trace", "pair_submodule", "equivalent", "extend_scalars",
    "parse_automaton", "automaton_to_text",
    "IntConeSpec", "hilbert_basis", "nat_restriction",
    "qplus_restriction_by_scaling", "hilbert_bruteforce_oracle",
    "HRep", "VRep", "PcaPolytope", "INFINITY", "dd_h_to_v", "dd_v_to_h",
    "gauge", "lp_feasible", "cone_restriction", "simplex_restriction",
    "GhatElement", "LinearCoalgebra", "PyramidCert", "InconsistentValues",
    "InvariantZeroSet", "ghat_member", "linear_extension", "is_ghat_coalgebra",
    "pyramid_extension", "reduce_invariant_set", "ghat_apply",
    "ZigZag", "ZigZagNode", "cubic_zigzag", "ghat_zigzag", "verify_zigzag",
    "parse_zigzag", "zigzag_to_text",
]
