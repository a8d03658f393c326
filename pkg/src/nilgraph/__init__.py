"""Nilpotent Lie algebras from Schreier graphs.

Build the labeled Schreier graph of (G, H, C), classify its labels, construct
the associated two- and three-step nilpotent Lie algebras over exact
rationals, verify their structure, compute transplantation operators for
almost-conjugate subgroup pairs, and search numerically for isometries
between the resulting metric algebras.
"""

from .errors import NilgraphError
from .groups import (
    FiniteGroup,
    Permutation,
    almost_conjugate,
    conjugacy_classes,
    element_order,
    generate_group,
    right_cosets,
)
from .lie import (
    NilpotentLieAlgebra,
    TAssignment,
    bracket,
    central_series,
    j_operator,
    three_step,
    two_step,
    verify_jacobi,
)
from .schreier import (
    GeneratorSystem,
    SchreierGraph,
    build_schreier,
    classify_labels,
    digraph_isomorphic,
    export_dot,
    label_cycles,
)

__version__ = "0.1.0"

__all__ = [
    "NilgraphError",
    "FiniteGroup",
    "Permutation",
    "almost_conjugate",
    "conjugacy_classes",
    "element_order",
    "generate_group",
    "right_cosets",
    "NilpotentLieAlgebra",
    "TAssignment",
    "bracket",
    "central_series",
    "j_operator",
    "three_step",
    "two_step",
    "verify_jacobi",
    "GeneratorSystem",
    "SchreierGraph",
    "build_schreier",
    "classify_labels",
    "digraph_isomorphic",
    "export_dot",
    "label_cycles",
]
