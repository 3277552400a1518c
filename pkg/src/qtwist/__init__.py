"""Numerical workbench for quantum R-matrices and dynamical twists.

Small-rank quantized enveloping (super)algebras in finite-dimensional
modules: root systems and normal orderings, representation matrices with
a defining-relations validator, the triangular R-matrix with its
quasi-triangularity suite, and the dynamical layer (twist by product and
by linear solve, dynamical R-matrix, shift identities) with residual
reports for every identity.
"""

from .cartan import (NormalOrdering, RootSystem, Weight, build_root_system,
                     decomposition_pair, default_normal_ordering, pairing,
                     validate_normal_ordering)
from .conventions import CONVENTIONS, conventions_hash
from .dynamical import (DynParam, DynReport, MarginReport, TruncationPolicy,
                        b_matrix, closed_form_reference, convergence_margin,
                        dynamic_checks, f_linear, f_product,
                        fit_closed_form_reparametrization, r_dyn, shift_eval)
from .errors import (AlgebraMismatch, BadInput, BadSpin, DimensionMismatch,
                     EvaluationError, FileFormatError, InvalidOrdering,
                     NotConverged, ResonantParameter, UnknownAlgebra,
                     WorkbenchError)
from .repspace import (OperatorMatrix, RepReport, Representation,
                       composite_root_matrices, embed_12, embed_13, embed_23,
                       graded_flip, graded_kron, osp12_rep, probe_rep,
                       spin_rep_sl2, swap_sides, tensor_rep, validate_rep,
                       vector_rep_b2, vector_rep_sln)
from .rmat import (StaticReport, full_r, k_matrix, max_abs, q_exp,
                   q_factorial, q_int, rel_residual, rhat, rhat_inverse,
                   static_checks)

__version__ = "0.1.0"

__all__ = [
    "NormalOrdering", "RootSystem", "Weight", "build_root_system",
    "decomposition_pair", "default_normal_ordering", "pairing",
    "validate_normal_ordering",
    "CONVENTIONS", "conventions_hash",
    "DynParam", "DynReport", "MarginReport", "TruncationPolicy",
    "b_matrix", "closed_form_reference", "convergence_margin",
    "dynamic_checks", "f_linear", "f_product",
    "fit_closed_form_reparametrization", "r_dyn", "shift_eval",
    "AlgebraMismatch", "BadInput", "BadSpin", "DimensionMismatch",
    "EvaluationError", "FileFormatError", "InvalidOrdering",
    "NotConverged", "ResonantParameter", "UnknownAlgebra", "WorkbenchError",
    "OperatorMatrix", "RepReport", "Representation",
    "composite_root_matrices", "embed_12", "embed_13", "embed_23",
    "graded_flip", "graded_kron", "osp12_rep", "probe_rep", "spin_rep_sl2",
    "swap_sides", "tensor_rep", "validate_rep", "vector_rep_b2",
    "vector_rep_sln",
    "StaticReport", "full_r", "k_matrix", "max_abs", "q_exp", "q_factorial",
    "q_int", "rel_residual", "rhat", "rhat_inverse", "static_checks",
    "__version__",
]
