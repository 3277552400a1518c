"""Exception hierarchy for the workbench.

Everything raised on purpose derives from WorkbenchError so the command
line layer can map failures onto exit codes without enumerating causes.
"""

from __future__ import annotations


class WorkbenchError(Exception):
    """Base class for all deliberate failures."""


class BadInput(WorkbenchError):
    """Configuration or file content that cannot be used at all."""


class UnknownAlgebra(BadInput):
    pass


class UnsupportedRank(BadInput):
    pass


class BadSpin(BadInput):
    pass


class AlgebraMismatch(BadInput):
    pass


class DimensionMismatch(BadInput):
    pass


class FileFormatError(BadInput):
    """Malformed or internally inconsistent representation/matrix file."""


class NotAPermutation(WorkbenchError):
    """Candidate ordering is not a permutation of the positive roots."""


class InvalidOrdering(WorkbenchError):
    """Ordering fails the betweenness test for composite roots."""


class NotDecomposable(WorkbenchError):
    """Simple (or unknown) root passed where a composite one is needed."""


class NegativeN(WorkbenchError):
    pass


class NotNilpotent(WorkbenchError):
    """q-exponential argument has no vanishing power within the dimension."""


class DegenerateBase(WorkbenchError):
    """A q-integer needed by a q-factorial vanishes for this base."""


class InconsistentRatio(WorkbenchError):
    """Normalisation constant extraction found incompatible eigenvalue ratios."""


class AllDenominatorsSmall(WorkbenchError):
    """No basis vector gives a usable denominator for the ratio extraction."""


class EvaluationError(WorkbenchError):
    """Numerical construction failed for a reason the caller may retry around."""


class ResonantParameter(EvaluationError):
    """Dynamical parameter sits on (or too close to) a denominator variety."""


class NotConverged(EvaluationError):
    """Infinite-product truncation did not reach the stop tolerance."""

    def __init__(self, message: str, tail_norm: float = float("nan"),
                 n_factors: int = 0):
        super().__init__(message)
        self.tail_norm = tail_norm
        self.n_factors = n_factors
