"""The universal R-matrix in finite-dimensional modules.

R factorises as K * Rhat: a diagonal weight-pairing part and a unipotent
ordered product of root-wise q-exponentials

    Rhat_alpha = exp_{qbar_alpha}( (-1)^deg(alpha) (q - 1/q) / a_alpha *
                                   e_alpha x f_alpha ),

with qbar_alpha = (-1)^deg(alpha) q^(-(alpha|alpha)).  The q-exponential
here uses the one-sided integers [n] = (1 - q^n)/(1 - q); these are NOT
the symmetric integers appearing in matrix elements, and the two
conventions coexist on purpose.

a_alpha is the constant in [e_alpha, f_alpha] = a_alpha (q^{t_alpha} -
q^{-t_alpha})/(q - 1/q); it is representation independent and extracted
once per (algebra, ordering, q) from a faithful probe module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import conventions
from .cartan import NormalOrdering, RootSystem, Weight, pairing
from .errors import (
    AllDenominatorsSmall,
    DegenerateBase,
    InconsistentRatio,
    NegativeN,
    NotNilpotent,
)
from .repspace import (
    OperatorMatrix,
    Representation,
    composite_root_matrices,
    embed_12,
    embed_13,
    embed_23,
    graded_kron,
    probe_rep,
    tensor_rep,
)


def max_abs(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def rel_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    """Max-abs residual normalised by max(1, |lhs|, |rhs|)."""
    scale = max(1.0, max_abs(lhs), max_abs(rhs))
    return max_abs(lhs - rhs) / scale


# ---------------------------------------------------------------------------
# q-arithmetic (one-sided convention)


def q_int(n: int, q: complex) -> complex:
    """[n]_q = (1 - q^n)/(1 - q); [n]_1 would be n but q=1 is out of range."""
    if n < 0:
        raise NegativeN(f"q-integer index must be non-negative, got {n}")
    return (1.0 - q**n) / (1.0 - q)


def q_factorial(n: int, q: complex) -> complex:
    if n < 0:
        raise NegativeN(f"q-factorial index must be non-negative, got {n}")
    out = 1.0 + 0.0j
    for k in range(1, n + 1):
        out *= q_int(k, q)
    return out


_NILPOTENT_FLOOR = 1e-300


def q_exp(z, base: complex):
    """exp_base(z) = sum_n z^n / [n]_base! for a nilpotent matrix z."""
    wrap = isinstance(z, OperatorMatrix)
    m = z.matrix if wrap else np.asarray(z, dtype=complex)
    dim = m.shape[0]
    out = np.eye(dim, dtype=complex)
    power = np.eye(dim, dtype=complex)
    k = 0
    while True:
        power = power @ m
        k += 1
        if max_abs(power) < _NILPOTENT_FLOOR:
            break
        if k > dim:
            raise NotNilpotent(
                f"no power up to the dimension {dim} vanished; argument is "
                "not (numerically) nilpotent")
        fact = q_factorial(k, base)
        if abs(fact) < 1e-250:
            raise DegenerateBase(
                f"[{k}]! vanishes for base {base}; series undefined")
        out = out + power / fact
    return OperatorMatrix(out, z.space) if wrap else out


def q_exp_inverse_base(base: complex) -> complex:
    return 1.0 / base


# ---------------------------------------------------------------------------
# a_alpha extraction


@dataclass
class AlphaConstants:
    """Per-root normalisation constants for one (algebra, ordering, q)."""

    rs: RootSystem
    ordering: NormalOrdering
    q: float
    values: dict[Weight, complex]

    def __getitem__(self, root: Weight) -> complex:
        return self.values[root]


def _extract_ratio(bracket: np.ndarray, denom_diag: np.ndarray,
                   *, small: float = 1e-8, spread: float = 1e-10) -> complex:
    """Ratio bracket/denominator on the usable diagonal, checked for
    consistency; the bracket must be diagonal to working precision."""
    scale = max(1.0, max_abs(bracket))
    off = bracket - np.diag(np.diag(bracket))
    if max_abs(off) > 1e-9 * scale:
        raise InconsistentRatio(
            f"commutator is not diagonal (off-diagonal {max_abs(off):.2e})")
    num = np.diag(bracket)
    den = np.diag(denom_diag)
    usable = [b for b in range(len(num)) if abs(den[b]) > small]
    if not usable:
        raise AllDenominatorsSmall("no usable basis vector for the ratio")
    ratios = [num[b] / den[b] for b in usable]
    ref = ratios[0]
    if max(abs(r - ref) for r in ratios) > spread * max(1.0, abs(ref)):
        raise InconsistentRatio(f"eigenvalue ratios disagree: {ratios}")
    return complex(ref)


def a_alpha(rs: RootSystem, ordering: NormalOrdering, q: float) -> AlphaConstants:
    """Extract a_alpha for every positive root from the probe module."""
    rep = probe_rep(rs, q)
    mats = composite_root_matrices(rep, ordering)
    values: dict[Weight, complex] = {}
    simples = set(rs.simple_roots)
    for gamma in ordering.sequence:
        e_g, f_g = mats[gamma]
        deg = rs.parity[gamma]
        sign = (-1.0) ** deg
        bracket = e_g @ f_g - sign * f_g @ e_g
        tvals = np.array([float(pairing(w, gamma, rs)) for w in rep.weights])
        denom = np.diag((q**tvals - q**(-tvals)) / (q - 1.0 / q)).astype(complex)
        val = _extract_ratio(bracket, denom)
        if gamma in simples:
            # defining relation: exact by construction, pin to 1
            if abs(val - 1.0) > 1e-9:
                raise InconsistentRatio(
                    f"simple root constant {val} differs from 1")
            val = 1.0 + 0.0j
        values[gamma] = val
    return AlphaConstants(rs=rs, ordering=ordering, q=q, values=values)


_alpha_cache: dict[tuple, AlphaConstants] = {}


def _a_alpha_cached(rs: RootSystem, ordering: NormalOrdering, q: float) -> AlphaConstants:
    key = (rs.algebra_id, ordering.sequence, q)
    if key not in _alpha_cache:
        _alpha_cache[key] = a_alpha(rs, ordering, q)
    return _alpha_cache[key]


# ---------------------------------------------------------------------------
# K, Rhat, R


def _check_pair(r1: Representation, r2: Representation):
    from .errors import AlgebraMismatch
    if r1.rs.algebra_id != r2.rs.algebra_id:
        raise AlgebraMismatch(
            f"pair mixes {r1.rs.algebra_id} and {r2.rs.algebra_id}")
    if abs(r1.q - r2.q) > 0:
        raise AlgebraMismatch("pair mixes different q values")


def _k_mat(r1: Representation, r2: Representation) -> np.ndarray:
    rs = r1.rs
    diag = np.array(
        [r1.q ** float(pairing(w1, w2, rs))
         for w1 in r1.weights for w2 in r2.weights],
        dtype=complex)
    return np.diag(diag)


def k_matrix(r1: Representation, r2: Representation) -> OperatorMatrix:
    """Diagonal weight-pairing factor, eigenvalue q^((lambda1|lambda2))."""
    _check_pair(r1, r2)
    return OperatorMatrix(_k_mat(r1, r2), tensor_rep(r1, r2))


def _qbar(rs: RootSystem, gamma: Weight, q: float, qbar: str) -> complex:
    norm = float(pairing(gamma, gamma, rs))
    if qbar == "norm":
        base = q ** (-norm)
    elif qbar == "half":
        base = q ** (-(norm**2) / 2.0)
    else:
        raise ValueError(f"unknown qbar convention {qbar!r}")
    if rs.parity[gamma] % 2:
        base = -base
    return base


def _is_doubled_odd(rs: RootSystem, gamma: Weight) -> bool:
    half = gamma.scale(Fraction(1, 2))
    return half in rs.positive_roots and rs.parity[half] % 2 == 1


def _rhat_factors(r1: Representation, r2: Representation,
                  ordering: NormalOrdering, qbar: str):
    """(argument, base) per root, in normal-ordering sequence.

    A doubled root 2*alpha with alpha odd contributes no factor of its
    own: the single odd exponential in e_alpha x f_alpha, taken with
    base -q^(-(alpha|alpha)), already carries the whole series.
    """
    rs, q = r1.rs, r1.q
    consts = _a_alpha_cached(rs, ordering, q)
    mats1 = composite_root_matrices(r1, ordering)
    mats2 = composite_root_matrices(r2, ordering)
    factors = []
    for gamma in ordering.sequence:
        if _is_doubled_odd(rs, gamma):
            continue
        deg = rs.parity[gamma]
        coef = (q - 1.0 / q) / consts[gamma]
        if deg % 2:
            coef = -coef
        z = coef * graded_kron(mats1[gamma][0], mats2[gamma][1], r1.parities, deg)
        factors.append((z, _qbar(rs, gamma, q, qbar)))
    return factors


def _rhat_mat(r1: Representation, r2: Representation, ordering: NormalOrdering,
              qbar: str = conventions.QBAR_DEFAULT, inverse: bool = False) -> np.ndarray:
    _check_pair(r1, r2)
    factors = _rhat_factors(r1, r2, ordering, qbar)
    if conventions.RHAT_REVERSED_PRODUCT:
        factors = list(reversed(factors))
    if inverse:
        factors = [(-z, 1.0 / base) for z, base in reversed(factors)]
    dim = r1.dim * r2.dim
    out = np.eye(dim, dtype=complex)
    for z, base in factors:
        out = out @ q_exp(z, base)
    return out


def rhat(r1: Representation, r2: Representation, ordering: NormalOrdering,
         qbar: str = conventions.QBAR_DEFAULT) -> OperatorMatrix:
    """Unipotent part of R on V1 x V2 for the given normal ordering."""
    return OperatorMatrix(_rhat_mat(r1, r2, ordering, qbar), tensor_rep(r1, r2))


def rhat_inverse(r1: Representation, r2: Representation, ordering: NormalOrdering,
                 qbar: str = conventions.QBAR_DEFAULT) -> OperatorMatrix:
    """Inverse via the exponential inverse law, factors reversed."""
    return OperatorMatrix(_rhat_mat(r1, r2, ordering, qbar, inverse=True),
                          tensor_rep(r1, r2))


def _full_r_mat(r1: Representation, r2: Representation, ordering: NormalOrdering,
                qbar: str = conventions.QBAR_DEFAULT) -> np.ndarray:
    return _k_mat(r1, r2) @ _rhat_mat(r1, r2, ordering, qbar)


def full_r(r1: Representation, r2: Representation, ordering: NormalOrdering,
           qbar: str = conventions.QBAR_DEFAULT) -> OperatorMatrix:
    """R = K Rhat on V1 x V2."""
    return OperatorMatrix(_full_r_mat(r1, r2, ordering, qbar), tensor_rep(r1, r2))


# ---------------------------------------------------------------------------
# static identity suite


@dataclass
class StaticReport:
    ybe: float
    quasitri_left: float
    quasitri_right: float
    ordering_independence: float
    tolerance: float

    @property
    def passes(self) -> bool:
        return max(self.ybe, self.quasitri_left, self.quasitri_right,
                   self.ordering_independence) <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "ybe": self.ybe,
            "quasitri_left": self.quasitri_left,
            "quasitri_right": self.quasitri_right,
            "ordering_independence": self.ordering_independence,
            "tolerance": self.tolerance,
            "pass": self.passes,
        }


def static_checks(r1: Representation, r2: Representation, r3: Representation,
                  ordering: NormalOrdering, ordering2: NormalOrdering | None = None,
                  tolerance: float = 1e-9) -> StaticReport:
    """Yang-Baxter, both quasi-triangularity laws, ordering independence.

    The coproduct sides are evaluated by building R directly on the
    tensor-product module, so no symbolic coproduct is ever formed.
    """
    if ordering2 is None:
        ordering2 = ordering
    r12 = _full_r_mat(r1, r2, ordering)
    r13 = _full_r_mat(r1, r3, ordering)
    r23 = _full_r_mat(r2, r3, ordering)
    m12 = embed_12(r12, r3)
    m13 = embed_13(r13, r1, r2, r3)
    m23 = embed_23(r23, r1)
    ybe = rel_residual(m12 @ m13 @ m23, m23 @ m13 @ m12)

    r12_space = tensor_rep(r1, r2)
    r23_space = tensor_rep(r2, r3)
    left = rel_residual(_full_r_mat(r12_space, r3, ordering), m13 @ m23)
    right = rel_residual(_full_r_mat(r1, r23_space, ordering), m13 @ m12)

    indep = rel_residual(r12, _full_r_mat(r1, r2, ordering2))
    return StaticReport(ybe=ybe, quasitri_left=left, quasitri_right=right,
                        ordering_independence=indep, tolerance=tolerance)
