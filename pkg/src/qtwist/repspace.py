"""Finite-dimensional modules as dense matrix data.

A representation stores one complex matrix per simple-root generator
(raising e_i, lowering f_i, diagonal q^{t_i}) together with the list of
basis weights and Z2-parities.  Nothing here is symbolic: ingestion of
arbitrary matrices is allowed, and ``validate_rep`` is the only guarantee
that the defining relations actually hold.

Tensor products follow the sign rule

    (a x b)(v x w) = (-1)^(deg b * deg v) (a v) x (b w),

which reduces to the plain Kronecker product whenever either factor of
the operator is even.  All embeddings of two-slot operators into triple
spaces used here assume the operator is even overall (true for R, K, B
and F, which pair generators of equal parity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cartan import (
    NormalOrdering,
    RootSystem,
    Weight,
    build_root_system,
    decomposition_pair,
    pairing,
    validate_normal_ordering,
)
from .errors import (
    AlgebraMismatch,
    BadSpin,
    DimensionMismatch,
    InvalidOrdering,
    UnsupportedRank,
)


def qint_sym(n: int, q: float) -> float:
    """Symmetric q-integer (q^n - q^-n)/(q - q^-1), used in matrix elements."""
    return (q**n - q**-n) / (q - 1.0 / q)


def _check_q(q: float) -> float:
    q = float(q)
    if not 0.0 < q < 1.0:
        raise ValueError(f"deformation parameter must satisfy 0 < q < 1, got {q}")
    return q


@dataclass(eq=False)
class Representation:
    """Matrix data of one module of U_q for rs.algebra_id.

    e, f, qt are tuples indexed by simple root.  Immutable by convention;
    matrices are complex128 throughout.
    """

    rs: RootSystem
    q: float
    dim: int
    weights: tuple[Weight, ...]
    parities: tuple[int, ...]
    e: tuple[np.ndarray, ...]
    f: tuple[np.ndarray, ...]
    qt: tuple[np.ndarray, ...]
    label: str = ""

    def qt_inv(self, i: int) -> np.ndarray:
        return np.diag(1.0 / np.diag(self.qt[i]))

    def t_matrix(self, i: int) -> np.ndarray:
        """Diagonal matrix of pairings (weight_b | alpha_i)."""
        alpha = self.rs.simple_roots[i]
        vals = [float(pairing(w, alpha, self.rs)) for w in self.weights]
        return np.diag(np.asarray(vals, dtype=complex))

    def weight_groups(self) -> dict[Weight, list[int]]:
        groups: dict[Weight, list[int]] = {}
        for b, w in enumerate(self.weights):
            groups.setdefault(w, []).append(b)
        return groups


@dataclass(eq=False)
class OperatorMatrix:
    """Dense operator on a representation space, with its bookkeeping."""

    matrix: np.ndarray
    space: Representation

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.dim, self.space.dim):
            raise DimensionMismatch(
                f"matrix shape {m.shape} does not match space dim {self.space.dim}"
            )
        self.matrix = m


# ---------------------------------------------------------------------------
# constructors


def spin_rep_sl2(j, q: float) -> Representation:
    """Spin-j module of U_q(sl2), highest weight first.

    e v_m = sqrt([j-m][j+m+1]) v_{m+1} with symmetric q-integers; the
    basis vector of weight m*alpha sits at index j - m.
    """
    q = _check_q(q)
    jf = Fraction(j)
    if jf < 0 or (2 * jf).denominator != 1:
        raise BadSpin(f"spin must be a non-negative half-integer, got {j}")
    rs = build_root_system("A1")
    two_j = int(2 * jf)
    dim = two_j + 1
    ms = [jf - k for k in range(dim)]
    weights = tuple(Weight((m,)) for m in ms)
    e = np.zeros((dim, dim), dtype=complex)
    f = np.zeros((dim, dim), dtype=complex)
    for b, m in enumerate(ms):
        if b > 0:  # e raises m -> m+1, i.e. index b -> b-1
            up = math.sqrt(qint_sym(int(jf - m), q) * qint_sym(int(jf + m + 1), q))
            e[b - 1, b] = up
        if b < dim - 1:
            down = math.sqrt(qint_sym(int(jf + m), q) * qint_sym(int(jf - m + 1), q))
            f[b + 1, b] = down
    qt = np.diag(np.array([q ** float(2 * m) for m in ms], dtype=complex))
    return Representation(
        rs=rs, q=q, dim=dim, weights=weights, parities=(0,) * dim,
        e=(e,), f=(f,), qt=(qt,), label=f"spin:{jf}",
    )


def _solve_rational(mat, rhs):
    """Gaussian elimination over Fractions for the tiny weight systems."""
    n = len(rhs)
    a = [list(row) + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return tuple(a[r][n] for r in range(n))


def vector_rep_sln(n: int, q: float) -> Representation:
    """Defining n-dimensional module of U_q(sl_n), n in 2..4."""
    q = _check_q(q)
    if not 2 <= int(n) <= 4:
        raise UnsupportedRank(f"vector module shipped for n in 2..4 only, got {n}")
    n = int(n)
    rs = build_root_system(f"A{n - 1}")
    rank = n - 1
    weights = []
    for k in range(n):
        rhs = tuple(
            Fraction((1 if k == i else 0) - (1 if k == i + 1 else 0))
            for i in range(rank)
        )
        weights.append(Weight(_solve_rational(rs.sym, rhs)))
    e, f, qt = [], [], []
    for i in range(rank):
        ei = np.zeros((n, n), dtype=complex)
        ei[i, i + 1] = 1.0
        e.append(ei)
        f.append(ei.T.copy())
        qt.append(np.diag(np.array(
            [q ** float(pairing(w, rs.simple_roots[i], rs)) for w in weights],
            dtype=complex)))
    return Representation(
        rs=rs, q=q, dim=n, weights=tuple(weights), parities=(0,) * n,
        e=tuple(e), f=tuple(f), qt=tuple(qt), label="vector",
    )


def vector_rep_b2(q: float) -> Representation:
    """Five-dimensional vector module of U_q(B2).

    Basis (eps1, eps2, 0, -eps2, -eps1); both generator amplitudes are
    sqrt(q + 1/q) so that [e_i, f_i] matches the diagonal with t-eigenvalues
    (+-2) on their strings.
    """
    q = _check_q(q)
    rs = build_root_system("B2")
    weights = (
        Weight.of(1, 1), Weight.of(0, 1), Weight.of(0, 0),
        Weight.of(0, -1), Weight.of(-1, -1),
    )
    c = math.sqrt(q + 1.0 / q)
    e1 = np.zeros((5, 5), dtype=complex)
    e1[0, 1] = c
    e1[3, 4] = c
    e2 = np.zeros((5, 5), dtype=complex)
    e2[1, 2] = c
    e2[2, 3] = c
    qt = tuple(
        np.diag(np.array(
            [q ** float(pairing(w, rs.simple_roots[i], rs)) for w in weights],
            dtype=complex))
        for i in range(2)
    )
    return Representation(
        rs=rs, q=q, dim=5, weights=weights, parities=(0,) * 5,
        e=(e1, e2), f=(e1.T.copy(), e2.T.copy()), qt=qt, label="vector",
    )


def osp12_rep(q: float) -> Representation:
    """Three-dimensional module of U_q(osp(1|2)).

    Weights (alpha, 0, -alpha) with parities (1, 0, 1); the two free
    amplitudes solve e f + f e = (q^t - q^-t)/(q - q^-1) = diag(1, 0, -1).
    """
    q = _check_q(q)
    rs = build_root_system("OSP12")
    weights = (Weight.of(1), Weight.of(0), Weight.of(-1))
    e = np.array([[0, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex)
    f = np.array([[0, 0, 0], [1, 0, 0], [0, -1, 0]], dtype=complex)
    qt = np.diag(np.array([q, 1.0, 1.0 / q], dtype=complex))
    return Representation(
        rs=rs, q=q, dim=3, weights=weights, parities=(1, 0, 1),
        e=(e,), f=(f,), qt=(qt,), label="osp3",
    )


def probe_rep(rs: RootSystem, q: float) -> Representation:
    """A shipped faithful module used to extract universal constants."""
    if rs.algebra_id == "A1":
        return spin_rep_sl2(Fraction(1, 2), q)
    if rs.algebra_id in ("A2", "A3"):
        return vector_rep_sln(rs.rank + 1, q)
    if rs.algebra_id == "B2":
        return vector_rep_b2(q)
    return osp12_rep(q)


# ---------------------------------------------------------------------------
# graded tensor machinery


def graded_kron(a: np.ndarray, b: np.ndarray, parities1, deg_b: int) -> np.ndarray:
    """Matrix of a x b; the Koszul sign sees the slot-1 source parity."""
    if deg_b % 2 == 0:
        return np.kron(a, b)
    signs = np.array([(-1.0) ** p for p in parities1])
    return np.kron(a * signs[np.newaxis, :], b)


def graded_flip(parities_x, parities_y) -> np.ndarray:
    """P: V_x tensor V_y -> V_y tensor V_x, v x w -> (-1)^(|v||w|) w x v."""
    dx, dy = len(parities_x), len(parities_y)
    p = np.zeros((dy * dx, dx * dy))
    for ix in range(dx):
        for iy in range(dy):
            p[iy * dx + ix, ix * dy + iy] = (-1.0) ** (parities_x[ix] * parities_y[iy])
    return p.astype(complex)


def swap_sides(m: np.ndarray, ra: Representation, rb: Representation) -> np.ndarray:
    """Given an even operator on V_b x V_a, its matrix on V_a x V_b."""
    back = graded_flip(rb.parities, ra.parities)
    fwd = graded_flip(ra.parities, rb.parities)
    return back @ m @ fwd


def embed_12(m: np.ndarray, r3: Representation) -> np.ndarray:
    return np.kron(m, np.eye(r3.dim, dtype=complex))


def embed_23(m: np.ndarray, r1: Representation) -> np.ndarray:
    return np.kron(np.eye(r1.dim, dtype=complex), m)


def embed_13(m: np.ndarray, r1: Representation, r2: Representation,
             r3: Representation) -> np.ndarray:
    """Even operator on V_1 x V_3 placed in slots (1,3) of the triple space."""
    q_fwd = np.kron(np.eye(r1.dim, dtype=complex), graded_flip(r2.parities, r3.parities))
    q_back = np.kron(np.eye(r1.dim, dtype=complex), graded_flip(r3.parities, r2.parities))
    return q_back @ np.kron(m, np.eye(r2.dim, dtype=complex)) @ q_fwd


def tensor_rep(r1: Representation, r2: Representation) -> Representation:
    """Graded tensor product module via the coproduct."""
    if r1.rs.algebra_id != r2.rs.algebra_id:
        raise AlgebraMismatch(
            f"cannot tensor {r1.rs.algebra_id} with {r2.rs.algebra_id}")
    if abs(r1.q - r2.q) > 0:
        raise AlgebraMismatch("tensor factors use different q")
    rs, q = r1.rs, r1.q
    dim = r1.dim * r2.dim
    weights = tuple(w1 + w2 for w1 in r1.weights for w2 in r2.weights)
    parities = tuple((p1 + p2) % 2 for p1 in r1.parities for p2 in r2.parities)
    e, f, qt = [], [], []
    for i in range(rs.rank):
        deg = rs.parity[rs.simple_roots[i]]
        d_e = graded_kron(r1.e[i], r2.qt[i], r1.parities, 0) \
            + graded_kron(np.eye(r1.dim, dtype=complex), r2.e[i], r1.parities, deg)
        d_f = graded_kron(r1.f[i], np.eye(r2.dim, dtype=complex), r1.parities, 0) \
            + graded_kron(r1.qt_inv(i), r2.f[i], r1.parities, deg)
        d_qt = np.kron(r1.qt[i], r2.qt[i])
        e.append(d_e)
        f.append(d_f)
        qt.append(d_qt)
    return Representation(
        rs=rs, q=q, dim=dim, weights=weights, parities=parities,
        e=tuple(e), f=tuple(f), qt=tuple(qt),
        label=f"{r1.label}x{r2.label}",
    )


# ---------------------------------------------------------------------------
# validation


@dataclass
class RepReport:
    """Max-abs residuals of the defining relations."""

    qt_diag: float
    weight_e: float
    weight_f: float
    ef: float
    serre: float
    serre_pairs: dict[tuple[int, int], float]
    parity_structure: float
    tolerance: float

    @property
    def max_residual(self) -> float:
        return max(self.qt_diag, self.weight_e, self.weight_f, self.ef,
                   self.serre, self.parity_structure)

    @property
    def passes(self) -> bool:
        return self.max_residual <= self.tolerance

    def as_dict(self) -> dict:
        return {
            "qt_diag": self.qt_diag,
            "weight_e": self.weight_e,
            "weight_f": self.weight_f,
            "ef": self.ef,
            "serre": self.serre,
            "parity_structure": self.parity_structure,
            "tolerance": self.tolerance,
            "pass": self.passes,
        }

    def failing_relations(self) -> list[str]:
        out = []
        for name in ("qt_diag", "weight_e", "weight_f", "ef", "serre",
                     "parity_structure"):
            if getattr(self, name) > self.tolerance:
                out.append(name)
        return out


def _qbinom_sym(n: int, k: int, qi: float) -> float:
    num = 1.0
    for m in range(1, n + 1):
        num *= qint_sym(m, qi)
    den = 1.0
    for m in range(1, k + 1):
        den *= qint_sym(m, qi)
    for m in range(1, n - k + 1):
        den *= qint_sym(m, qi)
    return num / den


def validate_rep(rep: Representation, tolerance: float = 1e-11) -> RepReport:
    """Check every defining relation of U_q against the stored matrices.

    Trusts nothing: weight bookkeeping, qt diagonals, the (graded)
    [e_i, f_j] relation and the quantum Serre relations are all verified
    numerically.
    """
    rs, q = rep.rs, rep.q
    eye = np.eye(rep.dim, dtype=complex)

    r_qt = 0.0
    for i in range(rs.rank):
        alpha = rs.simple_roots[i]
        expected = np.diag(np.array(
            [q ** float(pairing(w, alpha, rs)) for w in rep.weights], dtype=complex))
        r_qt = max(r_qt, float(np.max(np.abs(rep.qt[i] - expected))))
        r_qt = max(r_qt, float(np.max(np.abs(rep.qt[i] @ rep.qt_inv(i) - eye))))

    r_we = r_wf = 0.0
    for i in range(rs.rank):
        t = rep.t_matrix(i)
        for j in range(rs.rank):
            aij = float(rs.sym[i][j])
            r_we = max(r_we, float(np.max(np.abs(
                t @ rep.e[j] - rep.e[j] @ t - aij * rep.e[j]))))
            r_wf = max(r_wf, float(np.max(np.abs(
                t @ rep.f[j] - rep.f[j] @ t + aij * rep.f[j]))))

    r_ef = 0.0
    for i in range(rs.rank):
        for j in range(rs.rank):
            deg_i = rs.parity[rs.simple_roots[i]]
            deg_j = rs.parity[rs.simple_roots[j]]
            sign = (-1.0) ** (deg_i * deg_j)
            comm = rep.e[i] @ rep.f[j] - sign * rep.f[j] @ rep.e[i]
            if i == j:
                target = (rep.qt[i] - rep.qt_inv(i)) / (q - 1.0 / q)
            else:
                target = np.zeros_like(comm)
            r_ef = max(r_ef, float(np.max(np.abs(comm - target))))

    r_serre = 0.0
    serre_pairs: dict[tuple[int, int], float] = {}
    for i in range(rs.rank):
        for j in range(rs.rank):
            if i == j:
                continue
            nij_frac = 1 - 2 * rs.sym[i][j] / rs.sym[i][i]
            nij = int(nij_frac)
            qi = q ** (float(rs.sym[i][i]) / 2.0)
            for gens in (rep.e, rep.f):
                acc = np.zeros((rep.dim, rep.dim), dtype=complex)
                for k in range(nij + 1):
                    coef = (-1.0) ** k * _qbinom_sym(nij, k, qi)
                    acc += coef * np.linalg.matrix_power(gens[i], k) @ gens[j] \
                        @ np.linalg.matrix_power(gens[i], nij - k)
                resid = float(np.max(np.abs(acc)))
                key = (i + 1, j + 1)
                serre_pairs[key] = max(serre_pairs.get(key, 0.0), resid)
                r_serre = max(r_serre, resid)

    # structural: generators shift weight by +-alpha_i and parity by deg alpha_i
    r_par = 0.0
    for i in range(rs.rank):
        alpha = rs.simple_roots[i]
        deg = rs.parity[alpha]
        for mat, direction in ((rep.e[i], 1), (rep.f[i], -1)):
            shift = alpha.scale(direction)
            for a in range(rep.dim):
                for b in range(rep.dim):
                    if mat[a, b] == 0:
                        continue
                    ok_weight = rep.weights[a] == rep.weights[b] + shift
                    ok_parity = rep.parities[a] == (rep.parities[b] + deg) % 2
                    if not (ok_weight and ok_parity):
                        r_par = max(r_par, float(abs(mat[a, b])))

    return RepReport(
        qt_diag=r_qt, weight_e=r_we, weight_f=r_wf, ef=r_ef, serre=r_serre,
        serre_pairs=serre_pairs, parity_structure=r_par, tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# composite root vectors


def composite_root_matrices(
    rep: Representation, ordering: NormalOrdering
) -> dict[Weight, tuple[np.ndarray, np.ndarray]]:
    """Matrices (e_gamma, f_gamma) for every positive root.

    Composite vectors follow the bracket rule for the interval-minimal
    pair (a before b):  e = e_a e_b - q^(-(a|b)) e_b e_a and
    f = f_b f_a - q^((a|b)) f_a f_b.
    """
    rs = rep.rs
    if not validate_normal_ordering(ordering, rs):
        raise InvalidOrdering("ordering fails the betweenness test")
    out: dict[Weight, tuple[np.ndarray, np.ndarray]] = {}
    simple_index = {r: i for i, r in enumerate(rs.simple_roots)}

    def build(gamma: Weight):
        if gamma in out:
            return out[gamma]
        if gamma in simple_index:
            i = simple_index[gamma]
            out[gamma] = (rep.e[i], rep.f[i])
            return out[gamma]
        a, b = decomposition_pair(gamma, ordering, rs)
        ea, fa = build(a)
        eb, fb = build(b)
        pab = float(pairing(a, b, rs))
        e = ea @ eb - rep.q ** (-pab) * eb @ ea
        f = fb @ fa - rep.q ** (pab) * fa @ fb
        out[gamma] = (e, f)
        return out[gamma]

    for gamma in ordering.sequence:
        build(gamma)
    return out
