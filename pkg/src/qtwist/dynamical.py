"""Dynamical layer: B(x), the twist F, the dynamical R-matrix, shifts.

Everything is parametrized by mu rather than x (x_i = q^(-mu_i) is never
materialized): eigenvalues of B are q^((eta|eta) - (mu|eta)), and the
argument shifts x q^(c l^(k)) become mu -> mu - c*eta blockwise over the
weight decomposition of slot k.

The twist is built two independent ways, an infinite-product truncation
and a triangular linear solve, and their agreement is one of the shipped
oracles rather than an assumption.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import conventions
from .cartan import NormalOrdering, RootSystem, Weight, pairing
from .errors import (
    AlgebraMismatch,
    BadSpin,
    NotConverged,
    ResonantParameter,
)
from .repspace import (
    OperatorMatrix,
    Representation,
    embed_12,
    embed_13,
    embed_23,
    graded_kron,
    osp12_rep,
    spin_rep_sl2,
    swap_sides,
    tensor_rep,
)
from .rmat import (
    full_r,
    k_matrix,
    max_abs,
    q_factorial,
    rel_residual,
    rhat_inverse,
)

_RESONANCE_REL = 1e-10

# One ell-shift of the variable x moves x^2, hence a pairing (mu|alpha),
# by two units; both the twist cocycle and the dynamical Yang-Baxter
# equation shift mu downward.
_ELL_SHIFT = 2


@dataclass(frozen=True)
class DynParam:
    """The dynamical parameter, held as the pairings m_i = (mu|alpha_i)."""

    rs: RootSystem
    q: float
    m: tuple[complex, ...]

    def __post_init__(self):
        if len(self.m) != self.rs.rank:
            raise AlgebraMismatch(
                f"{self.rs.algebra_id} needs {self.rs.rank} pairings, "
                f"got {len(self.m)}")
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"q must lie in (0,1), got {self.q}")

    def pair(self, w: Weight) -> complex:
        """(mu | w) by exact linear extension over the root basis."""
        return sum(float(c) * mi for c, mi in zip(w.coords, self.m))

    def shifted(self, eta: Weight, multiplier: float) -> "DynParam":
        """mu - multiplier * eta, expressed again through pairings."""
        new = tuple(
            mi - multiplier * float(pairing(eta, alpha, self.rs))
            for mi, alpha in zip(self.m, self.rs.simple_roots))
        return DynParam(rs=self.rs, q=self.q, m=new)

    def q_power(self, exponent: complex) -> complex:
        # principal branch; ln q is real negative for q in (0,1)
        return complex(np.exp(exponent * math.log(self.q)))


@dataclass(frozen=True)
class TruncationPolicy:
    max_terms: int = 200
    stop_tol: float = 1e-15
    stall_window: int = 3

    def __post_init__(self):
        if self.max_terms < 1:
            raise ValueError("max_terms must be at least 1")


def _check_mu(rep: Representation, mu: DynParam):
    if rep.rs.algebra_id != mu.rs.algebra_id:
        raise AlgebraMismatch(
            f"mu is for {mu.rs.algebra_id}, module for {rep.rs.algebra_id}")
    if rep.q != mu.q:
        raise AlgebraMismatch("mu and module use different q")


def _b_diag(rep: Representation, mu: DynParam) -> np.ndarray:
    return np.array(
        [mu.q_power(float(pairing(w, w, rep.rs)) - mu.pair(w))
         for w in rep.weights],
        dtype=complex)


def b_matrix(rep: Representation, mu: DynParam) -> OperatorMatrix:
    """Diagonal q^((eta|eta) - (mu|eta)) on a basis vector of weight eta."""
    _check_mu(rep, mu)
    return OperatorMatrix(np.diag(_b_diag(rep, mu)), rep)


# ---------------------------------------------------------------------------
# convergence diagnostics


@dataclass
class MarginReport:
    """Sufficient-decay margins of the infinite product, per positive root."""

    per_root: dict[Weight, float]

    @property
    def min_margin(self) -> float:
        return min(self.per_root.values())

    @property
    def positive(self) -> bool:
        return self.min_margin > 0.0

    def as_dict(self) -> dict:
        return {
            "per_root": {str(r): v for r, v in self.per_root.items()},
            "min_margin": self.min_margin,
            "positive": self.positive,
        }


def convergence_margin(r2: Representation, mu: DynParam) -> MarginReport:
    """Re(mu|alpha) - (alpha|alpha) - 2*max_b |(weight_b|alpha)| per root."""
    _check_mu(r2, mu)
    rs = r2.rs
    per = {}
    for alpha in rs.positive_roots:
        reach = max(abs(float(pairing(w, alpha, rs))) for w in r2.weights)
        per[alpha] = (mu.pair(alpha).real
                      - float(pairing(alpha, alpha, rs)) - 2.0 * reach)
    return MarginReport(per_root=per)


# ---------------------------------------------------------------------------
# twist, product construction


@dataclass
class FProductResult:
    matrix: OperatorMatrix
    n_factors: int
    tail_norm: float
    partials: list[np.ndarray] | None = None


def f_product(r1: Representation, r2: Representation, ordering: NormalOrdering,
              mu: DynParam, policy: TruncationPolicy | None = None,
              keep_partials: bool = False) -> FProductResult:
    """Truncation of F = prod_{k>=0} B2^k Rhat^{-1} B2^{-k}, leftmost k=0.

    Conjugating by powers of the diagonal B2 only rescales entries, so
    u_k is Rhat^{-1} times the k-th Hadamard power of a fixed ratio
    matrix.  Stops once ||u_k - 1|| stays below stop_tol for
    stall_window consecutive factors.
    """
    if policy is None:
        policy = TruncationPolicy()
    _check_mu(r2, mu)
    rinv = rhat_inverse(r1, r2, ordering)
    b2 = np.kron(np.ones(r1.dim), _b_diag(r2, mu))
    ratio = np.outer(b2, 1.0 / b2)
    # powers only matter on the support of Rhat^{-1}; outside it the
    # ratios can exceed 1 and would overflow long before truncation
    ratio[rinv.matrix == 0] = 0.0
    # b_i * (1/b_i) rounds to 1 +- eps and its k-th power drifts off 1
    # linearly in k, keeping the tail above any stop_tol below k*eps
    np.fill_diagonal(ratio, 1.0)
    dim = r1.dim * r2.dim
    eye = np.eye(dim, dtype=complex)

    out = eye
    pow_mat = np.ones_like(ratio)
    partials: list[np.ndarray] | None = [] if keep_partials else None
    streak = 0
    tail = math.inf
    n_used = 0
    for _ in range(policy.max_terms):
        u = rinv.matrix * pow_mat
        out = out @ u
        n_used += 1
        if partials is not None:
            partials.append(out.copy())
        tail = max_abs(u - eye)
        streak = streak + 1 if tail < policy.stop_tol else 0
        if streak >= policy.stall_window:
            break
        pow_mat = pow_mat * ratio
    else:
        raise NotConverged(
            f"product truncation still has tail {tail:.3e} after "
            f"{policy.max_terms} factors",
            tail_norm=tail, n_factors=policy.max_terms)
    return FProductResult(matrix=OperatorMatrix(out, rinv.space),
                          n_factors=n_used, tail_norm=tail, partials=partials)


# ---------------------------------------------------------------------------
# twist, triangular solve


def f_linear(r1: Representation, r2: Representation, ordering: NormalOrdering,
             mu: DynParam) -> OperatorMatrix:
    """Unique zero-weight unipotent solution of F B2 = Rhat^{-1} B2 F.

    Entrywise, F_IJ (b_J - b_I) = sum_K Rhatinv_IK b_K F_KJ over K with
    slot-1 weight strictly below that of I, so rows are solvable in
    increasing height of the slot-1 weight.  Support is limited to
    pairs of equal total weight whose slot-1 difference lies in the
    non-negative root cone; the equal-slot-1 diagonal is the identity.
    """
    _check_mu(r2, mu)
    rs = r1.rs
    rinv = rhat_inverse(r1, r2, ordering).matrix
    rho = rs.weyl_vector()
    d1, d2 = r1.dim, r2.dim
    dim = d1 * d2
    lam1 = [r1.weights[i // d2] for i in range(dim)]
    lam2 = [r2.weights[i % d2] for i in range(dim)]
    total = [lam1[i] + lam2[i] for i in range(dim)]
    b = np.array([mu.q_power(float(pairing(w, w, rs)) - mu.pair(w))
                  for w in lam2], dtype=complex)
    order = sorted(range(dim), key=lambda i: (float(pairing(lam1[i], rho, rs)), i))

    def dominates(wa: Weight, wb: Weight) -> bool:
        diff = wa - wb
        return all(c >= 0 and c.denominator == 1 for c in diff.coords)

    f = np.zeros((dim, dim), dtype=complex)
    for jj in range(dim):
        for ii in order:
            if total[ii] != total[jj]:
                continue
            if lam1[ii] == lam1[jj]:
                if ii == jj:
                    f[ii, jj] = 1.0
                continue
            if not dominates(lam1[ii], lam1[jj]):
                continue
            denom = b[jj] - b[ii]
            if abs(denom) < _RESONANCE_REL * max(abs(b[ii]), abs(b[jj])):
                raise ResonantParameter(
                    f"b_J - b_I vanishes for basis pair (I={ii}, J={jj}): "
                    f"b_I={b[ii]:.6e}, b_J={b[jj]:.6e}; mu lies on the "
                    "denominator variety")
            rhs = 0.0 + 0.0j
            row = rinv[ii]
            for kk in np.nonzero(row)[0]:
                if kk == ii:
                    continue
                if f[kk, jj] != 0.0:
                    rhs += row[kk] * b[kk] * f[kk, jj]
            f[ii, jj] = rhs / denom
    return OperatorMatrix(f, tensor_rep(r1, r2))


def _twist(r1: Representation, r2: Representation, ordering: NormalOrdering,
           mu: DynParam, method: str,
           policy: TruncationPolicy | None = None) -> np.ndarray:
    if method == "product":
        return f_product(r1, r2, ordering, mu, policy).matrix.matrix
    if method == "linear":
        return f_linear(r1, r2, ordering, mu).matrix
    raise ValueError(f"unknown twist method {method!r}")


# ---------------------------------------------------------------------------
# dynamical R-matrix


def r_dyn(r1: Representation, r2: Representation, ordering: NormalOrdering,
          mu: DynParam, method: str = "linear",
          policy: TruncationPolicy | None = None) -> OperatorMatrix:
    """R(x) = F21(x)^{-1} R12 F12(x), with F21 the side-swapped twist."""
    f12 = _twist(r1, r2, ordering, mu, method, policy)
    f21 = swap_sides(_twist(r2, r1, ordering, mu, method, policy), r1, r2)
    r12 = full_r(r1, r2, ordering)
    mat = np.linalg.inv(f21) @ r12.matrix @ f12
    return OperatorMatrix(mat, r12.space)


# ---------------------------------------------------------------------------
# dynamical shifts over a tensor slot


def _slot_groups(reps: Sequence[Representation], slot: int):
    """(weight, column mask) pairs for the slot's weight decomposition."""
    if slot not in (1, 2, 3):
        raise ValueError(f"slot must be 1, 2 or 3, got {slot}")
    d = [r.dim for r in reps]
    rep = reps[slot - 1]
    labels = np.zeros(rep.dim, dtype=int)
    distinct: list[Weight] = []
    for b, w in enumerate(rep.weights):
        if w not in distinct:
            distinct.append(w)
        labels[b] = distinct.index(w)
    if slot == 1:
        tri = np.repeat(labels, d[1] * d[2])
    elif slot == 2:
        tri = np.tile(np.repeat(labels, d[2]), d[0])
    elif slot == 3:
        tri = np.tile(labels, d[0] * d[1])
    else:
        raise ValueError(f"slot must be 1, 2 or 3, got {slot}")
    return [(w, tri == g) for g, w in enumerate(distinct)]


def _shift_eval(builder: Callable[[DynParam], np.ndarray | OperatorMatrix],
                slot: int, multiplier: float,
                reps: Sequence[Representation], mu: DynParam) -> np.ndarray:
    dim = reps[0].dim * reps[1].dim * reps[2].dim
    out = np.zeros((dim, dim), dtype=complex)
    for eta, mask in _slot_groups(reps, slot):
        built = builder(mu.shifted(eta, multiplier))
        if isinstance(built, OperatorMatrix):
            built = built.matrix
        out[:, mask] = built[:, mask]
    return out


def shift_eval(builder: Callable[[DynParam], np.ndarray | OperatorMatrix],
               slot: int, multiplier: float,
               reps: Sequence[Representation], mu: DynParam) -> OperatorMatrix:
    """Evaluate a mu-indexed triple-space operator with its argument
    shifted blockwise by the weights of one tensor slot (source side)."""
    space = tensor_rep(tensor_rep(reps[0], reps[1]), reps[2])
    return OperatorMatrix(_shift_eval(builder, slot, multiplier, reps, mu),
                          space)


# ---------------------------------------------------------------------------
# closed forms


def _one_sided_factorial(n: int, base: complex) -> complex:
    return q_factorial(n, base)


def closed_form_reference(kind: str, j1, j2, mu: DynParam,
                          q: float) -> OperatorMatrix:
    """Independent closed-form twist for the rank-one cases.

    SL2:    F = sum_n (q - 1/q)^n / [n]_{q^2}! * e^n x f^n
                * (-1)^n / prod_{v=1..n} (1 - x^-2 q^{2v} q^{-2 l_2})
    OSP12:  F = sum_n (q - 1/q)^n / [n]_{-q}! * e^n x f^n
                * (-1)^{n(n-1)/2} / prod_{v=1..n} (1 + x^-2 (-q)^v q^{-2 l_2})

    with x^-2 = q^{-(s (mu|alpha) + t)} for the fitted (s, t), and the
    h-factor q^{-2 (lambda|alpha)} taken on the slot-2 weight before f^n
    acts.  The osp exponents are the sl2 ones with q^2 replaced by -q
    under our normalisation (alpha|alpha) = 1.
    """
    s, t = conventions.CLOSED_FORM_S, conventions.CLOSED_FORM_T
    if kind == "SL2":
        rep1, rep2 = spin_rep_sl2(j1, q), spin_rep_sl2(j2, q)
        step = q * q
        sign = lambda n: (-1.0) ** n
    elif kind == "OSP12":
        rep1, rep2 = osp12_rep(q), osp12_rep(q)
        step = -q
        sign = lambda n: (-1.0) ** (n * (n - 1) // 2)
    else:
        raise BadSpin(f"closed form kinds are SL2 and OSP12, got {kind!r}")
    _check_mu(rep2, mu)
    rs = rep1.rs
    alpha = rs.simple_roots[0]
    big_m = mu.pair(alpha)
    x_inv2 = mu.q_power(-(s * big_m + t))

    # exponent of the h-dependent factor: q^{-2 (lambda|alpha)} on the
    # source slot-2 weight, uniformly for both kinds
    hvals = [2.0 * float(pairing(w, alpha, rs)) for w in rep2.weights]
    e1, f2 = rep1.e[0], rep2.f[0]
    dim = rep1.dim * rep2.dim
    coef = q - 1.0 / q
    out = np.eye(dim, dtype=complex)
    en, fn = e1.copy(), f2.copy()
    n = 1
    while max_abs(en) > 0 and max_abs(fn) > 0:
        denom = np.ones(rep2.dim, dtype=complex)
        for nu in range(1, n + 1):
            for b in range(rep2.dim):
                factor = 1.0 - (-1.0 if kind == "OSP12" else 1.0) * (
                    x_inv2 * step**nu * mu.q_power(-hvals[b]))
                if abs(factor) < _RESONANCE_REL:
                    raise ResonantParameter(
                        f"closed-form denominator factor vanishes at term "
                        f"n={n}, nu={nu}, slot-2 basis {b}")
                denom[b] *= factor
        scalar = (coef**n * sign(n)
                  / _one_sided_factorial(n, step))
        term = graded_kron(en, fn, rep1.parities, n % 2) \
            if kind == "OSP12" else np.kron(en, fn)
        dmat = np.diag(np.kron(np.ones(rep1.dim), 1.0 / denom))
        out = out + scalar * (term @ dmat)
        en, fn = en @ e1, fn @ f2
        n += 1
    return OperatorMatrix(out, tensor_rep(rep1, rep2))


def fit_closed_form_reparametrization(q: float = 0.5,
                                      mu_values: Sequence[float] = (7.13, 9.5)
                                      ) -> tuple[int, int]:
    """One-time fit of x^2 = q^(s*(mu|alpha)+t) on the spin-1/2 pair.

    Matches the single n=1 entry of the closed form against f_linear at
    two generic mu over the finite candidate set; the winner is frozen
    in conventions and this function exists to re-derive it."""
    rep = spin_rep_sl2(Fraction(1, 2), q)
    rs = rep.rs
    ordering = rs.orderings[0]
    targets = []
    for m in mu_values:
        mu = DynParam(rs=rs, q=q, m=(complex(m),))
        targets.append(f_linear(rep, rep, ordering, mu).matrix[1, 2])
    best, best_err = None, math.inf
    for s in (-2, -1, 0, 1, 2):
        for t in (-2, -1, 0, 1, 2):
            err = 0.0
            for m, target in zip(mu_values, targets):
                x_inv2 = q ** (-(s * m + t))
                denom = 1.0 - x_inv2 * q**2 * q**(-2.0)
                if abs(denom) < _RESONANCE_REL:
                    err = math.inf
                    break
                cand = -(q - 1.0 / q) / denom
                err = max(err, abs(cand - target))
            if err < best_err:
                best, best_err = (s, t), err
    if best_err > 1e-9:
        raise ResonantParameter(
            f"no candidate reparametrization matches, best residual {best_err:.3e}")
    return best


# ---------------------------------------------------------------------------
# the identity suite


@dataclass
class DynReport:
    linear_eq: float | None
    cocycle: float | None
    dynamical_ybe: float | None
    exchange: float | None
    commutation: float | None
    product_vs_linear: float | None
    shift_lemma: float | None
    tolerance: float
    errors: dict[str, str] = field(default_factory=dict)
    margin_min: float | None = None
    n_factors: int | None = None
    tail_norm: float | None = None

    _RESIDUAL_FIELDS = ("linear_eq", "cocycle", "dynamical_ybe", "exchange",
                        "commutation", "product_vs_linear", "shift_lemma")

    def residuals(self) -> dict[str, float | None]:
        return {name: getattr(self, name) for name in self._RESIDUAL_FIELDS}

    @property
    def passes(self) -> bool:
        vals = self.residuals().values()
        return (not self.errors
                and all(v is not None and v <= self.tolerance for v in vals))

    def as_dict(self) -> dict:
        d = {name: val for name, val in self.residuals().items()}
        d.update({
            "tolerance": self.tolerance,
            "pass": self.passes,
            "errors": dict(self.errors),
            "margin_min": self.margin_min,
            "n_factors": self.n_factors,
            "tail_norm": self.tail_norm,
        })
        return d


def dynamic_checks(r1: Representation, r2: Representation, r3: Representation,
                   ordering: NormalOrdering, mu: DynParam,
                   policy: TruncationPolicy | None = None,
                   tolerance: float = 1e-9,
                   method: str = "linear") -> DynReport:
    """Residuals of every dynamical identity on the triple (r1, r2, r3).

    linear_eq:      F B2 = Rhat^{-1} B2 F, max over both constructions
    cocycle:        F{(12)3} shift3[F12] = F{1(23)} F23  (one downward
                    ell-shift)
    dynamical_ybe:  Yang-Baxter for r_dyn with downward ell-shifts
    exchange:       R12(x) B2 R21(x) = B2 K12^2
    commutation:    (B2 B3 K23^2)^{-1} K12^{-1} K13^{-1} R13 R12 commutes
                    with R23^{-1} R13^{-1} K13 K23 B3
    shift_lemma:    shift3[B2] against B2 K23^c for c = 1 and 2
    """
    if policy is None:
        policy = TruncationPolicy()
    reps = (r1, r2, r3)
    results: dict[str, float | None] = {k: None for k in DynReport._RESIDUAL_FIELDS}
    errors: dict[str, str] = {}
    diag: dict[str, object] = {"n_factors": None, "tail_norm": None}

    def attempt(name: str, fn: Callable[[], float]):
        try:
            results[name] = fn()
        except (ResonantParameter, NotConverged) as exc:
            errors[name] = f"{type(exc).__name__}: {exc}"

    rinv12 = rhat_inverse(r1, r2, ordering).matrix
    b2_pair = np.kron(np.eye(r1.dim, dtype=complex),
                      np.diag(_b_diag(r2, mu)))

    f_lin = f_prod = None

    def check_linear_eq() -> float:
        nonlocal f_lin, f_prod
        f_lin = f_linear(r1, r2, ordering, mu).matrix
        res = rel_residual(f_lin @ b2_pair, rinv12 @ b2_pair @ f_lin)
        prod = f_product(r1, r2, ordering, mu, policy)
        diag["n_factors"] = prod.n_factors
        diag["tail_norm"] = prod.tail_norm
        f_prod = prod.matrix.matrix
        return max(res, rel_residual(f_prod @ b2_pair,
                                     rinv12 @ b2_pair @ f_prod))

    attempt("linear_eq", check_linear_eq)

    if f_lin is not None and f_prod is not None:
        attempt("product_vs_linear", lambda: rel_residual(f_lin, f_prod))
    else:
        errors["product_vs_linear"] = "skipped: twist construction failed"

    def check_cocycle() -> float:
        w12 = tensor_rep(r1, r2)
        w23 = tensor_rep(r2, r3)
        lhs_outer = _twist(w12, r3, ordering, mu, method, policy)
        shifted12 = _shift_eval(
            lambda m: embed_12(_twist(r1, r2, ordering, m, method, policy), r3),
            3, _ELL_SHIFT, reps, mu)
        rhs_outer = _twist(r1, w23, ordering, mu, method, policy)
        f23 = embed_23(_twist(r2, r3, ordering, mu, method, policy), r1)
        return rel_residual(lhs_outer @ shifted12, rhs_outer @ f23)

    attempt("cocycle", check_cocycle)

    def dyn_pair(ra, rb, m):
        return r_dyn(ra, rb, ordering, m, method, policy).matrix

    def check_dynamical_ybe() -> float:
        # R23(shift1) R13 R12(shift3) = R12 R13(shift2) R23, all shifts one
        # ell-step downward like the cocycle.  The mirror-ordered variant
        # holds only for equal representations; a full multiplier scan on
        # the mixed-spin triple singles this form out.
        r23_s1 = _shift_eval(lambda m: embed_23(dyn_pair(r2, r3, m), r1),
                             1, _ELL_SHIFT, reps, mu)
        r13 = embed_13(dyn_pair(r1, r3, mu), r1, r2, r3)
        r12_s3 = _shift_eval(lambda m: embed_12(dyn_pair(r1, r2, m), r3),
                             3, _ELL_SHIFT, reps, mu)
        r12 = embed_12(dyn_pair(r1, r2, mu), r3)
        r13_s2 = _shift_eval(
            lambda m: embed_13(dyn_pair(r1, r3, m), r1, r2, r3),
            2, _ELL_SHIFT, reps, mu)
        r23 = embed_23(dyn_pair(r2, r3, mu), r1)
        return rel_residual(r23_s1 @ r13 @ r12_s3, r12 @ r13_s2 @ r23)

    attempt("dynamical_ybe", check_dynamical_ybe)

    def check_exchange() -> float:
        r12d = dyn_pair(r1, r2, mu)
        r21d = swap_sides(dyn_pair(r2, r1, mu), r1, r2)
        k12 = k_matrix(r1, r2).matrix
        return rel_residual(r12d @ b2_pair @ r21d, b2_pair @ k12 @ k12)

    attempt("exchange", check_exchange)

    def _k_diag_13() -> np.ndarray:
        vals = [mu.q_power(float(pairing(w1, w3, r1.rs)))
                for w1 in r1.weights for _ in r2.weights for w3 in r3.weights]
        return np.diag(np.array(vals, dtype=complex))

    def check_commutation() -> float:
        # The factor (B2 B3 K23^2)^{-1} K12^{-1} K13^{-1} R13 R12 commutes
        # with R23^{-1} R13^{-1} K13 K23 B3.  Evaluated in a rearranged but
        # algebraically identical form: the naive products lose up to nine
        # digits at small q because their q^(large)-small entries arise
        # from O(1) summands.  Using R13 R12 R23^{-1} R13^{-1} = R23^{-1}
        # R12 (static Yang-Baxter, checked separately) turns the middle
        # product into diagonal sandwiches of a benign factor, and B3
        # cancels exactly on one side of the commutator.
        b2 = embed_23(np.kron(np.diag(_b_diag(r2, mu)),
                              np.eye(r3.dim, dtype=complex)), r1)
        b3 = embed_23(np.kron(np.eye(r2.dim, dtype=complex),
                              np.diag(_b_diag(r3, mu))), r1)
        k23 = embed_23(k_matrix(r2, r3).matrix, r1)
        k12 = embed_12(k_matrix(r1, r2).matrix, r3)
        k13 = _k_diag_13()
        r12 = embed_12(full_r(r1, r2, ordering).matrix, r3)
        r13 = embed_13(full_r(r1, r3, ordering).matrix, r1, r2, r3)
        r23 = embed_23(full_r(r2, r3, ordering).matrix, r1)
        r23i = np.linalg.inv(r23)
        r13i = np.linalg.inv(r13)
        k12i = np.diag(1.0 / np.diag(k12))
        k13i = np.diag(1.0 / np.diag(k13))
        base_inv = np.diag(1.0 / np.diag(b2 @ b3 @ k23 @ k23))
        lhs = base_inv @ (k12i @ k13i @ (r23i @ r12) @ k13 @ k23 @ b3)
        mid = np.diag(1.0 / (np.diag(b2) * np.diag(k23) * np.diag(k12)))
        rhs = (r23i @ r13i) @ mid @ (r13 @ r12)
        return rel_residual(lhs, rhs)

    attempt("commutation", check_commutation)

    def check_shift_lemma() -> float:
        k23 = embed_23(k_matrix(r2, r3).matrix, r1)

        def b2_builder(m: DynParam) -> np.ndarray:
            return embed_23(np.kron(np.diag(_b_diag(r2, m)),
                                    np.eye(r3.dim, dtype=complex)), r1)

        base = b2_builder(mu)
        worst = 0.0
        for mult in (1, 2):
            shifted = _shift_eval(b2_builder, 3, mult, reps, mu)
            target = base @ np.linalg.matrix_power(k23, mult)
            worst = max(worst, rel_residual(shifted, target))
        return worst

    attempt("shift_lemma", check_shift_lemma)

    margin = convergence_margin(r2, mu)
    return DynReport(
        linear_eq=results["linear_eq"],
        cocycle=results["cocycle"],
        dynamical_ybe=results["dynamical_ybe"],
        exchange=results["exchange"],
        commutation=results["commutation"],
        product_vs_linear=results["product_vs_linear"],
        shift_lemma=results["shift_lemma"],
        tolerance=tolerance,
        errors=errors,
        margin_min=margin.min_margin,
        n_factors=diag["n_factors"],
        tail_norm=diag["tail_norm"],
    )
