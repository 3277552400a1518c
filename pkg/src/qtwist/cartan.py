"""Root-system data for the supported small-rank algebras.

Weights live in the simple-root basis with exact rational coordinates, so
all pairings are computed without floating error.  The invariant form is
normalised to (alpha|alpha) = 2 for the roots of the simply laced series
and for the short roots of B2; the odd simple root of osp(1|2) has
(alpha|alpha) = 1 and its double 2*alpha is an even root.

A *normal ordering* of the positive roots is a sequence in which every
decomposable root sits strictly between the members of each of its
summand pairs.  The default ordering sorts roots by the slope
level(alpha)/height(alpha) of a fixed generic functional; the mediant
inequality makes any such slope order normal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import (
    DimensionMismatch,
    NotAPermutation,
    NotDecomposable,
    UnknownAlgebra,
)

SUPPORTED_ALGEBRAS = ("A1", "A2", "A3", "B2", "OSP12")

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Weight:
    """Rational vector eta = sum_i coords[i] * alpha_i in the root basis."""

    coords: tuple[Fraction, ...]

    @classmethod
    def of(cls, *coords) -> "Weight":
        return cls(tuple(Fraction(c) for c in coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __add__(self, other: "Weight") -> "Weight":
        if len(self.coords) != len(other.coords):
            raise DimensionMismatch("weights of different rank")
        return Weight(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Weight") -> "Weight":
        if len(self.coords) != len(other.coords):
            raise DimensionMismatch("weights of different rank")
        return Weight(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Weight":
        return Weight(tuple(-a for a in self.coords))

    def scale(self, c) -> "Weight":
        c = Fraction(c)
        return Weight(tuple(c * a for a in self.coords))

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def _unit(rank: int, i: int) -> Weight:
    return Weight(tuple(Fraction(1) if j == i else _ZERO for j in range(rank)))


@dataclass(frozen=True)
class NormalOrdering:
    """A fixed sequence of the positive roots."""

    sequence: tuple[Weight, ...]

    def position(self, root: Weight) -> int:
        return self.sequence.index(root)

    def __len__(self) -> int:
        return len(self.sequence)

    def reversed(self) -> "NormalOrdering":
        return NormalOrdering(tuple(reversed(self.sequence)))


@dataclass(frozen=True)
class RootSystem:
    algebra_id: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    sym: tuple[tuple[Fraction, ...], ...]
    positive_roots: tuple[Weight, ...]
    parity: Mapping[Weight, int] = field(compare=False, hash=False)
    orderings: tuple[NormalOrdering, ...] = ()

    @property
    def simple_roots(self) -> tuple[Weight, ...]:
        return tuple(_unit(self.rank, i) for i in range(self.rank))

    def root_parity(self, root: Weight) -> int:
        return self.parity[root]

    def weyl_vector(self) -> Weight:
        half = Fraction(1, 2)
        acc = Weight(tuple(_ZERO for _ in range(self.rank)))
        for r in self.positive_roots:
            acc = acc + r
        return acc.scale(half)

    def is_positive_root(self, w: Weight) -> bool:
        return w in self.positive_roots


def pairing(w1: Weight, w2: Weight, rs: RootSystem) -> Fraction:
    """Invariant bilinear form (w1|w2), exact."""
    if w1.rank != rs.rank or w2.rank != rs.rank:
        raise DimensionMismatch(
            f"rank-{rs.rank} system given weights of rank {w1.rank}, {w2.rank}"
        )
    total = _ZERO
    for i, a in enumerate(w1.coords):
        if a == 0:
            continue
        row = rs.sym[i]
        for j, b in enumerate(w2.coords):
            if b == 0:
                continue
            total += a * b * row[j]
    return total


# ---------------------------------------------------------------------------
# construction

_CARTAN_TABLES: dict[str, tuple[tuple[tuple[int, ...], ...], tuple[Fraction, ...]]] = {
    # algebra -> (cartan matrix, symmetriser d_i with sym_ij = d_i * cartan_ij)
    "A1": (((2,),), (Fraction(1),)),
    "A2": (((2, -1), (-1, 2)), (Fraction(1), Fraction(1))),
    "A3": (((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
           (Fraction(1), Fraction(1), Fraction(1))),
    # first simple root long: (a1|a1) = 4, (a2|a2) = 2
    "B2": (((2, -1), (-2, 2)), (Fraction(2), Fraction(1))),
    "OSP12": (((2,),), (Fraction(1, 2),)),
}


def _closure_positive_roots(rs_stub: RootSystem) -> tuple[Weight, ...]:
    """Generate positive roots from the simple ones by root strings.

    beta + alpha_i is a root iff the string count q = p - <beta, alpha_i^v>
    is positive, where p is the number of times alpha_i can be subtracted.
    """
    roots: set[Weight] = set(rs_stub.simple_roots)
    changed = True
    while changed:
        changed = False
        for beta in list(roots):
            for i, alpha in enumerate(rs_stub.simple_roots):
                p = 0
                cur = beta - alpha
                while cur in roots:
                    p += 1
                    cur = cur - alpha
                cart = Fraction(2) * pairing(beta, alpha, rs_stub) / rs_stub.sym[i][i]
                if p - cart >= 1:
                    cand = beta + alpha
                    if cand not in roots:
                        roots.add(cand)
                        changed = True
    return tuple(sorted(roots, key=lambda w: (sum(w.coords), w.coords)))


def _slope_key(root: Weight):
    # generic level functional: weight i+1 on alpha_i; ties broken on coords
    height = sum(root.coords)
    level = sum(Fraction(i + 1) * c for i, c in enumerate(root.coords))
    return (level / height, root.coords)


def default_normal_ordering(rs: RootSystem) -> NormalOrdering:
    """Slope ordering of the positive roots.

    The slope of a sum is the mediant of the summands' slopes, hence lies
    strictly between them whenever they differ; equal slopes (only the
    pair alpha, 2*alpha here) are broken towards the smaller root first.
    """
    ordered = NormalOrdering(tuple(sorted(rs.positive_roots, key=_slope_key)))
    if not validate_normal_ordering(ordered, rs):
        raise AssertionError("slope ordering failed its own validity check")
    return ordered


def validate_normal_ordering(ordering: NormalOrdering, rs: RootSystem) -> bool:
    """True iff every decomposable root separates all its summand pairs.

    The doubled root 2*alpha of osp(1|2) counts alpha + alpha as a summand
    pair; it must appear after alpha.
    """
    if sorted(ordering.sequence, key=lambda w: w.coords) != sorted(
        rs.positive_roots, key=lambda w: w.coords
    ):
        raise NotAPermutation(
            "ordering is not a permutation of the positive roots"
        )
    pos = {root: k for k, root in enumerate(ordering.sequence)}
    roots = set(rs.positive_roots)
    for gamma in rs.positive_roots:
        for b1, b2 in _summand_pairs(gamma, roots):
            if b1 == b2:
                if not pos[b1] < pos[gamma]:
                    return False
            else:
                lo, hi = sorted((pos[b1], pos[b2]))
                if not lo < pos[gamma] < hi:
                    return False
    return True


def _summand_pairs(gamma: Weight, roots: set[Weight]) -> list[tuple[Weight, Weight]]:
    pairs = []
    seen = set()
    for b1 in roots:
        b2 = gamma - b1
        if b2 in roots:
            key = tuple(sorted((b1.coords, b2.coords)))
            if key not in seen:
                seen.add(key)
                pairs.append((b1, b2))
    return pairs


def decomposition_pair(
    alpha: Weight, ordering: NormalOrdering, rs: RootSystem
) -> tuple[Weight, Weight]:
    """Interval-minimal summand pair of a composite positive root.

    Among all pairs of positive roots summing to ``alpha``, keep those
    whose open position interval contains no other complete pair, then
    choose the narrowest (earliest on ties).  Returned in sequence order.
    """
    if alpha not in rs.positive_roots:
        raise NotDecomposable(f"{alpha} is not a positive root")
    roots = set(rs.positive_roots)
    candidates = _summand_pairs(alpha, roots)
    if not candidates:
        raise NotDecomposable(f"{alpha} is simple")
    pos = {root: k for k, root in enumerate(ordering.sequence)}

    def interval(pair):
        a, b = pos[pair[0]], pos[pair[1]]
        return (min(a, b), max(a, b))

    def admissible(pair):
        lo, hi = interval(pair)
        for other in candidates:
            if other is pair:
                continue
            olo, ohi = interval(other)
            if lo < olo and ohi < hi:
                return False
        return True

    pool = [p for p in candidates if admissible(p)] or candidates
    lo_hi = min(pool, key=lambda p: (interval(p)[1] - interval(p)[0], interval(p)[0]))
    first, second = sorted(lo_hi, key=lambda r: pos[r])
    return (first, second)


def build_root_system(algebra_id: str) -> RootSystem:
    """Construct the full root-system record for one supported algebra."""
    if algebra_id not in SUPPORTED_ALGEBRAS:
        raise UnknownAlgebra(
            f"algebra {algebra_id!r} not in {SUPPORTED_ALGEBRAS}"
        )
    cartan, d = _CARTAN_TABLES[algebra_id]
    rank = len(cartan)
    sym = tuple(
        tuple(d[i] * Fraction(cartan[i][j]) for j in range(rank))
        for i in range(rank)
    )
    stub = RootSystem(
        algebra_id=algebra_id,
        rank=rank,
        cartan=cartan,
        sym=sym,
        positive_roots=tuple(_unit(rank, i) for i in range(rank)),
        parity={},
        orderings=(),
    )
    if algebra_id == "OSP12":
        alpha = _unit(1, 0)
        roots = (alpha, alpha + alpha)
        parity = {alpha: 1, alpha + alpha: 0}
    else:
        roots = _closure_positive_roots(stub)
        parity = {r: 0 for r in roots}
    rs = RootSystem(
        algebra_id=algebra_id,
        rank=rank,
        cartan=cartan,
        sym=sym,
        positive_roots=roots,
        parity=parity,
        orderings=(),
    )
    default = default_normal_ordering(rs)
    orderings = [default]
    rev = default.reversed()
    if rev.sequence != default.sequence:
        try:
            if validate_normal_ordering(rev, rs):
                orderings.append(rev)
        except NotAPermutation:  # pragma: no cover - same multiset by construction
            pass
    return RootSystem(
        algebra_id=algebra_id,
        rank=rank,
        cartan=cartan,
        sym=sym,
        positive_roots=roots,
        parity=parity,
        orderings=tuple(orderings),
    )
