"""Root systems, the invariant form, and normal orderings."""

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qtwist.cartan import (
    SUPPORTED_ALGEBRAS,
    NormalOrdering,
    Weight,
    build_root_system,
    decomposition_pair,
    default_normal_ordering,
    pairing,
    validate_normal_ordering,
)
from qtwist.errors import (
    DimensionMismatch,
    NotAPermutation,
    NotDecomposable,
    UnknownAlgebra,
)


def root_coords(rs):
    return {tuple(r.coords) for r in rs.positive_roots}


def test_supported_algebras():
    assert set(SUPPORTED_ALGEBRAS) == {"A1", "A2", "A3", "B2", "OSP12"}


def test_unknown_algebra_rejected():
    with pytest.raises(UnknownAlgebra):
        build_root_system("G2")


def test_positive_roots_a_series():
    assert root_coords(build_root_system("A1")) == {(1,)}
    assert root_coords(build_root_system("A2")) == {(1, 0), (0, 1), (1, 1)}
    assert root_coords(build_root_system("A3")) == {
        (1, 0, 0), (0, 1, 0), (0, 0, 1),
        (1, 1, 0), (0, 1, 1), (1, 1, 1),
    }


def test_positive_roots_b2():
    assert root_coords(build_root_system("B2")) == {
        (1, 0), (0, 1), (1, 1), (1, 2)}


def test_osp12_roots_and_parity():
    rs = build_root_system("OSP12")
    assert root_coords(rs) == {(1,), (2,)}
    assert rs.root_parity(Weight.of(1)) == 1
    assert rs.root_parity(Weight.of(2)) == 0


def test_plain_algebras_are_all_even():
    for aid in ("A1", "A2", "A3", "B2"):
        rs = build_root_system(aid)
        assert all(rs.root_parity(r) == 0 for r in rs.positive_roots), aid


def test_form_values_b2():
    rs = build_root_system("B2")
    a1, a2 = rs.simple_roots
    assert pairing(a1, a1, rs) == 4
    assert pairing(a2, a2, rs) == 2
    assert pairing(a1, a2, rs) == -2
    # the short composite root has short length
    assert pairing(a1 + a2, a1 + a2, rs) == 2
    assert pairing(a1 + a2 + a2, a1 + a2 + a2, rs) == 4


def test_form_values_osp12():
    rs = build_root_system("OSP12")
    (a,) = rs.simple_roots
    assert pairing(a, a, rs) == 1
    assert pairing(a + a, a + a, rs) == 4


def test_form_values_a2():
    rs = build_root_system("A2")
    a1, a2 = rs.simple_roots
    assert pairing(a1, a1, rs) == 2
    assert pairing(a1, a2, rs) == -1


def test_form_symmetric():
    rs = build_root_system("A3")
    for r in rs.positive_roots:
        for s in rs.positive_roots:
            assert pairing(r, s, rs) == pairing(s, r, rs)


def test_form_rank_mismatch():
    rs = build_root_system("A2")
    with pytest.raises(DimensionMismatch):
        pairing(Weight.of(1), Weight.of(1, 0), rs)


@given(
    a=st.fractions(min_value=-5, max_value=5, max_denominator=8),
    b=st.fractions(min_value=-5, max_value=5, max_denominator=8),
    i=st.integers(min_value=0, max_value=1),
    j=st.integers(min_value=0, max_value=1),
)
def test_form_bilinear(a, b, i, j):
    rs = build_root_system("A2")
    u, v = rs.simple_roots[i], rs.simple_roots[j]
    w = u.scale(a) + v.scale(b)
    probe = rs.positive_roots[-1]
    assert pairing(w, probe, rs) == (
        a * pairing(u, probe, rs) + b * pairing(v, probe, rs))


def test_weight_arithmetic():
    w = Weight.of("1/2", -1)
    assert (w + w).coords == (Fraction(1), Fraction(-2))
    assert (-w).coords == (Fraction(-1, 2), Fraction(1))
    assert w.scale(4).coords == (Fraction(2), Fraction(-4))
    assert (w - w).is_zero
    assert str(w) == "(1/2,-1)"


def test_weyl_vector_heights():
    # (rho|alpha_i) is the height functional the triangular solve sorts by
    rs = build_root_system("B2")
    rho = rs.weyl_vector()
    assert [pairing(rho, a, rs) for a in rs.simple_roots] == [2, 1]
    rso = build_root_system("OSP12")
    assert pairing(rso.weyl_vector(), rso.simple_roots[0], rso) == Fraction(3, 2)


def test_default_ordering_a2_is_slope_sorted():
    rs = build_root_system("A2")
    o = default_normal_ordering(rs)
    assert [tuple(r.coords) for r in o.sequence] == [(1, 0), (1, 1), (0, 1)]
    assert validate_normal_ordering(o, rs)


def test_default_ordering_osp12_puts_alpha_first():
    rs = build_root_system("OSP12")
    o = default_normal_ordering(rs)
    assert [tuple(r.coords) for r in o.sequence] == [(1,), (2,)]


def test_every_shipped_ordering_is_valid():
    for aid in SUPPORTED_ALGEBRAS:
        rs = build_root_system(aid)
        assert rs.orderings, aid
        for o in rs.orderings:
            assert validate_normal_ordering(o, rs), aid


def test_shipped_ordering_counts():
    # the reversal is shipped whenever it is itself a normal ordering
    for aid, n in (("A1", 1), ("A2", 2), ("A3", 2), ("B2", 2), ("OSP12", 1)):
        assert len(build_root_system(aid).orderings) == n, aid


def test_second_a2_ordering_is_the_reversal():
    rs = build_root_system("A2")
    assert rs.orderings[1].sequence == rs.orderings[0].reversed().sequence


def test_betweenness_violation_detected():
    rs = build_root_system("A2")
    a1, a2 = rs.simple_roots
    bad = NormalOrdering((a1, a2, a1 + a2))
    assert not validate_normal_ordering(bad, rs)


def test_non_permutation_rejected():
    rs = build_root_system("A2")
    a1, a2 = rs.simple_roots
    with pytest.raises(NotAPermutation):
        validate_normal_ordering(NormalOrdering((a1, a1, a1 + a2)), rs)


def test_doubled_root_must_follow_alpha():
    rs = build_root_system("OSP12")
    (a,) = rs.simple_roots
    assert not validate_normal_ordering(NormalOrdering((a + a, a)), rs)


def test_decomposition_pair_a2():
    rs = build_root_system("A2")
    o = default_normal_ordering(rs)
    a1, a2 = rs.simple_roots
    assert decomposition_pair(a1 + a2, o, rs) == (a1, a2)


def test_decomposition_pair_b2_long_composite():
    rs = build_root_system("B2")
    o = default_normal_ordering(rs)
    a1, a2 = rs.simple_roots
    left, right = decomposition_pair(a1 + a2 + a2, o, rs)
    assert left + right == a1 + a2 + a2
    assert o.position(left) < o.position(a1 + a2 + a2) < o.position(right)


def test_decomposition_pair_osp_doubled():
    rs = build_root_system("OSP12")
    o = default_normal_ordering(rs)
    (a,) = rs.simple_roots
    assert decomposition_pair(a + a, o, rs) == (a, a)


def test_simple_roots_not_decomposable():
    rs = build_root_system("A2")
    o = default_normal_ordering(rs)
    with pytest.raises(NotDecomposable):
        decomposition_pair(rs.simple_roots[0], o, rs)
    with pytest.raises(NotDecomposable):
        decomposition_pair(Weight.of(5, 5), o, rs)
