"""Module builders, graded tensor products, the relation validator."""

from fractions import Fraction

import numpy as np
import pytest

from qtwist.cartan import NormalOrdering, build_root_system, default_normal_ordering, pairing
from qtwist.errors import AlgebraMismatch, BadSpin, DimensionMismatch, InvalidOrdering
from qtwist.repspace import (
    OperatorMatrix,
    composite_root_matrices,
    graded_flip,
    graded_kron,
    embed_12,
    embed_13,
    embed_23,
    osp12_rep,
    probe_rep,
    qint_sym,
    spin_rep_sl2,
    swap_sides,
    tensor_rep,
    validate_rep,
    vector_rep_b2,
    vector_rep_sln,
)

QS = (0.3, 0.5, 0.8)

SPINS = (0, Fraction(1, 2), 1, Fraction(3, 2), 2, Fraction(5, 2))


def all_shipped(q):
    reps = [spin_rep_sl2(j, q) for j in SPINS]
    reps += [vector_rep_sln(3, q), vector_rep_sln(4, q),
             vector_rep_b2(q), osp12_rep(q)]
    return reps


def test_qint_sym_values():
    assert qint_sym(1, 0.5) == pytest.approx(1.0)
    assert qint_sym(2, 0.5) == pytest.approx(2.5)      # q + 1/q
    assert qint_sym(3, 0.5) == pytest.approx(5.25)     # q^2 + 1 + 1/q^2


def test_spin_rep_shapes_and_weights():
    for j in SPINS:
        rep = spin_rep_sl2(j, 0.5)
        assert rep.dim == int(2 * Fraction(j)) + 1
        # highest weight first, stepping down by alpha
        alpha = rep.rs.simple_roots[0]
        for w1, w2 in zip(rep.weights, rep.weights[1:]):
            assert w1 - w2 == alpha


def test_spin_half_matrices():
    rep = spin_rep_sl2(Fraction(1, 2), 0.5)
    assert np.allclose(rep.e[0], [[0, 1], [0, 0]])
    assert np.allclose(rep.f[0], [[0, 0], [1, 0]])
    assert np.allclose(np.diag(rep.qt[0]), [0.5, 2.0])


def test_trivial_rep():
    rep = spin_rep_sl2(0, 0.5)
    assert rep.dim == 1
    assert np.allclose(rep.e[0], 0)
    assert np.allclose(rep.qt[0], 1)
    assert validate_rep(rep).passes


def test_bad_spin_rejected():
    with pytest.raises(BadSpin):
        spin_rep_sl2(Fraction(1, 3), 0.5)
    with pytest.raises(BadSpin):
        spin_rep_sl2(-1, 0.5)


def test_osp12_layout():
    rep = osp12_rep(0.5)
    assert rep.dim == 3
    assert rep.parities == (1, 0, 1)
    assert np.allclose(np.diag(rep.qt[0]), [0.5, 1.0, 2.0])


def test_q_out_of_range():
    for q in (0.0, 1.0, 1.5, -0.2):
        with pytest.raises(ValueError):
            spin_rep_sl2(1, q)


@pytest.mark.parametrize("q", QS)
def test_validator_passes_all_shipped_reps(q):
    for rep in all_shipped(q):
        report = validate_rep(rep)
        assert report.passes, (rep.label, q, report.as_dict())
        assert report.max_residual <= 1e-11


def test_validator_catches_corruption():
    rep = vector_rep_sln(3, 0.5)
    e = tuple(m.copy() for m in rep.e)
    e[0][0, 1] += 1e-3
    broken = type(rep)(
        rs=rep.rs, q=rep.q, dim=rep.dim, weights=rep.weights,
        parities=rep.parities, e=e, f=rep.f, qt=rep.qt, label="broken")
    report = validate_rep(broken)
    assert not report.passes
    assert "ef" in report.failing_relations()


def test_validator_catches_wrong_weight():
    rep = spin_rep_sl2(1, 0.5)
    weights = list(rep.weights)
    weights[0], weights[1] = weights[1], weights[0]
    broken = type(rep)(
        rs=rep.rs, q=rep.q, dim=rep.dim, weights=tuple(weights),
        parities=rep.parities, e=rep.e, f=rep.f, qt=rep.qt, label="broken")
    assert not validate_rep(broken).passes


def test_probe_reps_validate():
    for aid in ("A1", "A2", "A3", "B2", "OSP12"):
        rs = build_root_system(aid)
        assert validate_rep(probe_rep(rs, 0.5)).passes, aid


def test_tensor_rep_basic():
    a = spin_rep_sl2(Fraction(1, 2), 0.5)
    b = spin_rep_sl2(1, 0.5)
    t = tensor_rep(a, b)
    assert t.dim == 6
    assert t.weights[0] == a.weights[0] + b.weights[0]
    assert validate_rep(t).passes


def test_tensor_rep_osp_graded():
    a = osp12_rep(0.5)
    t = tensor_rep(a, a)
    assert t.dim == 9
    assert t.parities == tuple((p1 + p2) % 2 for p1 in a.parities for p2 in a.parities)
    assert validate_rep(t).passes


def test_tensor_rep_mismatch():
    with pytest.raises(AlgebraMismatch):
        tensor_rep(spin_rep_sl2(1, 0.5), vector_rep_sln(3, 0.5))
    with pytest.raises(AlgebraMismatch):
        tensor_rep(spin_rep_sl2(1, 0.5), spin_rep_sl2(1, 0.3))


def test_tensor_rep_associative():
    a = osp12_rep(0.5)
    left = tensor_rep(tensor_rep(a, a), a)
    right = tensor_rep(a, tensor_rep(a, a))
    assert left.weights == right.weights
    assert left.parities == right.parities
    for i in range(a.rs.rank):
        assert np.max(np.abs(left.e[i] - right.e[i])) < 1e-12
        assert np.max(np.abs(left.f[i] - right.f[i])) < 1e-12


def test_graded_kron_even_is_plain_kron():
    rng = np.random.default_rng(7)
    a, b = rng.normal(size=(3, 3)), rng.normal(size=(2, 2))
    assert np.array_equal(graded_kron(a, b, (0, 1, 0), 0), np.kron(a, b))


def test_graded_kron_odd_sign():
    a = np.eye(2, dtype=complex)
    b = np.ones((2, 2), dtype=complex)
    out = graded_kron(a, b, (0, 1), 1)
    # odd operator in slot 2 picks up a sign on odd slot-1 columns
    assert np.array_equal(out[:2, :2], b)
    assert np.array_equal(out[2:, 2:], -b)


def test_graded_flip_involution():
    px, py = (1, 0, 1), (0, 1)
    back = graded_flip(py, px)
    fwd = graded_flip(px, py)
    assert np.allclose(back @ fwd, np.eye(6))


def test_swap_sides_round_trip():
    a = spin_rep_sl2(Fraction(1, 2), 0.5)
    b = osp12_rep(0.5)
    rng = np.random.default_rng(3)
    m = rng.normal(size=(6, 6)).astype(complex)
    assert np.allclose(swap_sides(swap_sides(m, a, b), b, a), m)


def test_embeddings_against_kron():
    a = spin_rep_sl2(Fraction(1, 2), 0.5)
    rng = np.random.default_rng(11)
    m = rng.normal(size=(4, 4)).astype(complex)
    assert np.array_equal(embed_12(m, a), np.kron(m, np.eye(2)))
    assert np.array_equal(embed_23(m, a), np.kron(np.eye(2), m))


def test_embed_13_all_even_case():
    # with no odd vectors the (1,3) embedding is a plain middle transpose
    a = spin_rep_sl2(Fraction(1, 2), 0.5)
    m = np.arange(16, dtype=complex).reshape(4, 4)
    got = embed_13(m, a, a, a)
    expect = np.kron(m, np.eye(2)).reshape((2, 2) * 3)
    expect = expect.transpose(0, 2, 1, 3, 5, 4).reshape(8, 8)
    assert np.allclose(got, expect)


def test_embeddings_commute_when_disjoint():
    a = spin_rep_sl2(Fraction(1, 2), 0.5)
    rng = np.random.default_rng(5)
    m12 = rng.normal(size=(4, 4)).astype(complex)
    d3 = np.diag(rng.normal(size=2)).astype(complex)
    lhs = embed_12(m12, a) @ embed_23(np.kron(np.eye(2), d3), a)
    rhs = embed_23(np.kron(np.eye(2), d3), a) @ embed_12(m12, a)
    assert np.allclose(lhs, rhs)


def test_composite_root_vectors_sl3():
    rep = vector_rep_sln(3, 0.5)
    o = default_normal_ordering(rep.rs)
    comp = composite_root_matrices(rep, o)
    a1, a2 = rep.rs.simple_roots
    e, f = comp[a1 + a2]
    expect = np.zeros((3, 3))
    expect[0, 2] = 1.0
    assert np.allclose(e, expect)
    assert np.allclose(f, expect.T)


def test_composite_root_vectors_osp():
    q = 0.5
    rep = osp12_rep(q)
    o = default_normal_ordering(rep.rs)
    comp = composite_root_matrices(rep, o)
    (a,) = rep.rs.simple_roots
    e2, f2 = comp[a + a]
    assert np.allclose(e2, (1 - 1 / q) * rep.e[0] @ rep.e[0])
    assert np.max(np.abs(e2)) > 0
    assert np.max(np.abs(f2)) > 0


def test_composite_root_vectors_are_weight_homogeneous():
    rep = vector_rep_b2(0.5)
    o = default_normal_ordering(rep.rs)
    comp = composite_root_matrices(rep, o)
    for gamma, (e, f) in comp.items():
        for i in range(rep.dim):
            for j in range(rep.dim):
                if abs(e[i, j]) > 1e-14:
                    assert rep.weights[i] - rep.weights[j] == gamma
                if abs(f[i, j]) > 1e-14:
                    assert rep.weights[j] - rep.weights[i] == gamma


def test_composite_root_vectors_reject_bad_ordering():
    rep = vector_rep_sln(3, 0.5)
    a1, a2 = rep.rs.simple_roots
    with pytest.raises(InvalidOrdering):
        composite_root_matrices(rep, NormalOrdering((a1, a2, a1 + a2)))


def test_operator_matrix_shape_check():
    rep = spin_rep_sl2(1, 0.5)
    with pytest.raises(DimensionMismatch):
        OperatorMatrix(np.eye(2, dtype=complex), rep)


def test_b2_vector_weights_pair_correctly():
    rep = vector_rep_b2(0.5)
    rs = rep.rs
    # self-pairings of the 5 weight lines: two long, one zero, two long
    vals = [pairing(w, w, rs) for w in rep.weights]
    assert sorted(vals) == sorted([Fraction(2), Fraction(2), Fraction(0),
                                   Fraction(2), Fraction(2)])
