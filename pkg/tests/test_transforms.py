import random

import pytest

from holant.errors import (
    ArityMismatch, BackendMismatch, InexactMatrix, IsotropicUnary,
    SingularMatrix, UnknownMatrixName,
)
from holant import scalar as S
from holant.scalar import Approx, Cyclo, I, ONE, ZERO
from holant.signature import (
    Signature, binary, bits_of, delta, disequality, equality, symmetric,
    unary,
)
from holant.grid import Grid, eval_eo, eval_holant, random_grid
from holant.transforms import (
    Mat2, apply_holographic, apply_slocc, apply_to_var, hat, identity,
    is_orthogonal, matrix_k, matrix_kinv, named_matrix, neq2_preserving_form,
    ortho_from_unary, phase_matrix, unhat,
)


def test_k_inverse_pair():
    k = matrix_k()
    kinv = matrix_kinv()
    assert k @ kinv == identity()
    assert kinv @ k == identity()
    # K^T K equals the flip matrix
    assert k.transpose() @ k == named_matrix("X")


def test_mat2_algebra():
    m = Mat2(1, 2, 3, 4)
    n = Mat2(4, 3, 2, 1)
    p = m @ n
    assert [v.as_fraction() for v in p.entries()] == [8, 5, 20, 13]
    assert m.det() == Cyclo.from_int(-2)
    assert m @ m.inverse() == identity()
    assert m.power(3) == m @ m @ m
    assert m.power(-1) == m.inverse()
    assert m.power(0) == identity()
    with pytest.raises(SingularMatrix):
        Mat2(1, 2, 2, 4).inverse()


def test_apply_slocc_definition():
    rng = random.Random(404)
    for _ in range(10):
        n = rng.randint(1, 4)
        f = Signature([rng.randint(-3, 3) for _ in range(1 << n)])
        mats = [Mat2(*[rng.randint(-2, 2) for _ in range(4)])
                for _ in range(n)]
        g = apply_slocc(f, mats)
        for idx in range(1 << n):
            x = bits_of(idx, n)
            acc = ZERO
            for ydx in range(1 << n):
                y = bits_of(ydx, n)
                term = f.entry(y)
                for i in range(n):
                    mm = mats[i].entries()
                    term = term * mm[2 * x[i] + y[i]]
                acc = acc + term
            assert g.entry(x) == acc
    with pytest.raises(ArityMismatch):
        apply_slocc(equality(2), [identity()])


def test_apply_to_var_is_composition():
    f = Signature([1, 2, 3, 4, 5, 6, 7, 8])
    m = Mat2(1, 1, 0, 2)
    g = apply_to_var(f, m, 1)
    # matches connecting the matrix-as-vertex column onto variable 1
    h = m.as_signature().compose(f.permute_vars((1, 0, 2)), 1)
    assert g == h.permute_vars((1, 0, 2))


def test_holographic_functoriality():
    rng = random.Random(9)
    f = Signature([rng.randint(-2, 2) for _ in range(8)])
    m = Mat2(1, 2, 3, 5)
    n = Mat2(2, 0, 1, 1)
    lhs = apply_holographic(apply_holographic(f, n), m)
    rhs = apply_holographic(f, m @ n)
    assert lhs == rhs
    back = apply_holographic(apply_holographic(f, m), m.inverse())
    assert back == f
    assert apply_holographic(f, m, side="row") == \
        apply_holographic(f, m.transpose())


def test_hat_of_equality_is_disequality():
    assert hat(equality(2)) == disequality()
    assert unhat(disequality()) == equality(2)
    # hat of a pin is a uniform unary
    h = hat(delta(0))
    assert h.entry((0,)) == S.HALF_SQRT2
    assert h.entry((1,)) == S.HALF_SQRT2
    hp = hat(delta(1))
    assert hp.entry((0,)) == -I * S.HALF_SQRT2
    assert hp.entry((1,)) == I * S.HALF_SQRT2


def test_hat_roundtrip():
    rng = random.Random(31)
    for _ in range(8):
        n = rng.randint(1, 4)
        f = Signature([rng.randint(-3, 3) for _ in range(1 << n)])
        assert unhat(hat(f)) == f
        assert hat(unhat(f)) == f


def test_partition_function_preserved_exactly():
    # closed grids: shared-bit evaluation of f equals flip-edge evaluation
    # of hat(f), with all 1/sqrt2 factors accounted exactly
    pool = [equality(2), equality(3), disequality(), delta(0),
            symmetric([1, "i", -1]), unary(1, 1)]
    for seed in range(10):
        g = random_grid(seed, pool, 2 + seed % 4)
        hg = Grid([hat(s) for s in g.signatures], g.edges)
        assert eval_eo(hg) == eval_holant(g)


def test_phase_matrices():
    for d, zexp in [(1, 6), (2, 3), (3, 2), (6, 1)]:
        t = phase_matrix(d)
        assert t.d == Cyclo.zeta(zexp)
        assert t.a == ONE and t.b == ZERO and t.c == ZERO
    with pytest.raises(InexactMatrix):
        phase_matrix(4)
    with pytest.raises(InexactMatrix):
        phase_matrix(5)
    t4 = phase_matrix(4, field="approx")
    assert abs(t4.d.val - complex(2 ** -0.5 * (1 + 1j)) ** 0.5) < 1e-9 or \
        abs(t4.d.val ** 8 - (-1)) < 1e-9


def test_named_matrix_registry():
    assert named_matrix("I") == identity()
    assert named_matrix("X") == Mat2(0, 1, 1, 0)
    assert named_matrix("Z") == Mat2(1, 0, 0, -1)
    assert named_matrix("T2") == phase_matrix(2)
    d = named_matrix("diag:w^3")
    assert d.d == Cyclo.zeta(3)
    q = named_matrix("ortho:3,4")
    assert q == Mat2(3, 4, 4, -3)
    h = named_matrix("H")
    assert is_orthogonal(h)[0] == "yes"
    k = named_matrix("K", field="approx")
    assert k.backend == "approx"
    with pytest.raises(UnknownMatrixName):
        named_matrix("Q")
    with pytest.raises(UnknownMatrixName):
        named_matrix("ortho:1")


def test_is_orthogonal():
    assert is_orthogonal(identity()) == ("yes", ONE)
    assert is_orthogonal(named_matrix("X"))[0] == "yes"
    rot = Mat2("3/5", "-4/5", "4/5", "3/5")
    assert is_orthogonal(rot) == ("yes", ONE)
    verdict, lam = is_orthogonal(Mat2(1, -1, 1, 1))
    assert verdict == "yes_up_to_scalar" and lam == S.TWO
    verdict, lam = is_orthogonal(ortho_from_unary(3, 4))
    assert verdict == "yes_up_to_scalar" and lam == Cyclo.from_int(25)
    # complex orthogonal with nonreal entries
    co = Mat2("5/4", "3/4*i", "-3/4*i", "5/4")
    assert is_orthogonal(co) == ("yes", ONE)
    assert is_orthogonal(Mat2(1, 2, 3, 4))[0] == "no"
    assert is_orthogonal(Mat2(1, "i", "i", -1))[0] == "no"


def test_ortho_from_unary():
    q = ortho_from_unary(2, 3)
    v = q.apply_unary((Cyclo.from_int(2), Cyclo.from_int(3)))
    assert v[0] == Cyclo.from_int(13)
    assert v[1] == ZERO
    with pytest.raises(IsotropicUnary):
        ortho_from_unary(1, "i")
    with pytest.raises(IsotropicUnary):
        ortho_from_unary(1, "-i")


def test_neq2_preserving_form():
    kind, lam = neq2_preserving_form(Mat2(2, 0, 0, 3))
    assert kind == "diag" and lam == Cyclo.from_int(6)
    kind, lam = neq2_preserving_form(Mat2(0, 2, 3, 0))
    assert kind == "antidiag" and lam == Cyclo.from_int(6)
    assert neq2_preserving_form(Mat2(1, 1, 1, -1)) == (None, None)
    assert neq2_preserving_form(Mat2(1, 1, 0, 0)) == (None, None)


def test_backend_guards():
    f = equality(2)
    with pytest.raises(BackendMismatch):
        apply_holographic(f, Mat2(1, 0, 0, 1, field="approx"))
    fa = Signature([1, 0, 0, 1], field="approx")
    ka = matrix_kinv("approx")
    h = apply_holographic(fa, ka)
    assert h.entry((0, 1)) == Approx(1.0)
    assert h.entry((0, 0)) == Approx(0.0)
