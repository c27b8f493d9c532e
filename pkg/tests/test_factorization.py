import random

import pytest

from holant.errors import EmptySplit, TrivialSignature
from holant import scalar as S
from holant.scalar import Cyclo, I, ONE
from holant.signature import Signature, binary, equality, symmetric, unary
from holant.factorization import (
    UPF, is_irreducible, is_rank_one_split, split, upf,
)


def test_rank_one_split_basics():
    f = unary(1, 2).tensor(unary(3, 4))
    assert is_rank_one_split(f, (0,))
    assert is_rank_one_split(f, (1,))
    g = equality(2)
    assert not is_rank_one_split(g, (0,))
    with pytest.raises(EmptySplit):
        is_rank_one_split(g, ())
    with pytest.raises(EmptySplit):
        is_rank_one_split(g, (0, 1))
    with pytest.raises(TrivialSignature):
        is_rank_one_split(Signature([0, 0, 0, 0]), (0,))


def test_split_rebuilds():
    rng = random.Random(12)
    for _ in range(15):
        g = Signature([rng.randint(-3, 3) for _ in range(4)])
        h = Signature([rng.randint(-3, 3) for _ in range(2)])
        if g.is_zero() or h.is_zero():
            continue
        f = g.tensor(h)
        a, b = split(f, (0, 1))
        assert a.tensor(b) == f
        # mixed positions
        fp = f.permute_vars((0, 2, 1))  # g on vars 0,2
        a2, b2 = split(fp, (0, 2))
        assert a2.tensor(b2).permute_vars((0, 2, 1)) == fp


def test_upf_of_products():
    f = unary(1, 2).tensor(equality(2)).tensor(unary(0, 5))
    u = upf(f)
    assert u.arities() == [1, 1, 2]
    assert u.rebuild() == f
    # factor blocks land on the right positions
    blocks = [p for p, _ in u.factors]
    assert blocks == [(0,), (1, 2), (3,)]
    # unit normalization: first nonzero entry of each factor is 1
    for _, fac in u.factors:
        lead = next(v for v in fac.table if not v.is_zero())
        assert lead == ONE


def test_upf_scalar():
    f = unary(2, 4).tensor(unary(3, 3))
    u = upf(f)
    assert u.scalar == Cyclo.from_int(6)
    assert u.rebuild() == f
    z = Signature([7])
    uz = upf(z)
    assert uz.scalar == Cyclo.from_int(7)
    assert uz.factors == ()
    with pytest.raises(TrivialSignature):
        upf(Signature([0, 0]))


def test_upf_irreducible_whole():
    for f in [equality(3), symmetric([0, 1, 1, 0]), binary(0, 1, 1, 1)]:
        u = upf(f)
        assert len(u.factors) == 1
        assert u.rebuild() == f
        assert is_irreducible(f)


def test_upf_interleaved_blocks():
    # g on (0,2), h on (1,3)
    g = binary(1, 0, 0, 1)
    h = binary(1, 2, 3, 4)
    f = g.tensor(h).permute_vars((0, 2, 1, 3))
    u = upf(f)
    assert [p for p, _ in u.factors] == [(0, 2), (1, 3)]
    assert u.rebuild() == f


def test_upf_random_roundtrip():
    rng = random.Random(888)
    for _ in range(20):
        pieces = []
        total = 0
        while total < 5:
            k = rng.randint(1, 3)
            tab = [rng.randint(-2, 2) for _ in range(1 << k)]
            if not any(tab):
                continue
            pieces.append(Signature(tab))
            total += k
        f = pieces[0]
        for p in pieces[1:]:
            f = f.tensor(p)
        perm = list(range(f.arity))
        rng.shuffle(perm)
        f = f.permute_vars(perm)
        u = upf(f)
        assert u.rebuild() == f
        # blocks partition the variables
        seen = sorted(q for p, _ in u.factors for q in p)
        assert seen == list(range(f.arity))


def test_upf_uniqueness_under_scaling():
    f = equality(2).tensor(unary(1, "i"))
    u1 = upf(f)
    u2 = upf(f.scale("w^3"))
    assert [p for p, _ in u1.factors] == [p for p, _ in u2.factors]
    for (_, a), (_, b) in zip(u1.factors, u2.factors):
        assert a == b
    assert u2.scalar == u1.scalar * Cyclo.zeta(3)


def test_is_irreducible():
    assert is_irreducible(unary(1, 5))
    assert is_irreducible(equality(4))
    assert not is_irreducible(unary(1, 1).tensor(unary(1, 2)))
    f = Signature([5])
    assert not is_irreducible(f)
    with pytest.raises(TrivialSignature):
        is_irreducible(Signature([0, 0]))


def test_upf_approx_backend():
    g = Signature([1.0, 2.0], field="approx")
    h = Signature([1.0, 0.0, 0.0, 1.0], field="approx")
    f = g.tensor(h)
    u = upf(f)
    assert u.arities() == [1, 2]
    assert u.rebuild() == f
