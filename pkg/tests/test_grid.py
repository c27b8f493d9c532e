import random

import pytest

from holant.errors import (
    DanglingPresent, GridShapeError, NotEOSignature, OddDegree, TooManyEdges,
)
from holant import scalar as S
from holant.scalar import Cyclo, ONE
from holant.signature import (
    Signature, binary, delta, disequality, equality, symmetric, unary,
)
from holant.grid import (
    CspInstance, Grid, csp_to_grid, eval_csp, eval_eo, eval_holant,
    random_grid, realize_gadget, validate_eo,
)


def brute_eval(grid):
    # independent reference: enumerate edge bits directly
    total = S.ZERO
    m = len(grid.edges)
    for asg in range(1 << m):
        prod = S.ONE
        idx = [0] * len(grid.signatures)
        for e, ((v1, s1), (v2, s2)) in enumerate(grid.edges):
            bit = (asg >> e) & 1
            idx[v1] |= bit << (grid.signatures[v1].arity - 1 - s1)
            idx[v2] |= bit << (grid.signatures[v2].arity - 1 - s2)
        for v, sig in enumerate(grid.signatures):
            prod = prod * sig.table[idx[v]]
        total = total + prod
    return total


def test_empty_grid():
    assert eval_holant(Grid([], [])) == ONE


def test_single_edge_equalities():
    # two unary vertices joined: Z = a0*b0 + a1*b1
    g = Grid([unary(2, 3), unary(5, 7)], [((0, 0), (1, 0))])
    assert eval_holant(g) == Cyclo.from_int(2 * 5 + 3 * 7)
    assert eval_eo(g) == Cyclo.from_int(2 * 7 + 3 * 5)


def test_triangle_of_equalities():
    # 3-cycle of binary equality vertices: Z = 2
    e2 = equality(2)
    g = Grid([e2.with_fresh_vars() for _ in range(3)],
             [((0, 1), (1, 0)), ((1, 1), (2, 0)), ((2, 1), (0, 0))])
    assert eval_holant(g) == S.TWO
    # 3-cycle of disequality vertices admits no consistent assignment
    d2 = disequality()
    h = Grid([d2.with_fresh_vars() for _ in range(3)],
             [((0, 1), (1, 0)), ((1, 1), (2, 0)), ((2, 1), (0, 0))])
    assert eval_holant(h) == S.ZERO
    # but in the flip-edge world, every edge flips: equality 3-cycle gives 0
    assert eval_eo(g) == S.ZERO
    assert eval_eo(h) == S.TWO


def test_gray_matches_direct_enumeration():
    rng = random.Random(314)
    pool = [equality(2), disequality(), symmetric([1, "i", 0]),
            unary(1, "w^3"), symmetric([2, 0, 1, 1])]
    for seed in range(12):
        g = random_grid(seed, pool, rng.randint(2, 6))
        assert eval_holant(g) == brute_eval(g)


def test_grid_shape_validation():
    e2 = equality(2)
    with pytest.raises(GridShapeError):
        Grid([e2], [((0, 0), (0, 0))])  # same port twice
    with pytest.raises(GridShapeError):
        Grid([e2], [((0, 0), (0, 2))])  # slot out of range
    with pytest.raises(GridShapeError):
        Grid([e2], [((0, 0), (1, 0))])  # vertex out of range
    with pytest.raises(GridShapeError):
        Grid([e2], [])  # unwired ports, not declared external
    with pytest.raises(DanglingPresent):
        eval_holant(Grid([e2], [], externals=[(0, 0), (0, 1)]))


def test_self_loop_edge():
    # loop on an equality-3 vertex leaves effective unary [1, 1]
    g = Grid([equality(3), delta(0)],
             [((0, 0), (0, 1)), ((0, 2), (1, 0))])
    assert eval_holant(g) == ONE


def test_edge_cap():
    sigs = [unary(1, 1).with_fresh_vars() for _ in range(50)]
    edges = [((2 * i, 0), (2 * i + 1, 0)) for i in range(25)]
    with pytest.raises(TooManyEdges):
        eval_holant(Grid(sigs, edges))


def test_realize_gadget_chain():
    # two binary vertices in series realize their matrix product
    a = binary(1, 2, 3, 4)
    b = binary(4, 3, 2, 1)
    g = Grid([a, b], [((0, 1), (1, 0))], externals=[(0, 0), (1, 1)])
    got = realize_gadget(g)
    assert got == a.compose(b, 1)


def test_realize_gadget_matches_signature_ops():
    rng = random.Random(77)
    for _ in range(10):
        f = Signature([rng.randint(-2, 2) for _ in range(8)])
        # self-loop on vars 0,1 via gadget
        g = Grid([f], [((0, 0), (0, 1))], externals=[(0, 2)])
        assert realize_gadget(g) == f.self_loop(0, 1)
        # pin var 2 to 1 via a delta vertex
        h = Grid([f, delta(1)], [((0, 2), (1, 0))],
                 externals=[(0, 0), (0, 1)])
        assert realize_gadget(h) == f.pin(2, 1)


def test_realize_gadget_external_order():
    f = binary(1, 2, 3, 4)
    g = Grid([f], [], externals=[(0, 1), (0, 0)])
    got = realize_gadget(g)
    assert got == f.permute_vars((1, 0))


def test_validate_eo():
    ok = Grid([disequality(), disequality()],
              [((0, 0), (1, 0)), ((0, 1), (1, 1))])
    validate_eo(ok)
    odd = Grid([unary(1, 1), unary(1, 1)], [((0, 0), (1, 0))])
    with pytest.raises(OddDegree):
        validate_eo(odd)
    uneven = Grid([equality(2), equality(2)],
                  [((0, 0), (1, 0)), ((0, 1), (1, 1))])
    with pytest.raises(NotEOSignature):
        validate_eo(uneven)
    validate_eo(uneven, require_balanced_support=False)


def test_eo_matches_inserted_disequality():
    # flip-edge evaluation == equality-edge evaluation with a disequality
    # vertex spliced into every edge
    rng = random.Random(2718)
    pool = [equality(2), symmetric([1, 2, 3]), unary(1, -1),
            symmetric([0, 1, 0, 1])]
    for seed in range(8):
        g = random_grid(seed + 100, pool, rng.randint(2, 5))
        sigs = list(g.signatures)
        edges = []
        for (p1, p2) in g.edges:
            sigs.append(disequality().with_fresh_vars())
            mid = len(sigs) - 1
            edges.append((p1, (mid, 0)))
            edges.append(((mid, 1), p2))
        assert eval_eo(g) == eval_holant(Grid(sigs, edges))


def test_random_grid_deterministic():
    pool = [equality(2), equality(3)]
    g1 = random_grid(42, pool, 4)
    g2 = random_grid(42, pool, 4)
    assert g1.edges == g2.edges
    assert [s.table for s in g1.signatures] == [s.table for s in g2.signatures]
    assert eval_holant(g1) == eval_holant(g2)


def test_csp_eval_and_encoding():
    # two variables, constraints: x0 OR x1 (as 0/1 table), x0 = x1
    orr = binary(0, 1, 1, 1)
    eq = equality(2)
    csp = CspInstance(2, [(orr, (0, 1)), (eq, (0, 1))])
    # assignments 00:0, 01:0, 10:0, 11:1
    assert eval_csp(csp) == ONE
    assert eval_holant(csp_to_grid(csp)) == ONE
    # repeated variable inside one constraint
    csp2 = CspInstance(1, [(binary(1, 2, 3, 4), (0, 0))])
    assert eval_csp(csp2) == Cyclo.from_int(1 + 4)
    assert eval_holant(csp_to_grid(csp2)) == Cyclo.from_int(5)
    # free variable doubles the count
    csp3 = CspInstance(2, [(delta(1), (0,))])
    assert eval_csp(csp3) == S.TWO
    assert eval_holant(csp_to_grid(csp3)) == S.TWO


def test_csp_random_agreement():
    rng = random.Random(5)
    pool = [binary(0, 1, 1, 1), equality(2), disequality(), delta(0),
            unary(1, "i"), symmetric([1, 0, 0, 1])]
    for _ in range(10):
        nv = rng.randint(1, 5)
        cons = []
        for _ in range(rng.randint(1, 5)):
            sig = pool[rng.randrange(len(pool))]
            cons.append((sig, tuple(rng.randrange(nv)
                                    for _ in range(sig.arity))))
        csp = CspInstance(nv, cons)
        assert eval_csp(csp) == eval_holant(csp_to_grid(csp))
