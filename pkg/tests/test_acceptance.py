"""End-to-end acceptance battery.

Eleven independent criteria, one test each, every one with an explicit
wall-clock budget.  Each test prints a single pass line (visible under
pytest -s) and fails loudly if either the property or the budget breaks.
"""

import random
import time
from itertools import combinations

from holant import scalar as S
from holant.classes import in_A, in_M_closure, is_vanishing
from holant.classifier import (
    check_csp, check_csp2, check_cspd_neq, check_eo,
    check_holantc_conditions, check_pc, check_single_weighted,
    orthogonal_candidates, replay_certificate,
)
from holant.constructions import (
    entanglement_class, extract_delta_power, ghz_normal_form,
    nonvanishing_witness, odd_arity_route, reduce_arity_gap,
    selfloop_reduce, DescendStep,
)
from holant.factorization import is_irreducible, upf
from holant.grid import (
    CspInstance, Grid, csp_to_grid, eval_csp, eval_eo, eval_holant,
    random_grid, realize_gadget, validate_eo,
)
from holant.scalar import I, ONE, ZERO
from holant.signature import (
    Signature, bits_of, coerce_scalar, delta, disequality, equality,
    symmetric, unary, weight,
)
from holant.transforms import (
    Mat2, apply_holographic, apply_slocc, hat, matrix_k, unhat,
)

W_SIG = symmetric([0, 1, 0, 0])
SCALAR_POOL = (0, 0, 1, -1, 2, I, 1 + I)


def report(num, label, t0, budget):
    took = time.monotonic() - t0
    print("criterion %2d %-28s PASS  %6.2fs (budget %ds)"
          % (num, label, took, budget))
    assert took < budget, \
        "criterion %d blew its %ds budget: %.2fs" % (num, budget, took)


def rand_scalar(rng, pool=SCALAR_POOL):
    return coerce_scalar(rng.choice(pool))


def rand_table(rng, arity, pool=SCALAR_POOL):
    table = [rand_scalar(rng, pool) for _ in range(1 << arity)]
    if all(v.is_zero() for v in table):
        table[rng.randrange(len(table))] = ONE
    return Signature(table)


def rand_invertible(rng):
    while True:
        m = Mat2(*(rand_scalar(rng) for _ in range(4)))
        if not m.det().is_zero():
            return m


# -- 1: holographic invariance on bipartite grids ------------------------------------


def rand_bipartite(rng):
    # closed bipartite grid: <= 8 edges, <= 6 vertices, arities <= 4
    m = rng.randint(1, 8)

    def arities():
        parts, left = [], m
        while left:
            a = rng.randint(1, min(4, left))
            parts.append(a)
            left -= a
        return parts

    while True:
        la, ra = arities(), arities()
        if len(la) + len(ra) <= 6:
            break
    lsigs = [rand_table(rng, a) for a in la]
    rsigs = [rand_table(rng, a) for a in ra]
    lports = [(v, s) for v, a in enumerate(la) for s in range(a)]
    rports = [(len(la) + v, s) for v, a in enumerate(ra) for s in range(a)]
    rng.shuffle(rports)
    return lsigs, rsigs, list(zip(lports, rports))


def test_criterion_01_holographic_invariance():
    t0 = time.monotonic()
    rng = random.Random(101)
    for _ in range(200):
        lsigs, rsigs, edges = rand_bipartite(rng)
        z = eval_holant(Grid(lsigs + rsigs, edges))
        t = rand_invertible(rng)
        tinv = t.inverse()
        # each edge carries Tinv T = id, split across its two endpoints
        tl = [apply_holographic(f, tinv, side="row") for f in lsigs]
        tr = [apply_holographic(g, t, side="col") for g in rsigs]
        assert eval_holant(Grid(tl + tr, edges)) == z
    report(1, "holographic invariance", t0, 60)


# -- 2: the flip-world basis change -------------------------------------------------


def test_criterion_02_flip_basis_algebra():
    t0 = time.monotonic()
    k = matrix_k()
    assert apply_holographic(equality(2), k, side="row") == disequality()

    h0 = hat(delta(0))
    assert not h0.table[0].is_zero()
    assert h0.table[0] == h0.table[1]

    h1 = hat(unary(1, I))
    assert not h1.table[0].is_zero()
    assert h1.table[1].is_zero()

    rng = random.Random(102)
    neq = disequality()
    for _ in range(20):
        q = rand_scalar(rng, (1, -1, 2, 3, I, 1 + I, 2 - I))
        while q.is_zero():
            q = rand_scalar(rng)
        d = Mat2(q.inverse(), ZERO, ZERO, q)
        assert apply_holographic(neq, d) == neq
    report(2, "flip-world basis algebra", t0, 60)


# -- 3: signature calculus against the grid oracle ----------------------------------


def test_criterion_03_gadget_oracle_agreement():
    t0 = time.monotonic()
    rng = random.Random(103)
    for _ in range(500):
        op = rng.randrange(4)
        if op == 0:
            f = rand_table(rng, rng.randint(1, 4))
            i = rng.randrange(f.arity)
            b = rng.randrange(2)
            grid = Grid([f, delta(b)], [((0, i), (1, 0))],
                        externals=[(0, s) for s in range(f.arity)
                                   if s != i])
            assert realize_gadget(grid) == f.pin(i, b)
        elif op == 1:
            f = rand_table(rng, rng.randint(2, 4))
            i, j = sorted(rng.sample(range(f.arity), 2))
            rest = [(0, s) for s in range(f.arity) if s not in (i, j)]
            grid = Grid([f], [((0, i), (0, j))], externals=rest)
            assert realize_gadget(grid) == f.self_loop(i, j)
        elif op == 2:
            f = rand_table(rng, rng.randint(2, 4))
            i, j = sorted(rng.sample(range(f.arity), 2))
            rest = [(0, s) for s in range(f.arity) if s not in (i, j)]
            grid = Grid([f, disequality()],
                        [((0, i), (1, 0)), ((0, j), (1, 1))],
                        externals=rest)
            assert realize_gadget(grid) == f.self_loop(i, j, disequality())
        else:
            f = rand_table(rng, rng.randint(1, 3))
            g = rand_table(rng, rng.randint(1, 3))
            k = rng.randint(1, min(f.arity, g.arity))
            nf, ng = f.arity, g.arity
            grid = Grid([f, g],
                        [((0, nf - k + t), (1, t)) for t in range(k)],
                        externals=[(0, s) for s in range(nf - k)]
                        + [(1, s) for s in range(k, ng)])
            assert realize_gadget(grid) == f.compose(g.with_fresh_vars(), k)
    report(3, "gadget calculus vs oracle", t0, 30)


# -- 4: unique product factorization -------------------------------------------------


def rand_irreducible(rng, arity):
    if arity == 1:
        return rand_table(rng, 1)
    while True:
        f = rand_table(rng, arity)
        if not f.is_zero() and is_irreducible(f):
            return f


def test_criterion_04_product_factorization():
    t0 = time.monotonic()
    rng = random.Random(104)
    for _ in range(500):
        total = rng.randint(2, 10)
        arities = []
        while sum(arities) < total:
            arities.append(min(rng.choice((1, 1, 1, 2, 2, 3)),
                               total - sum(arities)))
        factors = [rand_irreducible(rng, a) for a in arities]
        prod = factors[0]
        for g in factors[1:]:
            prod = prod.tensor(g.with_fresh_vars())
        form = upf(prod)
        assert form.rebuild() == prod
        assert len(form.factors) == len(factors)

        perm = list(range(prod.arity))
        rng.shuffle(perm)
        shuffled = prod.permute_vars(perm)
        form2 = upf(shuffled)
        assert form2.rebuild() == shuffled

        blocks1 = {frozenset(perm[p] for p in pos): (pos, f)
                   for pos, f in form.factors}
        blocks2 = {frozenset(pos): (pos, f) for pos, f in form2.factors}
        assert set(blocks1) == set(blocks2)
        ratio = ONE
        for key in blocks1:
            pos1, f1 = blocks1[key]
            pos2, f2 = blocks2[key]
            # factor variables follow their positions through the shuffle;
            # the factors themselves match up to the lead normalization
            order = sorted(range(len(pos1)), key=lambda t: perm[pos1[t]])
            inner = [order.index(t) for t in range(len(pos1))]
            moved = f1.permute_vars(inner)
            lead = moved.table[moved.support()[0]]
            r = f2.table[moved.support()[0]] / lead
            assert not r.is_zero() and moved.scale(r) == f2
            ratio = ratio * r
        assert form2.scalar * ratio == form.scalar
    report(4, "product factorization", t0, 60)


# -- 5: affine membership against a hand oracle --------------------------------------


ENTRIES9 = tuple(coerce_scalar(v)
                 for v in (0, 1, -1, I, -I, 2, -2, 2 * I, -2 * I))
I_POWERS = (ONE, I, -ONE, -I)


def affine_oracle_le2(table, n):
    sup = [i for i, v in enumerate(table) if not v.is_zero()]
    if not sup:
        return True
    if len(sup) == 3:
        return False                    # three points are never affine
    if len(sup) == 4 and n < 2:
        return False
    base = table[sup[0]]
    ts = []
    for idx in sup:
        r = table[idx] / base
        if r not in I_POWERS:
            return False
        ts.append(I_POWERS.index(r))
    if len(sup) == 4:
        # full square: the mixed second difference must be even
        return (ts[3] - ts[2] - ts[1] + ts[0]) % 2 == 0
    return True


def rand_affine_member(rng):
    # direct construction: affine support, i-power phases, quadratic law
    dim = rng.choice((0, 1, 1, 2, 2, 3))
    basis = []
    span = {0}
    while len(basis) < dim:
        b = rng.randint(1, 7)
        if b not in span:
            basis.append(b)
            span |= {s ^ b for s in span}
    point = rng.randrange(8)
    lam = rand_scalar(rng, (1, 2, I, -1, 1 + I, 3))
    lin = [rng.randrange(4) for _ in basis]
    cross = {(i, j): rng.randrange(2)
             for i, j in combinations(range(dim), 2)}
    const = rng.randrange(4)
    table = [ZERO] * 8
    for y in range(1 << dim):
        idx = point
        t = const
        for i in range(dim):
            if (y >> i) & 1:
                idx ^= basis[i]
                t += lin[i]
        for (i, j), b in cross.items():
            if (y >> i) & 1 and (y >> j) & 1:
                t += 2 * b
        table[idx] = lam * I_POWERS[t % 4]
    return Signature(table)


def test_criterion_05_affine_oracle():
    t0 = time.monotonic()
    for n in (0, 1, 2):
        for combo in range(len(ENTRIES9) ** (1 << n)):
            table, rest = [], combo
            for _ in range(1 << n):
                table.append(ENTRIES9[rest % len(ENTRIES9)])
                rest //= len(ENTRIES9)
            got = in_A(Signature(table)).member
            assert got == affine_oracle_le2(table, n), table

    rng = random.Random(105)
    members = [rand_affine_member(rng) for _ in range(100000)]
    for f in members:
        assert in_A(f).member, f.table

    two = coerce_scalar(2)
    three = coerce_scalar(3)
    for f in members[:10000]:
        table = list(f.table)
        sup = [i for i, v in enumerate(table) if not v.is_zero()]
        if len(sup) >= 2:
            table[rng.choice(sup)] *= two
        else:
            table[(sup[0] + 1) % 8] = table[sup[0]] * three
        assert not in_A(Signature(table)).member, table
    report(5, "affine membership oracle", t0, 120)


# -- 6: the vanishing dichotomy ------------------------------------------------------


def rand_one_sided(rng):
    n = rng.randint(1, 4)
    side_hi = rng.randrange(2)
    table = [ZERO] * (1 << n)
    picked = False
    for idx in range(1 << n):
        strict = (2 * weight(idx) > n) if side_hi else (2 * weight(idx) < n)
        if strict and rng.randrange(2):
            table[idx] = rand_scalar(rng, (1, -1, 2, I))
            picked = picked or not table[idx].is_zero()
    if not picked:
        table[(1 << n) - 1 if side_hi else 0] = ONE
    return unhat(Signature(table))


def rand_closed_grids(rng, f, count):
    n = f.arity
    for _ in range(count):
        k = rng.choice((2, 4))      # even copies keep the port total even
        ports = [(v, s) for v in range(k) for s in range(n)]
        rng.shuffle(ports)
        edges = [(ports[i], ports[i + 1])
                 for i in range(0, len(ports), 2)]
        yield Grid([f] * k, edges)


def test_criterion_06_vanishing_dichotomy():
    t0 = time.monotonic()
    rng = random.Random(106)
    for round_no in range(100):
        if round_no % 5 < 2:
            f = rand_one_sided(rng)
        else:
            f = rand_table(rng, rng.randint(1, 4))
        if is_vanishing(f).member:
            for grid in rand_closed_grids(rng, f, 50):
                assert eval_holant(grid) == ZERO
        else:
            witness = nonvanishing_witness(f)
            assert not eval_holant(witness).is_zero()
    report(6, "vanishing dichotomy", t0, 120)


# -- 7: construction scripts replay ---------------------------------------------------


def rand_support_table(rng, arity, keep):
    # keep decides which indices may be populated
    while True:
        table = [rand_scalar(rng, (0, 1, -1, 2, I)) if keep(idx) else ZERO
                 for idx in range(1 << arity)]
        if any(not v.is_zero() for v in table):
            return Signature(table)


def test_criterion_07_construction_replay():
    t0 = time.monotonic()
    rng = random.Random(107)
    ran = 0
    while ran < 30:           # imbalanced-string contraction
        n = rng.randint(2, 5)
        f = rand_support_table(rng, n, lambda idx: True)
        imb = [i for i in f.support() if 2 * weight(i) != n]
        if not imb:
            continue
        script = selfloop_reduce(f, bits_of(rng.choice(imb), n))
        script.verify()
        ran += 1
    for _ in range(25):       # strict one-sided collapse to a pin power
        n = rng.randint(2, 5)
        hi = rng.randrange(2)
        f = rand_support_table(
            rng, n,
            lambda idx: (2 * weight(idx) > n) if hi
            else (2 * weight(idx) < n))
        script = extract_delta_power(f)
        script.verify()
        assert script.claimed.arity == script.meta["r"]
    for _ in range(25):       # odd-arity descent
        f = rand_table(rng, rng.choice((1, 3, 5)))
        route = odd_arity_route(f)
        if isinstance(route, DescendStep):
            route.script.verify()
            assert route.script.claimed.arity == f.arity - 2
    ran = 0
    while ran < 20:           # two-string arity reduction
        n = rng.randint(3, 5)
        f = rand_support_table(rng, n, lambda idx: True)
        sup = f.support()
        pure = {0, (1 << n) - 1}
        picks = [(a, b) for a in sup for b in sup
                 if a != b and not (a in pure and b in pure)]
        if not picks:
            continue
        a, b = picks[rng.randrange(len(picks))]
        script = reduce_arity_gap(f, bits_of(a, n), bits_of(b, n))
        script.verify()
        assert script.claimed.arity in (n - 1, n - 2)
        ran += 1
    report(7, "construction replay", t0, 60)


# -- 8: the two ternary entanglement orbits -------------------------------------------


def test_criterion_08_ternary_orbits():
    t0 = time.monotonic()
    rng = random.Random(108)
    ghz = equality(3)
    for _ in range(200):
        mats = [rand_invertible(rng) for _ in range(3)]
        assert entanglement_class(apply_slocc(ghz, mats)) == "GHZ"
    for _ in range(200):
        mats = [rand_invertible(rng) for _ in range(3)]
        assert entanglement_class(apply_slocc(W_SIG, mats)) == "W"
    for _ in range(40):
        t = rand_invertible(rng)
        h = apply_holographic(ghz, t)
        m = ghz_normal_form(h)
        assert apply_holographic(ghz, m) == h
    report(8, "ternary orbit split", t0, 30)


# -- 9: world-to-world encodings ------------------------------------------------------


def rand_csp(rng):
    num_vars = rng.randint(1, 5)
    pool = [rand_table(rng, rng.randint(1, 3)) for _ in range(3)]
    constraints = []
    budget = 10
    for _ in range(rng.randint(1, 5)):
        sig = rng.choice(pool)
        if sig.arity > budget:
            break
        budget -= sig.arity
        constraints.append(
            (sig, [rng.randrange(num_vars) for _ in range(sig.arity)]))
    if not constraints:
        constraints = [(pool[0],
                        [rng.randrange(num_vars)
                         for _ in range(pool[0].arity)])]
    return CspInstance(num_vars, constraints)


def rand_balanced_pool(rng):
    out = []
    for _ in range(3):
        n = rng.choice((2, 2, 4))
        f = rand_support_table(rng, n, lambda idx: 2 * weight(idx) == n)
        out.append(f)
    return out


def test_criterion_09_world_encodings():
    t0 = time.monotonic()
    rng = random.Random(109)
    for _ in range(100):
        inst = rand_csp(rng)
        assert eval_csp(inst) == eval_holant(csp_to_grid(inst))
    for seed in range(100):
        g = random_grid(seed, rand_balanced_pool(rng), rng.randint(2, 4))
        validate_eo(g)
        sigs = list(g.signatures)
        edges = []
        for p1, p2 in g.edges:
            sigs.append(disequality().with_fresh_vars())
            mid = len(sigs) - 1
            edges.append((p1, (mid, 0)))
            edges.append(((mid, 1), p2))
        assert eval_eo(g) == eval_holant(Grid(sigs, edges))
    report(9, "world-to-world encodings", t0, 60)


# -- 10: classifier golden verdicts ----------------------------------------------------


def test_criterion_10_classifier_goldens():
    t0 = time.monotonic()
    pc_rows = [
        ([delta(0)], "TractableFP", "case 3"),
        ([unary(1, I)], "TractableFP", "vanishing"),
        ([unary(1, -I)], "TractableFP", "vanishing"),
        ([equality(3)], "TractableFP", "case 5"),
        ([apply_holographic(symmetric([-1, 1, 0, 0]), matrix_k())],
         "TractableFP", "vanishing"),
        ([symmetric([1, 0, 0, 8])], "TractableFP", "case 6"),
        ([unary(1, I), unary(1, -I)], "TractableFPNP", "case 2"),
        ([equality(2)], "NotApplicable", None),
    ]
    for members, outcome, case in pc_rows:
        verdict = check_pc(members)
        assert verdict.outcome == outcome, (members, verdict.outcome)
        if case is not None:
            assert verdict.case == case
        if verdict.tractable:
            assert replay_certificate(members, verdict.certificate)

    eq3 = check_pc([equality(3)])
    assert eq3.certificate["matrix"]["name"] == "I"

    kr = [apply_holographic(symmetric([-1, 1, 0, 0]), matrix_k())]
    assert in_M_closure(hat(kr[0])).member

    hard = check_pc([W_SIG])
    assert hard.outcome == "HardModuloSearch"
    statuses = {c.label: c.status for c in hard.conditions}
    for label in ("case 1", "case 2", "case 3", "case 4"):
        assert statuses[label] == "refuted", (label, statuses[label])

    extra = [
        (check_eo([disequality()]), "TractableFP"),
        (check_single_weighted([delta(1)]), "TractableFPNP"),
        (check_csp([equality(3)]), "TractableFP"),
        (check_csp([symmetric([1, 2])]), "TractableFP"),
        (check_csp2([Signature([1, 1, 1, -1])]), "TractableFP"),
        (check_holantc_conditions([unhat(equality(4))]), "TractableFP"),
    ]
    sets_for = [
        [disequality()], [delta(1)], [equality(3)], [symmetric([1, 2])],
        [Signature([1, 1, 1, -1])], [unhat(equality(4))],
    ]
    for (verdict, outcome), members in zip(extra, sets_for):
        assert verdict.outcome == outcome, verdict.to_json()
        if verdict.certificate is not None:
            assert replay_certificate(members, verdict.certificate)

    d3 = check_cspd_neq([symmetric([1, 2])], 3)
    assert d3.outcome == "TractableFP" and d3.case == "P"
    assert replay_certificate([symmetric([1, 2])], d3.certificate, d=3)
    report(10, "classifier goldens", t0, 60)


# -- 11: orthogonal stability of the main battery --------------------------------------


def stability_pool(rng):
    one_hot = symmetric([0, 1, 0, 0])
    picks = [
        lambda: [delta(0), equality(2)],
        lambda: [unary(1, I), rand_table(rng, 2, (0, 1, -1))],
        lambda: [equality(3)],
        lambda: [unhat(symmetric([1, 1, 0, 0])),
                 unhat(Signature([0, 0, 0, 1]))],
        lambda: [unary(1, -I), unhat(disequality())],
        lambda: [one_hot],
        lambda: [apply_holographic(one_hot, matrix_k()),
                 unary(1, rng.choice((1, -1, 2)))],
    ]
    return rng.choice(picks)()


def test_criterion_11_orthogonal_stability():
    t0 = time.monotonic()
    rng = random.Random(111)
    named = orthogonal_candidates()
    for _ in range(50):
        members = stability_pool(rng)
        _, o1 = named[rng.randrange(len(named))]
        if rng.randrange(2):
            _, o2 = named[rng.randrange(len(named))]
            o1 = o1 @ o2
        image = [apply_holographic(f, o1) for f in members]
        left = check_pc(members)
        right = check_pc(image)
        assert left.outcome == right.outcome
        if right.tractable:
            assert replay_certificate(image, right.certificate)
    report(11, "orthogonal stability", t0, 60)
