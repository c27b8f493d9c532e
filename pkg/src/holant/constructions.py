"""Executable gadget constructions behind the structural lemmas.

Each routine either returns a small result record or a GadgetScript: a
straight-line stack program over named base signatures.  A script replays
two independent ways, through the signature algebra and through the grid
evaluator, and ``GadgetScript.verify`` demands both agree with the claimed
table exactly.  Every constructor runs verify before returning, so a script
in the wild is always a checked certificate.

Support strings are tracked MSB-first, matching the table indexing in
signature.  "Flip world" refers to the Kinv-transformed side where plain
edges act as disequality; a flip-world disequality self-loop on a signature
is the same contraction as a plain-edge self-loop on its untransformed
original, which is what makes the dual grid replay possible.
"""

import cmath
from fractions import Fraction
from itertools import combinations, product
from math import gcd

import numpy as np

from . import scalar as _sc
from .errors import (
    ArityMismatch, ArityTooLarge, BothPureStrings, GridShapeError,
    IndexOutOfRange, InexactMatrix, IsVanishing, NoImbalancedSupport,
    NotGHZ, NotStrictEO, NotTernary, ParseError, PreconditionError,
    Reducible, ReplayMismatch, TrivialSignature, ZeroLambda,
)
from .scalar import Approx, Cyclo
from .signature import (
    Signature, bits_of, delta, disequality, equality, index_of, unary,
    weight,
)
from .transforms import Mat2, apply_holographic, hat, named_matrix, \
    ortho_from_unary
from .grid import Grid, eval_holant, realize_gadget
from .classes import eo_profile, is_vanishing
from .factorization import is_irreducible


# -- scripts -------------------------------------------------------------------


class GadgetScript:
    """A replayable gadget recipe.

    steps is a tuple of tuples, each one of
        ("load", name)               push base[name]
        ("tensor",)                  pop b, a; push a (x) b
        ("pin", i, b)                fix variable i of the top to bit b
        ("self_loop", i, j, kind)    join variables i, j; kind "eq" or "neq"
        ("permute", perm)            reorder the top's variables
        ("compose", k)               pop b, a; join last k of a to first k of b
        ("transform", name)          apply a registry matrix to every variable

    claimed is the signature the program is asserted to produce, provenance
    names the operation that built the script, and meta carries op-specific
    bookkeeping (branch taken, scale factors, tracked strings).
    """

    __slots__ = ("steps", "claimed", "provenance", "base", "meta")

    def __init__(self, steps, claimed: Signature, provenance: str,
                 base: dict, meta: dict | None = None):
        self.steps = tuple(tuple(s) for s in steps)
        self.claimed = claimed
        self.provenance = provenance
        self.base = dict(base)
        self.meta = dict(meta or {})

    def __repr__(self):
        return "GadgetScript(%s, %d steps, arity %d)" % (
            self.provenance, len(self.steps), self.claimed.arity)

    def replay_signature(self) -> Signature:
        """Run the program through the signature algebra."""
        stack: list = []
        for step in self.steps:
            op = step[0]
            if op == "load":
                stack.append(self.base[step[1]].with_fresh_vars())
            elif op == "tensor":
                b = stack.pop()
                a = stack.pop()
                stack.append(a.tensor(b))
            elif op == "pin":
                stack.append(stack.pop().pin(step[1], step[2]))
            elif op == "self_loop":
                top = stack.pop()
                conn = None
                if step[3] == "neq":
                    conn = disequality(top.backend, top.eps)
                elif step[3] != "eq":
                    raise ParseError("self_loop kind %r" % (step[3],))
                stack.append(top.self_loop(step[1], step[2], conn))
            elif op == "permute":
                stack.append(stack.pop().permute_vars(step[1]))
            elif op == "compose":
                b = stack.pop()
                a = stack.pop()
                stack.append(a.compose(b, step[1]))
            elif op == "transform":
                top = stack.pop()
                m = named_matrix(step[1], top.backend, top.eps)
                stack.append(apply_holographic(top, m))
            else:
                raise ParseError("unknown step %r" % (op,))
        if len(stack) != 1:
            raise GridShapeError("script leaves %d operands" % len(stack))
        return stack[0]

    def replay_grid(self) -> Signature:
        """Compile the program to a grid and realize it.

        Pins become weight-1 vertices, "neq" loops insert a disequality
        vertex, "eq" loops and compositions become plain edges.  A transform
        step forces an intermediate realization, so it is only supported
        when it is the sole operand on the stack.
        """
        builder = _GridBuilder()
        for step in self.steps:
            builder.apply(step, self.base)
        return builder.result()

    def verify(self) -> "GadgetScript":
        got = self.replay_signature()
        if not (got == self.claimed):
            raise ReplayMismatch("%s: signature replay disagrees with the "
                                 "claimed table" % self.provenance)
        grid = self.replay_grid()
        if not (grid == self.claimed):
            raise ReplayMismatch("%s: grid replay disagrees with the "
                                 "claimed table" % self.provenance)
        return self


class _GridBuilder:
    """Incremental grid compilation for script replay."""

    def __init__(self):
        self.sigs: list = []
        self.edges: list = []
        self.stack: list = []          # lists of open ports, one per operand

    def _vertex(self, sig: Signature) -> int:
        self.sigs.append(sig)
        return len(self.sigs) - 1

    def apply(self, step, base) -> None:
        op = step[0]
        if op == "load":
            sig = base[step[1]]
            v = self._vertex(sig)
            self.stack.append([(v, s) for s in range(sig.arity)])
        elif op == "tensor":
            b = self.stack.pop()
            a = self.stack.pop()
            self.stack.append(a + b)
        elif op == "pin":
            ports = self.stack.pop()
            anchor = self.sigs[0]
            v = self._vertex(delta(step[2], anchor.backend, anchor.eps))
            self.edges.append((ports[step[1]], (v, 0)))
            del ports[step[1]]
            self.stack.append(ports)
        elif op == "self_loop":
            ports = self.stack.pop()
            i, j, kind = step[1], step[2], step[3]
            if kind == "eq":
                self.edges.append((ports[i], ports[j]))
            else:
                anchor = self.sigs[0]
                v = self._vertex(disequality(anchor.backend, anchor.eps))
                self.edges.append((ports[i], (v, 0)))
                self.edges.append((ports[j], (v, 1)))
            for t in sorted((i, j), reverse=True):
                del ports[t]
            self.stack.append(ports)
        elif op == "permute":
            ports = self.stack.pop()
            perm = step[1]
            out = [None] * len(ports)
            for t, p in enumerate(ports):
                out[perm[t]] = p
            self.stack.append(out)
        elif op == "compose":
            b = self.stack.pop()
            a = self.stack.pop()
            k = step[1]
            for t in range(k):
                self.edges.append((a[len(a) - k + t], b[t]))
            self.stack.append(a[:len(a) - k] + b[k:])
        elif op == "transform":
            if len(self.stack) != 1:
                raise GridShapeError(
                    "matrix step replays only on a single operand")
            cur = self.result()
            m = named_matrix(step[1], cur.backend, cur.eps)
            cur = apply_holographic(cur, m)
            self.sigs = [cur]
            self.edges = []
            self.stack = [[(0, s) for s in range(cur.arity)]]
        else:
            raise ParseError("unknown step %r" % (op,))

    def result(self) -> Signature:
        if len(self.stack) != 1:
            raise GridShapeError("script leaves %d operands" %
                                 len(self.stack))
        g = Grid(self.sigs, self.edges, tuple(self.stack[0]))
        return realize_gadget(g)


# -- outcome records -------------------------------------------------------------


class OrthoCase:
    """A unary was normalized: q maps it to a multiple of (1, 0)."""

    __slots__ = ("q",)

    def __init__(self, q: Mat2):
        self.q = q

    def __repr__(self):
        return "OrthoCase(%r)" % (self.q,)


class HatPin:
    """The flip-world image is a scaled pin power on constant bit c."""

    __slots__ = ("c",)

    def __init__(self, c: int):
        self.c = c

    def __repr__(self):
        return "HatPin(%d)" % self.c


class EqualityCase:
    """Flip-world image is a two-point signature [a, 0, ..., 0, b], ab != 0."""

    __slots__ = ("a", "b", "arity")

    def __init__(self, a, b, arity: int):
        self.a = a
        self.b = b
        self.arity = arity

    def __repr__(self):
        return "EqualityCase(arity %d)" % self.arity


class DescendStep:
    """One non-vanishing plain self-loop; claimed arity drops by two."""

    __slots__ = ("script",)

    def __init__(self, script: GadgetScript):
        self.script = script

    def __repr__(self):
        return "DescendStep(%r)" % (self.script,)


class EOBranch:
    """Every flip-world profile sits on one side of the balanced slice."""

    __slots__ = ("side", "profiles")

    def __init__(self, side: str, profiles: tuple):
        self.side = side
        self.profiles = profiles

    def __repr__(self):
        return "EOBranch(%s)" % self.side


class ReductionWitness:
    """Certificates letting a tensor factor be split off a Holant set.

    h0 and h1 are scripts producing flip-world signatures with nonzero
    value on the all-zeros (resp. all-ones) string; sources index which
    input they were cut from (0 is the tensor f(x)g, t >= 1 is F[t-1]).
    balance_f / balance_g are closed grids with nonzero value built for a
    one-sided (vanishing) factor, or None where the factor is not
    vanishing.
    """

    __slots__ = ("h0", "h1", "h0_source", "h1_source",
                 "balance_f", "balance_g", "profiles")

    def __init__(self, h0, h1, h0_source, h1_source,
                 balance_f, balance_g, profiles):
        self.h0 = h0
        self.h1 = h1
        self.h0_source = h0_source
        self.h1_source = h1_source
        self.balance_f = balance_f
        self.balance_g = balance_g
        self.profiles = profiles

    def __repr__(self):
        return ("ReductionWitness(h0 from %s, h1 from %s)" %
                (self.h0_source, self.h1_source))


# -- shared string bookkeeping ---------------------------------------------------


def _as_bits(alpha, n: int) -> tuple:
    """Accept an int index, a '0101' string, or a bit sequence."""
    if isinstance(alpha, int):
        if not 0 <= alpha < (1 << n):
            raise IndexOutOfRange("index %d for arity %d" % (alpha, n))
        return bits_of(alpha, n)
    if isinstance(alpha, str):
        bits = tuple(int(c) for c in alpha)
    else:
        bits = tuple(int(b) for b in alpha)
    if len(bits) != n or any(b not in (0, 1) for b in bits):
        raise ParseError("bad support string %r for arity %d" % (alpha, n))
    return bits


def _loop_value(f: Signature, u: int, v: int, rest_bits):
    """Entry of the disequality self-loop of f at (u, v), read at rest_bits,
    without materializing the contracted table."""
    n = f.arity
    acc = f.zero_scalar()
    for a in (0, 1):
        bits = list(rest_bits)
        bits.insert(u, a)
        bits.insert(v, 1 - a)
        acc = acc + f.table[index_of(bits)]
    return acc


def _pick_loop(cur: Signature, sigma, rep_bit: int):
    """Choose the first (lowest index pair) non-vanishing disequality
    self-loop around the tracked support string.

    The three candidate pairs mix the lowest rep_bit position p with the two
    lowest opposite positions q, r.  Writing x for the tracked entry and y,
    z for its two one-swap neighbours, the candidate values are x+y, x+z and
    y+z; 2x = (x+y) + (x+z) - (y+z) keeps at least one nonzero while x is.
    Returns (u, v, next_string, value).
    """
    rep = [t for t, b in enumerate(sigma) if b == rep_bit]
    oth = [t for t, b in enumerate(sigma) if b != rep_bit]
    p = rep[0]
    q, r = oth[0], oth[1]
    qr = tuple(sorted((q, r)))
    pairs = sorted({tuple(sorted((q, p))), tuple(sorted((p, r))), qr})
    for (u, v) in pairs:
        nxt = [b for t, b in enumerate(sigma) if t not in (u, v)]
        if (u, v) == qr:
            # both loop ends carry the opposite bit; p itself flips
            nxt[p - (u < p) - (v < p)] = 1 - rep_bit
        val = _loop_value(cur, u, v, nxt)
        if not val.is_zero():
            return u, v, nxt, val
    raise ReplayMismatch("three-sum identity violated")


# -- pure-string reduction ---------------------------------------------------------


def selfloop_reduce(fhat: Signature, alpha) -> GadgetScript:
    """Contract an imbalanced support string down to a pure one.

    alpha must be a support string of fhat with unequal zero and one
    counts.  Disequality self-loops are chosen, lowest index pair first,
    so that the tracked entry never vanishes; each loop removes one
    majority and one minority position (or converts, when both loop ends
    sit on majority bits).  The result g has arity |#0 - #1| and nonzero
    value on the surviving pure string.
    """
    n = fhat.arity
    bits = _as_bits(alpha, n)
    idx = index_of(bits)
    if fhat.table[idx].is_zero():
        raise PreconditionError("string %r is not in the support" % (alpha,))
    ones = weight(idx)
    zeros = n - ones
    if zeros == ones:
        raise NoImbalancedSupport("string %r is balanced" % (alpha,))
    c = 0 if zeros > ones else 1
    steps = [("load", "f")]
    cur = fhat
    dis = disequality(fhat.backend, fhat.eps)
    sigma = list(bits)
    while any(b != c for b in sigma):
        u, v, sigma, _ = _pick_loop(cur, sigma, 1 - c)
        steps.append(("self_loop", u, v, "neq"))
        cur = cur.self_loop(u, v, dis)
    script = GadgetScript(steps, cur, "selfloop_reduce", {"f": fhat},
                          meta={"pure_bit": c, "start": "".join(map(str, bits))})
    return script.verify()


def extract_delta_power(fhat: Signature) -> GadgetScript:
    """Reduce a strictly one-sided signature to a scaled pin power.

    Needs eo_profile strictly above or strictly below balance.  Reducing
    the minimum-imbalance support string leaves nothing else alive: any
    surviving string would lift to a support string of fhat with smaller
    imbalance.  meta carries r (the power) and the scale.
    """
    prof = eo_profile(fhat)
    if prof == "EO>":
        c = 1
    elif prof == "EO<":
        c = 0
    else:
        raise NotStrictEO("profile is %s" % prof)
    n = fhat.arity
    best = None
    for idx in fhat.support():
        imb = abs(2 * weight(idx) - n)
        if best is None or imb < best[0]:
            best = (imb, idx)
    r, idx = best
    script = selfloop_reduce(fhat, idx)
    g = script.claimed
    target = (1 << r) - 1 if c else 0
    if g.arity != r or g.support() != [target]:
        raise ReplayMismatch("minimal reduction is not a pure pin power")
    out = GadgetScript(script.steps, g, "extract_delta_power",
                       script.base,
                       meta={"r": r, "pure_bit": c, "scale": g.table[target]})
    return out.verify()


# -- nonvanishing witness -----------------------------------------------------------


_WITNESS_PORT_CAP = 12


def nonvanishing_witness(f: Signature) -> Grid:
    """A closed grid over copies of f that evaluates to nonzero.

    Works in the flip world: find (or manufacture, by tensor powering) a
    balanced support string, contract it down to a balanced binary h, then
    either close h with one more disequality loop or mate two copies of the
    whole gadget.  Flip-world disequality edges are plain edges on the
    untransformed copies, so the output is an ordinary grid whose value is
    checked exactly before returning.
    """
    rep = is_vanishing(f)
    if rep.member:
        raise IsVanishing(rep.reason)
    n = f.arity
    if n == 0:
        g = Grid([f], [], ())
        # value of the empty product is the lone table entry
        if eval_holant(g).is_zero():
            raise ReplayMismatch("arity-0 witness evaluated to zero")
        return g
    fh = hat(f)
    balanced = [i for i in fh.support() if 2 * weight(i) == n]
    if balanced:
        copies = 1
        sigma = list(bits_of(balanced[0], n))
    else:
        above = [i for i in fh.support() if 2 * weight(i) > n]
        below = [i for i in fh.support() if 2 * weight(i) < n]
        if not above or not below:
            raise ReplayMismatch("one-sided profile slipped past the "
                                 "vanishing test")
        k = 2 * weight(above[0]) - n
        l = n - 2 * weight(below[0])
        # a copies of the heavy string and b of the light one balance out
        # whenever a*k == b*l; the gcd-reduced pair keeps the gadget small
        g = gcd(k, l)
        a, b = l // g, k // g
        copies = a + b
        if copies * n > _WITNESS_PORT_CAP:
            raise ArityTooLarge(
                "balancing power needs %d ports; brute-force witness cap "
                "is %d" % (copies * n, _WITNESS_PORT_CAP))
        sigma = list(bits_of(above[0], n)) * a + list(bits_of(below[0], n)) * b
    if copies * n > _WITNESS_PORT_CAP:
        raise ArityTooLarge(
            "witness needs %d ports; brute-force cap is %d" %
            (copies * n, _WITNESS_PORT_CAP))
    sigs = [f] * copies
    edges: list = []
    ports = [(vx, s) for vx in range(copies) for s in range(n)]
    cur = fh
    for _ in range(copies - 1):
        cur = cur.tensor(fh.with_fresh_vars())
    dis = disequality(f.backend, f.eps)
    while cur.arity > 2:
        u, v, sigma, _ = _pick_loop(cur, sigma, 1)
        edges.append((ports[u], ports[v]))
        cur = cur.self_loop(u, v, dis)
        del ports[v]
        del ports[u]
    a, b, c2, d = cur.table
    s = b + c2
    if not s.is_zero():
        edges.append((ports[0], ports[1]))
        grid = Grid(sigs, edges, ())
        z = eval_holant(grid)
        if not (z == s):
            raise ReplayMismatch("closed loop value drifted from b + c")
        return grid
    # b = -c != 0: mate two copies of the whole gadget
    m = copies
    sigs2 = sigs + sigs
    shift = [((v1 + m, s1), (v2 + m, s2)) for (v1, s1), (v2, s2) in edges]
    twin = [(vx + m, s0) for (vx, s0) in ports]
    crossed = (b * b) + (c2 * c2) + (a * d) + (a * d)
    parallel = (b * c2) + (b * c2) + (a * d) + (a * d)
    if not crossed.is_zero():
        hook = [(ports[0], twin[1]), (ports[1], twin[0])]
        want = crossed
    else:
        # (b - c)^2 = crossed - parallel, so both cannot vanish
        hook = [(ports[0], twin[0]), (ports[1], twin[1])]
        want = parallel
    grid = Grid(sigs2, edges + shift + hook, ())
    z = eval_holant(grid)
    if not (z == want):
        raise ReplayMismatch("mated instance value drifted")
    return grid


# -- decomposition dispatch ----------------------------------------------------------


_GE = ("empty", "EO=", "EO>", "EO>=")
_LE = ("empty", "EO=", "EO<", "EO<=")


def decomposition_route(F, f: Signature, g: Signature):
    """Decide how a tensor pair f, g interacts with a finite set F.

    If every flip-world profile of F plus the tensor f(x)g stays weakly on
    one side of the balanced slice, return EOBranch and let the
    orientation classifier take over.  Otherwise return the witnesses that
    make the occurrence-counting reduction work: scripts h0 and h1 hitting
    the two pure strings, plus, for each vanishing factor, a closed
    balancing grid with nonzero value.
    """
    F = list(F)
    fg = f.tensor(g.with_fresh_vars())
    sources = [fg] + F
    hats = [hat(s) for s in sources]
    profiles = tuple(eo_profile(h) for h in hats)
    if all(p in _GE for p in profiles):
        return EOBranch("EO>=", profiles)
    if all(p in _LE for p in profiles):
        return EOBranch("EO<=", profiles)
    below_src = above_src = None
    below_alpha = above_alpha = None
    for t, hh in enumerate(hats):
        for idx in hh.support():
            w2 = 2 * weight(idx)
            if w2 < hh.arity and below_src is None:
                below_src, below_alpha = t, idx
            elif w2 > hh.arity and above_src is None:
                above_src, above_alpha = t, idx
        if below_src is not None and above_src is not None:
            break
    if below_src is None or above_src is None:
        raise ReplayMismatch("mixed profiles without both strict strings")
    h0 = selfloop_reduce(hats[below_src], below_alpha)
    h0.meta["source"] = below_src
    h1 = selfloop_reduce(hats[above_src], above_alpha)
    h1.meta["source"] = above_src
    balance_f = balance_g = None
    if is_vanishing(f).member:
        balance_f = _delta_balance_grid(f, sources[below_src], h0,
                                        sources[above_src], h1)
    if is_vanishing(g).member:
        balance_g = _delta_balance_grid(g, sources[below_src], h0,
                                        sources[above_src], h1)
    return ReductionWitness(h0, h1, below_src, above_src,
                            balance_f, balance_g, profiles)


def _script_block(world_sig: Signature, script: GadgetScript,
                  sigs: list, edges: list) -> list:
    """Instantiate a loops-only script as grid vertices; return open ports.

    The script was built on the flip-world image, so its disequality loops
    come out as plain edges on the untransformed vertex.
    """
    v = len(sigs)
    sigs.append(world_sig)
    ports = [(v, s) for s in range(world_sig.arity)]
    for step in script.steps:
        if step[0] == "load":
            continue
        if step[0] != "self_loop" or step[3] != "neq":
            raise GridShapeError("block instantiation needs a loops-only "
                                 "script")
        i, j = step[1], step[2]
        edges.append((ports[i], ports[j]))
        for t in sorted((i, j), reverse=True):
            del ports[t]
    return ports


def _delta_balance_grid(v_sig: Signature, below_world: Signature,
                        h0: GadgetScript, above_world: Signature,
                        h1: GadgetScript) -> Grid:
    """Closed nonzero instance pairing pin powers of a vanishing factor
    against the opposite pure-string gadget."""
    fh = hat(v_sig)
    dp = extract_delta_power(fh)
    r = dp.meta["r"]
    lam = dp.meta["scale"]
    if dp.meta["pure_bit"] == 0:
        partner_world, partner = above_world, h1
    else:
        partner_world, partner = below_world, h0
    d = partner.claimed.arity
    mu = partner.claimed.table[-1 if dp.meta["pure_bit"] == 0 else 0]
    sigs: list = []
    edges: list = []
    delta_ports = [_script_block(v_sig, dp, sigs, edges) for _ in range(d)]
    gadget_ports = [_script_block(partner_world, partner, sigs, edges)
                    for _ in range(r)]
    for i in range(d):
        for j in range(r):
            edges.append((delta_ports[i][j], gadget_ports[j][i]))
    grid = Grid(sigs, edges, ())
    want = _sc.one(v_sig.backend, v_sig.eps)
    for _ in range(d):
        want = want * lam
    for _ in range(r):
        want = want * mu
    z = eval_holant(grid)
    if not (z == want):
        raise ReplayMismatch("balancing instance value drifted")
    return grid


# -- odd arity induction ---------------------------------------------------------------


def odd_arity_route(f: Signature):
    """One induction step of the odd-arity structure argument.

    Unary: either the flip-world image is a pin (HatPin) or an orthogonal
    matrix sends f to a multiple of (1, 0) (OrthoCase).  Higher odd arity:
    return the first non-vanishing plain self-loop as a DescendStep; when
    every loop vanishes the flip-world image is supported on the two pure
    strings only, giving EqualityCase or a pin power.
    """
    if f.is_zero():
        raise TrivialSignature("the zero signature has no route")
    n = f.arity
    if n % 2 == 0:
        raise PreconditionError("arity must be odd, got %d" % n)
    if n == 1:
        a, b = f.table
        iu = _unit_i(f)
        if b == a * iu:
            return HatPin(0)
        if a == b * iu:
            return HatPin(1)
        return OrthoCase(ortho_from_unary(a, b, f.backend, f.eps))
    for i in range(n):
        for j in range(i + 1, n):
            fp = f.self_loop(i, j)
            if not fp.is_zero():
                script = GadgetScript(
                    [("load", "f"), ("self_loop", i, j, "eq")], fp,
                    "odd_arity_route", {"f": f}, meta={"pair": (i, j)})
                return DescendStep(script.verify())
    fh = hat(f)
    interior = [i for i in fh.support() if 0 < i < (1 << n) - 1]
    if interior:
        raise ReplayMismatch("all loops vanish but the flip-world support "
                             "leaves the pure strings")
    a = fh.table[0]
    b = fh.table[-1]
    if b.is_zero():
        return HatPin(0)
    if a.is_zero():
        return HatPin(1)
    return EqualityCase(a, b, n)


def _unit_i(sig: Signature):
    if sig.backend == "approx":
        return Approx(1j, sig.eps)
    return _sc.I


# -- interpolation iterates --------------------------------------------------------------


def interpolation_iterates(h: Signature, n: int) -> list:
    """Unary iterates [k*lam + 1, 1] for k = 0..n from a triangular binary.

    h must look like (lam 1; 1 0) up to scale: corner zero, symmetric
    nonzero off-diagonal.  Each iterate is the previous one fed through h
    with a flip, rescaled; the chain is recomputed here and compared entry
    for entry.  Consecutive-difference determinants make the list pairwise
    linearly independent as long as lam is nonzero.
    """
    if h.arity != 2:
        raise ArityMismatch("binary signature required")
    h00, h01, h10, h11 = h.table
    if not h11.is_zero():
        raise PreconditionError("corner entry must vanish")
    if h01.is_zero() or not (h01 == h10):
        raise PreconditionError("off-diagonal entries must match and be "
                                "nonzero")
    lam = h00 / h01
    if lam.is_zero():
        raise ZeroLambda("diagonal parameter is zero")
    one = h.one_scalar()
    out = []
    val = one
    for k in range(n + 1):
        out.append(unary(val, one, h.backend, h.eps))
        val = val + lam
    # replay the chain: u_{k+1} = h . flip(u_k), rescaled by the off-diagonal
    inv = h01.inverse()
    for k in range(n):
        u = out[k]
        flipped = unary(u.table[1], u.table[0], h.backend, h.eps)
        nxt = h.compose(flipped, 1).scale(inv)
        if not (nxt == out[k + 1]):
            raise ReplayMismatch("iterate chain drifted at step %d" % k)
    for s in range(len(out)):
        for t in range(s + 1, len(out)):
            det = out[s].table[0] * out[t].table[1] - \
                out[t].table[0] * out[s].table[1]
            if det.is_zero():
                raise ReplayMismatch("iterates %d and %d are dependent" %
                                     (s, t))
    return out


# -- support gap reduction ---------------------------------------------------------------


def reduce_arity_gap(fhat: Signature, alpha, beta) -> GadgetScript:
    """Shrink arity while keeping two support strings and their weight gap.

    Three branches: a position where the strings agree is pinned; for
    complementary strings, a two-pin overlap is tried on either side, and
    when both overlap strings miss the support a disequality self-loop
    keeps both images alive.  meta records the branch and both images.
    """
    n = fhat.arity
    if n < 3:
        raise PreconditionError("arity >= 3 required, got %d" % n)
    ab = _as_bits(alpha, n)
    bb = _as_bits(beta, n)
    ia, ib = index_of(ab), index_of(bb)
    for idx, name in ((ia, "alpha"), (ib, "beta")):
        if fhat.table[idx].is_zero():
            raise PreconditionError("%s is not in the support" % name)
    pure = (0, (1 << n) - 1)
    if ia in pure and ib in pure:
        raise BothPureStrings("both strings are pure")
    gap = weight(ia) - weight(ib)

    def strip(bits, i, j=None):
        drop = {i} if j is None else {i, j}
        return tuple(b for t, b in enumerate(bits) if t not in drop)

    agree = [i for i in range(n) if ab[i] == bb[i]]
    if agree:
        i = agree[0]
        steps = [("load", "f"), ("pin", i, ab[i])]
        red = fhat.pin(i, ab[i])
        img_a, img_b = strip(ab, i), strip(bb, i)
        branch = "pin"
    else:
        # beta is the complement of alpha
        i = min(t for t in range(n) if ab[t] == 0)
        j = min(t for t in range(n) if ab[t] == 1)
        sb = list(bb)
        sb[i], sb[j] = 0, 1
        sb2 = list(ab)
        sb2[i], sb2[j] = 1, 0

        def two_pins(bit_i, bit_j):
            # pin the lower position first so the second index stays valid
            (lo, blo), (hi, bhi) = sorted(((i, bit_i), (j, bit_j)))
            plan = [("load", "f"), ("pin", lo, blo), ("pin", hi - 1, bhi)]
            return plan, fhat.pin(lo, blo).pin(hi - 1, bhi)

        if not fhat.table[index_of(sb)].is_zero():
            steps, red = two_pins(0, 1)
            img_a, img_b = strip(ab, i, j), strip(tuple(sb), i, j)
            branch = "pin01"
        elif not fhat.table[index_of(sb2)].is_zero():
            steps, red = two_pins(1, 0)
            img_a, img_b = strip(tuple(sb2), i, j), strip(bb, i, j)
            branch = "pin10"
        else:
            # both overlap strings dead: the loop sum cannot cancel
            steps = [("load", "f"), ("self_loop", i, j, "neq")]
            red = fhat.self_loop(i, j, disequality(fhat.backend, fhat.eps))
            img_a, img_b = strip(ab, i, j), strip(bb, i, j)
            branch = "loop"
    for img, name in ((img_a, "alpha"), (img_b, "beta")):
        if red.table[index_of(img)].is_zero():
            raise ReplayMismatch("%s image fell out of the support" % name)
    if (weight(index_of(img_a)) - weight(index_of(img_b))) != gap:
        raise ReplayMismatch("weight gap drifted")
    script = GadgetScript(steps, red, "reduce_arity_gap", {"f": fhat},
                          meta={"branch": branch,
                                "alpha_image": "".join(map(str, img_a)),
                                "beta_image": "".join(map(str, img_b)),
                                "gap": gap})
    return script.verify()


# -- ternary entanglement ---------------------------------------------------------------


def cayley_hyperdeterminant(g: Signature):
    """The degree-4 invariant separating the two genuine ternary orbits."""
    if g.arity != 3:
        raise NotTernary("arity %d" % g.arity)
    t = g.table
    sq = (t[0] * t[0] * t[7] * t[7] + t[1] * t[1] * t[6] * t[6] +
          t[2] * t[2] * t[5] * t[5] + t[3] * t[3] * t[4] * t[4])
    pair = (t[0] * t[1] * t[6] * t[7] + t[0] * t[2] * t[5] * t[7] +
            t[0] * t[3] * t[4] * t[7] + t[1] * t[2] * t[5] * t[6] +
            t[1] * t[3] * t[4] * t[6] + t[2] * t[3] * t[4] * t[5])
    quad = t[0] * t[3] * t[5] * t[6] + t[1] * t[2] * t[4] * t[7]
    return sq - (pair + pair) + (quad + quad + quad + quad)


def entanglement_class(g: Signature) -> str:
    """"GHZ" when the hyperdeterminant is nonzero, else "W".

    Only meaningful for irreducible ternaries; product states also have a
    vanishing hyperdeterminant, so reducible input is rejected rather than
    silently labeled W.
    """
    if g.arity != 3:
        raise NotTernary("arity %d" % g.arity)
    if not is_irreducible(g):
        raise Reducible("signature splits as a tensor product")
    return "W" if cayley_hyperdeterminant(g).is_zero() else "GHZ"


# -- symmetric GHZ normal form -----------------------------------------------------------


_EMB = (1, 5, 7, 11)


def _reconstruct(targets: dict):
    """Exact field element matching prescribed embedding images, or None.

    Solving the 8x8 real linear system pins the rational coordinates.  The
    rounding step is heuristic; callers must verify the algebraic identity
    exactly before trusting the result."""
    rows = []
    rhs = []
    for k in _EMB:
        z = cmath.exp(2j * cmath.pi * k / 24)
        pw = [z ** j for j in range(8)]
        rows.append([p.real for p in pw])
        rhs.append(targets[k].real)
        rows.append([p.imag for p in pw])
        rhs.append(targets[k].imag)
    sol = np.linalg.solve(np.array(rows), np.array(rhs))
    coeffs = []
    for v in sol:
        fr = Fraction(float(v)).limit_denominator(10 ** 6)
        if abs(float(fr) - float(v)) > 1e-6:
            return None
        coeffs.append(fr)
    acc = Cyclo.from_fraction(coeffs[0])
    for j in range(1, 8):
        if coeffs[j]:
            acc = acc + Cyclo.from_fraction(coeffs[j]) * Cyclo.zeta(j)
    return acc


def _field_sqrt(x):
    """A square root of x inside the field, or None."""
    if x.is_zero():
        return Cyclo.from_int(0)
    base = {k: cmath.sqrt(x.embed(k)) for k in _EMB}
    for signs in product((1, -1), repeat=len(_EMB) - 1):
        targets = {_EMB[0]: base[_EMB[0]]}
        for s, k in zip(signs, _EMB[1:]):
            targets[k] = s * base[k]
        cand = _reconstruct(targets)
        if cand is not None and cand * cand == x:
            return cand
    return None


def _field_cbrt(x):
    """A cube root of x inside the field, or None.

    The field contains the cube roots of unity, so the first embedding's
    branch can be fixed without losing solutions."""
    if x.is_zero():
        return Cyclo.from_int(0)
    rot = cmath.exp(2j * cmath.pi / 3)

    def croot(z, m):
        mag = abs(z) ** (1.0 / 3.0)
        return mag * cmath.exp(1j * cmath.phase(z) / 3) * rot ** m

    base = {k: x.embed(k) for k in _EMB}
    for branches in product((0, 1, 2), repeat=len(_EMB) - 1):
        targets = {_EMB[0]: croot(base[_EMB[0]], 0)}
        for m, k in zip(branches, _EMB[1:]):
            targets[k] = croot(base[k], m)
        cand = _reconstruct(targets)
        if cand is not None and cand * cand * cand == x:
            return cand
    return None


def _approx_sqrt(x):
    return Approx(cmath.sqrt(x.to_complex()), x.eps)


def _approx_cbrt(x):
    z = x.to_complex()
    if z == 0:
        return Approx(0j, x.eps)
    mag = abs(z) ** (1.0 / 3.0)
    return Approx(mag * cmath.exp(1j * cmath.phase(z) / 3), x.eps)


def ghz_normal_form(h: Signature) -> Mat2:
    """Matrix M with M applied to the three-way equality giving h.

    Solves the rank-2 power-sum recurrence on the symmetric values
    [h0..h3]: the two mixing directions are the roots of the quadratic
    pencil built from the Hankel minors, with one direction at infinity
    when the leading minor vanishes.  Cube roots scale the columns.  On
    the exact backend the roots are reconstructed inside the field from
    their embedding images; failure to land in the field raises rather
    than silently approximating.
    """
    if h.arity != 3:
        raise NotTernary("arity %d" % h.arity)
    vals = h.to_symmetric()
    h0, h1, h2, h3 = vals
    q2 = h0 * h2 - h1 * h1
    q1 = h1 * h2 - h0 * h3
    q0 = h1 * h3 - h2 * h2
    four_q20 = (q2 * q0) + (q2 * q0) + (q2 * q0) + (q2 * q0)
    disc = q1 * q1 - four_q20
    if disc.is_zero():
        raise NotGHZ("repeated mixing direction")
    exact = h.backend == "cyclo24"
    sqrt_fn = _field_sqrt if exact else _approx_sqrt
    cbrt_fn = _field_cbrt if exact else _approx_cbrt
    zero = _sc.zero(h.backend, h.eps)
    if not q2.is_zero():
        s = sqrt_fn(disc)
        if s is None:
            raise InexactMatrix("mixing direction needs a square root "
                                "outside the field")
        inv = (q2 + q2).inverse()
        t1 = (s - q1) * inv
        t2 = (zero - s - q1) * inv
        den = t1 - t2
        s1 = (h1 - h0 * t2) / den
        s2 = h0 - s1
        if s1.is_zero() or s2.is_zero():
            raise NotGHZ("rank-1 moment sequence")
        u1 = cbrt_fn(s1)
        u2 = cbrt_fn(s2)
        if u1 is None or u2 is None:
            raise InexactMatrix("column scale needs a cube root outside "
                                "the field")
        m = Mat2(u1, u2, u1 * t1, u2 * t2, h.backend, h.eps)
    else:
        if q1.is_zero():
            raise NotGHZ("pencil collapsed")
        # one direction at infinity; h0 = 0 would force q1 = 0 too
        t0 = h1 / h0
        y3 = h3 - h0 * t0 * t0 * t0
        if y3.is_zero():
            raise NotGHZ("single cube")
        u1 = cbrt_fn(h0)
        y2 = cbrt_fn(y3)
        if u1 is None or y2 is None:
            raise InexactMatrix("column scale needs a cube root outside "
                                "the field")
        m = Mat2(u1, zero, u1 * t0, y2, h.backend, h.eps)
    img = apply_holographic(equality(3, h.backend, h.eps), m)
    if not (img == h):
        raise ReplayMismatch("normal form failed to replay")
    return m


# -- symmetrization search ----------------------------------------------------------------


def _pair_matchings(items):
    if not items:
        yield ()
        return
    a = items[0]
    for t in range(1, len(items)):
        rest = items[1:t] + items[t + 1:]
        for tail in _pair_matchings(rest):
            yield ((a, items[t]),) + tail


def symmetrize_search(f: Signature, budget: int = 3,
                      unaries=()) -> GadgetScript | None:
    """Bounded search for a symmetric GHZ-type gadget over copies of f.

    Enumerates gadgets with at most budget vertices (copies of f plus
    optional unary plugs), wiring the spare ports into plain self-loops,
    in a fixed canonical order; the first hit is verified and returned.
    Exhaustion returns None: the search is incomplete by design and says
    nothing about non-existence.
    """
    if f.arity != 3:
        raise NotTernary("arity %d" % f.arity)
    if not is_irreducible(f):
        raise Reducible("signature splits as a tensor product")
    unaries = list(unaries)
    base = {"f": f}
    for t, u in enumerate(unaries):
        if u.arity != 1:
            raise ArityMismatch("plug %d is not unary" % t)
        base["u%d" % t] = u
    for total in range(1, budget + 1):
        for k in range(1, total + 1):
            p = total - k
            if p and not unaries:
                continue
            ports = 3 * k
            open_after = ports - p
            if open_after < 3 or (open_after - 3) % 2:
                continue
            for plug_pos in combinations(range(ports), p):
                for plug_kind in product(range(len(unaries)), repeat=p):
                    rem = [t for t in range(ports) if t not in plug_pos]
                    for ext in combinations(rem, 3):
                        inner = [t for t in rem if t not in ext]
                        for match in _pair_matchings(inner):
                            script = _wire_script(
                                f, base, k, plug_pos, plug_kind, match)
                            cand = script.replay_signature()
                            if cand.is_zero() or not cand.is_symmetric():
                                continue
                            v = cand.to_symmetric()
                            d = _sym_disc(v)
                            if d.is_zero():
                                continue
                            script.claimed = cand
                            return script.verify()
    return None


def _sym_disc(vals):
    h0, h1, h2, h3 = vals
    q2 = h0 * h2 - h1 * h1
    q1 = h1 * h2 - h0 * h3
    q0 = h1 * h3 - h2 * h2
    return q1 * q1 - ((q2 * q0) + (q2 * q0) + (q2 * q0) + (q2 * q0))


def _wire_script(f, base, k, plug_pos, plug_kind, match) -> GadgetScript:
    """Assemble the steps for one wiring choice; claimed is filled by the
    caller after the first replay."""
    steps = [("load", "f")]
    for _ in range(k - 1):
        steps.append(("load", "f"))
        steps.append(("tensor",))
    alive = list(range(3 * k))
    for t, (pos, kind) in enumerate(zip(plug_pos, plug_kind)):
        steps.append(("load", "u%d" % kind))
        steps.append(("tensor",))
        alive.append(3 * k + t)
    joins = [(pos, 3 * k + t) for t, pos in enumerate(plug_pos)]
    joins += [tuple(pair) for pair in match]
    for a, b in joins:
        i, j = alive.index(a), alive.index(b)
        steps.append(("self_loop", i, j, "eq"))
        alive.remove(a)
        alive.remove(b)
    placeholder = base["f"]
    return GadgetScript(steps, placeholder, "symmetrize_search", base,
                        meta={"copies": k, "plugs": list(plug_pos)})
