"""Membership tests for the tractable signature families.

Every test returns a ``ClassReport`` (truthy iff member) carrying a
machine-checkable witness where one exists.  The zero signature is a
member of every family by convention: it can be dropped from any instance
without changing anything, so reports for it say so and carry no witness.

Families implemented here:

* ``in_A`` -- affine-phase signatures: lambda * indicator(affine support)
  * i^e(x), with e a quadratic whose cross terms are even (values in Z4).
* ``in_E`` -- support inside one complementary pair {beta, ~beta}.
* ``in_P`` -- every tensor factor is in_E (product-of-pair-supports).
* ``in_M`` / ``in_XM`` -- support weight <= 1 (resp. >= arity-1).
* closures ``in_T_closure`` (factors of arity <= 2), ``in_M_closure``,
  ``in_XM_closure``, ``in_R_closure`` (pins, one-sided chains).
* ``in_L_local_affine`` -- every support point, used as a pattern of
  eighth-root phase twists, leaves the signature affine.
* ``in_A_d_r`` -- affine after undoing r steps of the order-4d phase.
* orientation-world tools: ``eo_profile``, ``exists3_class``,
  ``eo_pairing_class``, ``is_rebalancing``, ``restrict_to_eo``,
  ``is_single_weighted`` / ``to_eo_padding``.
* ``is_vanishing`` -- the flip-world support sits strictly above or
  strictly below the balanced slice, so every closed grid built from the
  signature evaluates to zero.
* ``transformable_search`` -- scan a registry of basis changes M for one
  with M^{-1}-transformed F inside a target family.  Exhaustion is
  information, never a refutation.
"""

from __future__ import annotations

from itertools import combinations_with_replacement, product

from .errors import (
    ArityTooLarge, NotSingleWeighted, NotSymmetric, OddDegree, ParseError,
    UnsupportedD,
)
from . import scalar as _sc
from .scalar import Cyclo, DEFAULT_EPS
from .signature import Signature, bits_of, weight
from .factorization import upf
from .transforms import (
    Mat2, apply_holographic, apply_slocc, identity, matrix_kinv,
    named_matrix, phase_matrix,
)


class ClassReport:
    """Outcome of a membership test, with an optional witness."""

    __slots__ = ("cls", "member", "reason", "witness")

    def __init__(self, cls: str, member: bool, reason: str = "",
                 witness: dict | None = None):
        self.cls = cls
        self.member = member
        self.reason = reason
        self.witness = witness

    def __bool__(self):
        return self.member

    def __repr__(self):
        return "ClassReport(%s, %s%s)" % (
            self.cls, "member" if self.member else "non-member",
            ", " + self.reason if self.reason else "")

    def to_json(self) -> dict:
        return {"class": self.cls, "member": self.member,
                "reason": self.reason, "witness": self.witness}


def _zero_report(cls: str) -> ClassReport:
    return ClassReport(cls, True, "zero signature (member by convention)")


def _bitstr(idx: int, n: int) -> str:
    return format(idx, "0%db" % n) if n else ""


# -- affine-phase family -------------------------------------------------------


def affine_support(sig: Signature):
    """If the support is an affine subspace, return (base, basis) as bit
    indices; otherwise None.  The zero signature returns (None, None)."""
    supp = sig.support()
    if not supp:
        return (None, None)
    base = supp[0]
    by_lead = {}
    for s in supp[1:]:
        v = s ^ base
        while v:
            lead = v.bit_length() - 1
            if lead in by_lead:
                v ^= by_lead[lead]
            else:
                by_lead[lead] = v
                break
    rank = len(by_lead)
    # every difference vector reduces into the basis, so the support is
    # affine iff its size matches the span size
    if len(supp) != (1 << rank):
        return None
    return (base, sorted(by_lead.values()))


def _affine_violation(sig: Signature) -> dict:
    """A point of the difference span missing from the support.

    The walk is capped; very large spans fall back to size bookkeeping,
    which still pins down the failure."""
    supp = sig.support()
    base = supp[0]
    by_lead = {}
    for s in supp[1:]:
        v = s ^ base
        while v:
            lead = v.bit_length() - 1
            if lead in by_lead:
                v ^= by_lead[lead]
            else:
                by_lead[lead] = v
                break
    basis = sorted(by_lead.values())
    n = sig.arity
    have = set(supp)
    if len(basis) <= 16:
        for tmask in range(1 << len(basis)):
            idx = base
            for j, b in enumerate(basis):
                if (tmask >> j) & 1:
                    idx ^= b
            if idx not in have:
                return {"missing": _bitstr(idx, n),
                        "span_size": 1 << len(basis),
                        "support_size": len(supp)}
    return {"span_size": 1 << len(basis), "support_size": len(supp)}


def in_A(sig: Signature) -> ClassReport:
    """Affine support with phases i^e(x), e quadratic with even cross terms."""
    cls = "A"
    if sig.is_zero():
        return _zero_report(cls)
    aff = affine_support(sig)
    if aff is None:
        return ClassReport(cls, False, "support is not an affine subspace",
                           {"counterexample": _affine_violation(sig)})
    base, basis = aff
    n = sig.arity
    f0 = sig.table[base]
    ipows = [f0, f0, f0, f0]
    i_val = _sc.I if sig.backend == "cyclo24" else \
        _sc.Approx(1j, sig.eps)
    for k in range(1, 4):
        ipows[k] = ipows[k - 1] * i_val
    r = len(basis)
    # phase exponent on subspace coordinates t in {0,1}^r
    e = {}
    for tmask in range(1 << r):
        idx = base
        for j in range(r):
            if (tmask >> j) & 1:
                idx ^= basis[j]
        v = sig.table[idx]
        for k in range(4):
            if v == ipows[k]:
                e[tmask] = k
                break
        else:
            return ClassReport(
                cls, False, "entry ratio is not a power of i",
                {"counterexample": {"entry": _bitstr(idx, n),
                                    "value": _sc.format_literal(v),
                                    "base": _bitstr(base, n),
                                    "base_value": _sc.format_literal(f0)}})
    c = e[0]
    lin = [(e[1 << j] - c) % 4 for j in range(r)]
    cross = {}
    for j in range(r):
        for k in range(j + 1, r):
            q = (e[(1 << j) | (1 << k)] - lin[j] - lin[k] - c) % 4
            if q not in (0, 2):
                return ClassReport(
                    cls, False, "odd cross term in the phase exponent",
                    {"counterexample": {
                        "directions": [_bitstr(basis[j], n),
                                       _bitstr(basis[k], n)],
                        "cross_exponent": q}})
            cross[(j, k)] = q
    for tmask in range(1 << r):
        val = c
        for j in range(r):
            if (tmask >> j) & 1:
                val += lin[j]
        for (j, k), q in cross.items():
            if (tmask >> j) & 1 and (tmask >> k) & 1:
                val += q
        if val % 4 != e[tmask]:
            idx = base
            for j in range(r):
                if (tmask >> j) & 1:
                    idx ^= basis[j]
            return ClassReport(
                cls, False, "phase exponent is not quadratic",
                {"counterexample": {"entry": _bitstr(idx, n),
                                    "expected_exponent": val % 4,
                                    "observed_exponent": e[tmask]}})
    witness = {
        "base": _bitstr(base, n),
        "basis": [_bitstr(b, n) for b in basis],
        "scale": _sc.format_literal(f0),
        "const": c,
        "linear": lin,
        "cross": [[j, k, q] for (j, k), q in sorted(cross.items())],
    }
    return ClassReport(cls, True, "affine support with quadratic phase",
                       witness)


def verify_affine_witness(sig: Signature, witness: dict) -> bool:
    """Replay an in_A witness against the table, entry by entry."""
    n = sig.arity
    base = int(witness["base"], 2) if witness["base"] else 0
    basis = [int(b, 2) for b in witness["basis"]]
    scale = _sc.parse_literal(witness["scale"], sig.backend, sig.eps)
    i_val = _sc.I if sig.backend == "cyclo24" else _sc.Approx(1j, sig.eps)
    ipow = [sig.one_scalar()]
    for _ in range(3):
        ipow.append(ipow[-1] * i_val)
    seen = set()
    for tmask in range(1 << len(basis)):
        idx = base
        val = witness["const"]
        for j, b in enumerate(basis):
            if (tmask >> j) & 1:
                idx ^= b
                val += witness["linear"][j]
        for j, k, q in witness["cross"]:
            if (tmask >> j) & 1 and (tmask >> k) & 1:
                val += q
        if not (sig.table[idx] == scale * ipow[val % 4]):
            return False
        seen.add(idx)
    for idx in range(1 << n):
        if idx not in seen and not sig.table[idx].is_zero():
            return False
    return True


# -- pair-support and low-weight families -------------------------------------


def in_E(sig: Signature) -> ClassReport:
    """Support inside a single complementary pair {beta, complement}."""
    cls = "E"
    if sig.is_zero():
        return _zero_report(cls)
    supp = sig.support()
    full = (1 << sig.arity) - 1
    if len(supp) == 1 or (len(supp) == 2 and supp[0] ^ supp[1] == full):
        beta = supp[0]
        return ClassReport(cls, True, "pair support", {
            "pair": [_bitstr(beta, sig.arity),
                     _bitstr(beta ^ full, sig.arity)]})
    return ClassReport(cls, False,
                       "support is not within a complementary pair")


def in_M(sig: Signature) -> ClassReport:
    """Support weight at most 1."""
    cls = "M"
    if sig.is_zero():
        return _zero_report(cls)
    bad = [i for i in sig.support() if weight(i) > 1]
    if bad:
        return ClassReport(cls, False, "support point of weight %d"
                           % weight(bad[0]))
    return ClassReport(cls, True, "all support weights <= 1")


def in_XM(sig: Signature) -> ClassReport:
    """Support weight at least arity - 1 (the flip of in_M)."""
    cls = "XM"
    if sig.is_zero():
        return _zero_report(cls)
    bad = [i for i in sig.support() if weight(i) < sig.arity - 1]
    if bad:
        return ClassReport(cls, False, "support point of weight %d"
                           % weight(bad[0]))
    return ClassReport(cls, True, "all support weights >= arity-1")


def _factor_closure(sig: Signature, cls: str, factor_test,
                    describe: str) -> ClassReport:
    if sig.is_zero():
        return _zero_report(cls)
    form = upf(sig)
    blocks = []
    for positions, fac in form.factors:
        ok, tag = factor_test(fac)
        if not ok:
            return ClassReport(cls, False, "factor on variables %r %s" %
                               (list(positions), describe))
        blocks.append({"positions": list(positions), "tag": tag})
    return ClassReport(cls, True, "all %d factors admissible" %
                       len(form.factors), {"factors": blocks})


def in_P(sig: Signature) -> ClassReport:
    """Every tensor factor has pair support."""
    return _factor_closure(
        sig, "P", lambda f: (bool(in_E(f)), "pair"),
        "has support outside a complementary pair")


def in_T_closure(sig: Signature) -> ClassReport:
    """Tensor product of signatures of arity at most 2."""
    return _factor_closure(
        sig, "T", lambda f: (f.arity <= 2, "arity<=2"),
        "has arity above 2")


def in_M_closure(sig: Signature) -> ClassReport:
    return _factor_closure(
        sig, "M-closure", lambda f: (bool(in_M(f)), "weight<=1"),
        "has a support point of weight above 1")


def in_XM_closure(sig: Signature) -> ClassReport:
    return _factor_closure(
        sig, "XM-closure", lambda f: (bool(in_XM(f)), "weight>=n-1"),
        "has a support point of weight below arity-1")


def _chain_factor(fac: Signature):
    """Pin-or-chain test for one irreducible factor.

    Admissible shapes (up to scalar): the 0-pin [1, 0]; or the symmetric
    signature of arity m with weight-profile [a, b, 0, ..., 0], b nonzero
    and a = -(m - 2) * b.
    """
    m = fac.arity
    supp_w = {weight(i) for i in fac.support()}
    if m == 1 and supp_w == {0}:
        return True, "pin0"
    if not supp_w <= {0, 1}:
        return False, None
    try:
        vals = fac.to_symmetric()
    except NotSymmetric:
        return False, None
    a, b = vals[0], vals[1]
    if b.is_zero():
        return False, None
    target = b * _sc.from_int(-(m - 2), fac.backend, fac.eps)
    if not (a == target):
        return False, None
    return True, "chain(k=%d)" % (m - 2)


def in_R_closure(sig: Signature) -> ClassReport:
    """Tensor products of 0-pins and one-sided chain signatures."""
    return _factor_closure(
        sig, "R-closure", _chain_factor,
        "is neither a 0-pin nor a chain signature")


# -- local-affine and phased-affine families -----------------------------------


def in_L_local_affine(sig: Signature) -> ClassReport:
    """Each support point, applied as a diag(1, eighth-root) twist pattern,
    must leave the signature in the affine-phase family."""
    cls = "L"
    if sig.is_zero():
        return _zero_report(cls)
    t2 = phase_matrix(2, sig.backend, sig.eps)
    ident = identity(sig.backend, sig.eps)
    n = sig.arity
    for idx in sig.support():
        pattern = bits_of(idx, n)
        mats = [t2 if b else ident for b in pattern]
        rep = in_A(apply_slocc(sig, mats))
        if not rep:
            return ClassReport(cls, False,
                               "twist by support point %s is not affine"
                               % _bitstr(idx, n))
    return ClassReport(cls, True,
                       "all support twists stay affine")


def in_A_d_r(sig: Signature, d: int, r: int) -> ClassReport:
    """Affine after undoing r steps of the order-4d phase on every variable."""
    cls = "A_%d^%d" % (d, r)
    if d < 1:
        raise UnsupportedD("phase order must be positive")
    if sig.is_zero():
        return _zero_report(cls)
    td = phase_matrix(d, sig.backend, sig.eps)
    rep = in_A(apply_holographic(sig, td.power(-r)))
    return ClassReport(cls, rep.member,
                       "undo %d phase steps: %s" % (r, rep.reason),
                       rep.witness)


# -- orientation-world structure ------------------------------------------------


def eo_profile(sig: Signature) -> str:
    """Where the support sits relative to the balanced slice.

    Labels: "empty", "EO=", "EO>", "EO<", "EO>=", "EO<=", "mixed".
    Balanced means Hamming weight exactly arity/2.
    """
    supp = sig.support()
    if not supp:
        return "empty"
    n = sig.arity
    above = below = equal = False
    for i in supp:
        w2 = 2 * weight(i)
        if w2 > n:
            above = True
        elif w2 < n:
            below = True
        else:
            equal = True
    if above and below:
        return "mixed"
    if above:
        return "EO>=" if equal else "EO>"
    if below:
        return "EO<=" if equal else "EO<"
    return "EO="


def exists3_class(sig: Signature) -> dict:
    """Triple-sum escape flags for a balanced-support signature.

    Over all unordered triples (with repetition) of support points, where
    does delta = alpha ^ beta ^ gamma land?

    * escape_eq: delta balanced but not in the support,
    * escape_up: delta strictly above the balanced slice,
    * escape_down: strictly below.

    closed_up  = no escape_eq and no escape_down;
    closed_down = no escape_eq and no escape_up.
    The zero signature raises no flags and is closed both ways.
    """
    supp = sig.support()
    n = sig.arity
    sset = set(supp)
    flags = {"escape_eq": False, "escape_up": False, "escape_down": False}
    for a, b, c in combinations_with_replacement(supp, 3):
        delta = a ^ b ^ c
        w2 = 2 * weight(delta)
        if w2 > n:
            flags["escape_up"] = True
        elif w2 < n:
            flags["escape_down"] = True
        elif delta not in sset:
            flags["escape_eq"] = True
    flags["closed_up"] = not flags["escape_eq"] and not flags["escape_down"]
    flags["closed_down"] = not flags["escape_eq"] and not flags["escape_up"]
    return flags


def all_pairings(n: int):
    """Perfect pairings of range(n), (n-1)!! of them."""
    def rec(elems):
        if not elems:
            yield []
            return
        first = elems[0]
        for t in range(1, len(elems)):
            rest = elems[1:t] + elems[t + 1:]
            for tail in rec(rest):
                yield [(first, elems[t])] + tail
    yield from rec(list(range(n)))


def pairing_restriction(sig: Signature, pairing) -> Signature:
    """Zero out entries where any designated pair takes equal values."""
    n = sig.arity
    zero = sig.zero_scalar()
    table = []
    for idx in range(1 << n):
        bits = bits_of(idx, n)
        if any(bits[i] == bits[j] for i, j in pairing):
            table.append(zero)
        else:
            table.append(sig.table[idx])
    return Signature(table, sig.vars)


def eo_pairing_class(sig: Signature, family: str = "A") -> ClassReport:
    """For every perfect pairing of the variables, the restriction of the
    signature to opposite-valued pairs must lie in the given family.

    Families: "A" (affine-phase) or "P" (product of pair supports).  The
    scan covers all (arity-1)!! pairings and is capped at arity 12.
    """
    cls = "EO-pairing[%s]" % family
    if sig.is_zero():
        return _zero_report(cls)
    n = sig.arity
    if n % 2:
        raise OddDegree("perfect pairings need even arity, got %d" % n)
    if n > 12:
        raise ArityTooLarge("pairing scan capped at arity 12, got %d" % n)
    count = 0
    for pr in all_pairings(n):
        count += 1
        rest = pairing_restriction(sig, pr)
        if rest.is_zero():
            continue
        if not class_membership(rest, family):
            return ClassReport(cls, False,
                               "restriction to pairing %r is outside %s"
                               % (pr, family), {"pairing": [list(p) for p in pr]})
    return ClassReport(cls, True,
                       "all %d pairing restrictions lie in %s"
                       % (count, family))


_REBALANCE_MEMO: dict = {}


def is_rebalancing(sig: Signature, c: int = 0) -> bool:
    """Recursive pin-compensation property in the orientation world.

    For c = 0: for every variable x, pinning x to 0 either kills the
    signature or some other variable y is forced to 1 (the y = 0 branch
    vanishes) with the forced residual again rebalancing.  c = 1 swaps
    the roles of 0 and 1.  Arity-0 signatures qualify.
    """
    if c not in (0, 1):
        raise UnsupportedD("rebalancing direction must be 0 or 1")
    key = (sig.table, c)
    hit = _REBALANCE_MEMO.get(key)
    if hit is not None:
        return hit
    res = _rebalance_rec(sig, c)
    _REBALANCE_MEMO[key] = res
    return res


def _rebalance_rec(sig: Signature, c: int) -> bool:
    if sig.is_zero() or sig.arity == 0:
        return True
    for x in range(sig.arity):
        g = sig.pin(x, c)
        if g.is_zero():
            continue
        found = False
        for y in range(g.arity):
            if g.pin(y, c).is_zero():
                if is_rebalancing(g.pin(y, 1 - c), c):
                    found = True
                    break
        if not found:
            return False
    return True


def restrict_to_eo(sig: Signature) -> tuple:
    """Zero out entries off the balanced slice.

    Returns (restricted signature, dropped-anything flag).  Odd arity has
    an empty balanced slice and raises OddDegree.
    """
    n = sig.arity
    if n % 2:
        raise OddDegree("arity %d has no balanced slice" % n)
    zero = sig.zero_scalar()
    dropped = False
    table = []
    for i, v in enumerate(sig.table):
        if 2 * weight(i) == n:
            table.append(v)
        else:
            if not v.is_zero():
                dropped = True
            table.append(zero)
    return Signature(table, sig.vars), dropped


def is_single_weighted(sig: Signature) -> bool:
    """All support points share one Hamming weight."""
    ws = {weight(i) for i in sig.support()}
    return len(ws) <= 1


def to_eo_padding(sig: Signature) -> tuple:
    """Pad a single-weighted signature to balanced support.

    Appends pinned variables (to 1 if the weight is low, to 0 if high) so
    the padded signature has profile EO=.  Returns (padded, pad_bit,
    pad_count).  Raises NotSingleWeighted otherwise.
    """
    supp = sig.support()
    ws = {weight(i) for i in supp}
    if len(ws) > 1:
        raise NotSingleWeighted("support weights %r" % sorted(ws))
    if not ws:
        return sig, 0, 0
    w = ws.pop()
    n = sig.arity
    k = n - 2 * w
    if k == 0:
        return sig, 0, 0
    pad_bit = 1 if k > 0 else 0
    count = abs(k)
    pin = Signature([0, 1] if pad_bit else [1, 0],
                    field=sig.backend, eps=sig.eps)
    out = sig
    for _ in range(count):
        out = out.tensor(pin.with_fresh_vars())
    return out, pad_bit, count


# -- vanishing ------------------------------------------------------------------


def is_vanishing(sig: Signature) -> ClassReport:
    """Flip-world support strictly above or strictly below balance.

    Such a signature forces every closed grid built from copies of it to
    evaluate to zero: each flip edge contributes exactly one 1-end, so the
    total weight read by all vertices is exactly half the port count, which
    a strictly one-sided family can never meet.
    """
    cls = "vanishing"
    if sig.is_zero():
        return _zero_report(cls)
    h = apply_holographic(sig, matrix_kinv(sig.backend, sig.eps))
    prof = eo_profile(h)
    if prof in ("EO>", "EO<"):
        return ClassReport(cls, True, "flip-world profile %s" % prof,
                           {"profile": prof})
    return ClassReport(cls, False, "flip-world profile %s" % prof,
                       {"profile": prof})


# -- transform search -----------------------------------------------------------


_MEMBERSHIP = {}


def class_membership(sig: Signature, cls: str) -> ClassReport:
    """Dispatch a family name to its membership test."""
    if not _MEMBERSHIP:
        _MEMBERSHIP.update({
            "A": in_A, "P": in_P, "E": in_E, "M": in_M, "XM": in_XM,
            "T": in_T_closure, "M-closure": in_M_closure,
            "XM-closure": in_XM_closure, "R-closure": in_R_closure,
            "L": in_L_local_affine,
        })
    if cls not in _MEMBERSHIP:
        raise ParseError("unknown family %r" % cls)
    return _MEMBERSHIP[cls](sig)


_AFFINE_BASIS_CACHE: dict = {}


def affine_basis_changes(field: str = "cyclo24",
                         eps: float = DEFAULT_EPS) -> list:
    """All invertible M (up to scalar, entries in the 9-element pool
    {0, +-1, +-i, +-w^3, +-w^21}) for which the row action keeps the
    standard constraint side affine: equality-of-2 and both pins transform
    into the affine-phase family."""
    if field in _AFFINE_BASIS_CACHE:
        return _AFFINE_BASIS_CACHE[field]
    if field == "cyclo24":
        pool = [Cyclo.from_int(0), Cyclo.from_int(1), Cyclo.from_int(-1),
                _sc.I, -_sc.I, Cyclo.zeta(3), -Cyclo.zeta(3),
                Cyclo.zeta(21), -Cyclo.zeta(21)]
    else:
        vals = [0, 1, -1, 1j, -1j]
        r = 2 ** -0.5
        vals += [r * (1 + 1j), -r * (1 + 1j), r * (1 - 1j), -r * (1 - 1j)]
        pool = [_sc.Approx(v, eps) for v in vals]
    from .signature import delta, equality
    eq2 = equality(2, field, eps)
    d0 = delta(0, field, eps)
    d1 = delta(1, field, eps)
    seen = set()
    out = []
    for a, b, c, d in product(pool, repeat=4):
        m = Mat2(a, b, c, d, field, eps)
        if m.det().is_zero():
            continue
        lead = next(v for v in (a, b, c, d) if not v.is_zero())
        inv = lead.inverse()
        key = tuple(_sc.format_literal(v * inv) for v in (a, b, c, d))
        if key in seen:
            continue
        seen.add(key)
        if not in_A(apply_holographic(eq2, m, side="row")):
            continue
        if not in_A(apply_holographic(d0, m, side="row")):
            continue
        if not in_A(apply_holographic(d1, m, side="row")):
            continue
        out.append(m)
    _AFFINE_BASIS_CACHE[field] = out
    return out


def candidate_matrices(field: str = "cyclo24", eps: float = DEFAULT_EPS,
                       include_affine_pool: bool = False) -> list:
    """Named basis-change candidates for transformable_search."""
    names = ["I", "X", "Z", "H", "K", "Kinv",
             "ortho:3/5,4/5", "ortho:1,1", "rot:5/4,3/4*i"]
    names += ["diag:w^%d" % k for k in range(1, 24)]
    out = []
    for name in names:
        out.append((name, named_matrix(name, field, eps)))
    if include_affine_pool:
        for i, m in enumerate(affine_basis_changes(field, eps)):
            out.append(("affine-pool:%d" % i, m))
    return out


def transformable_search(sigs, cls: str, candidates=None,
                         require_edge: bool = True) -> tuple | None:
    """Find a basis change M witnessing that the set is cls-transformable:
    the row action of M on equality-of-2 lands in the family, and every
    M^{-1}-transformed signature does too.  Returns (name, matrix) or None
    when the candidate list is exhausted -- exhaustion proves nothing.

    ``require_edge=False`` drops the equality-edge condition and checks
    only the signature containments.
    """
    sigs = list(sigs)
    if not sigs:
        backend, eps = "cyclo24", DEFAULT_EPS
    else:
        backend, eps = sigs[0].backend, sigs[0].eps
    if candidates is None:
        candidates = candidate_matrices(backend, eps,
                                        include_affine_pool=(cls == "A"))
    from .signature import equality
    eq2 = equality(2, backend, eps)
    for name, m in candidates:
        if m.det().is_zero():
            continue
        if require_edge and not class_membership(
                apply_holographic(eq2, m, side="row"), cls):
            continue
        minv = m.inverse()
        if all(class_membership(apply_holographic(f, minv), cls)
               for f in sigs):
            return (name, m)
    return None
