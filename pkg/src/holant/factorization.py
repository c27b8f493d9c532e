"""Tensor factorization of signatures.

A nonzero signature factors uniquely (up to scalars and ordering) into a
product of irreducible factors on disjoint variable blocks.  ``upf``
computes that form: a global scalar plus irreducible factors whose tables
are normalized to have first nonzero entry 1, listed in order of their
lowest variable position.  The splitting subsets of a nonzero signature
are closed under intersection, so the block of variable 0 is the unique
minimal splitting subset containing it; peeling it and recursing yields
the factorization.

Rank-1 checks use cross-multiplication only, no division, so they are
safe for exact scalars and cancellation-free for approx ones.
"""

from __future__ import annotations

from itertools import combinations

from .errors import EmptySplit, TrivialSignature
from . import scalar as _sc
from .signature import Signature


def _spread_maps(n: int, positions: tuple):
    """Index maps: row bits over ``positions``, cols over the rest."""
    rest = tuple(i for i in range(n) if i not in positions)
    row_map = []
    for r in range(1 << len(positions)):
        idx = 0
        for t, p in enumerate(positions):
            if (r >> (len(positions) - 1 - t)) & 1:
                idx |= 1 << (n - 1 - p)
        row_map.append(idx)
    col_map = []
    for c in range(1 << len(rest)):
        idx = 0
        for t, p in enumerate(rest):
            if (c >> (len(rest) - 1 - t)) & 1:
                idx |= 1 << (n - 1 - p)
        col_map.append(idx)
    return row_map, col_map, rest


def is_rank_one_split(sig: Signature, positions) -> bool:
    """Does sig factor as g(vars at positions) * h(remaining vars)?"""
    positions = tuple(sorted(positions))
    n = sig.arity
    if not positions or len(positions) >= n:
        raise EmptySplit("need a proper nonempty variable subset")
    if sig.is_zero():
        raise TrivialSignature("zero signature has no factorization")
    row_map, col_map, _ = _spread_maps(n, positions)
    t = sig.table
    r0 = j0 = None
    for r in range(len(row_map)):
        for j in range(len(col_map)):
            if not t[row_map[r] | col_map[j]].is_zero():
                r0, j0 = r, j
                break
        if r0 is not None:
            break
    pivot = t[row_map[r0] | col_map[j0]]
    base_row = [t[row_map[r0] | col_map[j]] for j in range(len(col_map))]
    for r in range(len(row_map)):
        if r == r0:
            continue
        lead = t[row_map[r] | col_map[j0]]
        for j in range(len(col_map)):
            if not (t[row_map[r] | col_map[j]] * pivot == base_row[j] * lead):
                return False
    return True


def split(sig: Signature, positions) -> tuple:
    """Split sig = g * h across the given positions; raises if it cannot.

    g keeps the variables at ``positions`` (original labels), h the rest.
    The scalar convention: g is the pivot column, h the pivot row divided
    by the pivot, so g tensor h rebuilds sig exactly.
    """
    positions = tuple(sorted(positions))
    if not is_rank_one_split(sig, positions):
        raise EmptySplit("signature does not split at %r" % (positions,))
    n = sig.arity
    row_map, col_map, rest = _spread_maps(n, positions)
    t = sig.table
    r0 = j0 = None
    for r in range(len(row_map)):
        for j in range(len(col_map)):
            if not t[row_map[r] | col_map[j]].is_zero():
                r0, j0 = r, j
                break
        if r0 is not None:
            break
    pivot = t[row_map[r0] | col_map[j0]]
    g = Signature([t[row_map[r] | col_map[j0]] for r in range(len(row_map))],
                  vars=[sig.vars[p] for p in positions])
    inv = pivot.inverse()
    h = Signature([t[row_map[r0] | col_map[j]] * inv
                   for j in range(len(col_map))],
                  vars=[sig.vars[p] for p in rest])
    return g, h


class UPF:
    """Unique product form: scalar * tensor of irreducible unit factors."""

    __slots__ = ("scalar", "factors")

    def __init__(self, scalar, factors):
        self.scalar = scalar
        self.factors = tuple((tuple(p), f) for p, f in factors)

    def rebuild(self) -> Signature:
        order = []
        acc = None
        for positions, f in self.factors:
            order.extend(positions)
            acc = f if acc is None else acc.tensor(f.with_fresh_vars())
        if acc is None:
            acc = Signature([1], field=self.scalar.backend,
                            eps=getattr(self.scalar, "eps", _sc.DEFAULT_EPS))
        acc = acc.scale(self.scalar)
        return acc.permute_vars(order)

    def arities(self) -> list:
        return sorted(len(p) for p, _ in self.factors)

    def __repr__(self):
        return "UPF(scalar=%s, blocks=%r)" % (
            _sc.format_literal(self.scalar),
            [p for p, _ in self.factors])


def _normalize(f: Signature) -> tuple:
    """Scale so the first nonzero entry is 1; return (unit, that entry)."""
    for v in f.table:
        if not v.is_zero():
            return f.scale(v.inverse()), v
    raise TrivialSignature("zero factor")


def upf(sig: Signature) -> UPF:
    """Factor into irreducibles.  The rebuilt product equals sig exactly."""
    if sig.is_zero():
        raise TrivialSignature("zero signature has no product form")
    scalar = sig.one_scalar()
    factors = []
    remaining = sig
    offsets = list(range(sig.arity))  # original positions of remaining vars
    while remaining.arity > 0:
        n = remaining.arity
        block = None
        done = False
        for size in range(1, n):
            for extra in combinations(range(1, n), size - 1):
                positions = (0,) + extra
                if is_rank_one_split(remaining, positions):
                    block = positions
                    break
            if block is not None:
                break
        if block is None:
            unit, lead = _normalize(remaining)
            scalar = scalar * lead
            factors.append((tuple(offsets), unit))
            break
        g, h = split(remaining, block)
        unit, lead = _normalize(g)
        scalar = scalar * lead
        factors.append((tuple(offsets[p] for p in block), unit))
        keep = [i for i in range(n) if i not in block]
        offsets = [offsets[i] for i in keep]
        remaining = h
    if sig.arity == 0:
        scalar = sig.table[0]
    result = UPF(scalar, factors)
    rebuilt = result.rebuild()
    assert rebuilt.arity == sig.arity and \
        all(a == b for a, b in zip(rebuilt.table, sig.table)), \
        "factorization failed to rebuild input"
    return result


def is_irreducible(sig: Signature) -> bool:
    """No proper split exists (arity >= 1, nonzero)."""
    if sig.is_zero():
        raise TrivialSignature("zero signature")
    if sig.arity <= 1:
        return sig.arity == 1
    for size in range(1, sig.arity):
        for extra in combinations(range(1, sig.arity), size - 1):
            if is_rank_one_split(sig, (0,) + extra):
                return False
    return True
