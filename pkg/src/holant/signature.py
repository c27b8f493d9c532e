"""Signatures: complex-valued functions on {0,1}^n with labeled variables.

Table convention: variable i corresponds to bit i of the row index read
MSB-first, so a signature f of arity n stores f(x_0,...,x_{n-1}) at index
sum_i x_i * 2^(n-1-i).  A bit string literal like "011" therefore addresses
table[int("011", 2)].

Variable labels are bookkeeping for gadget wiring: operations track them,
equality of signatures ignores them.  Constructors mint globally fresh
labels when none are given, so two independently built signatures can
always be tensored; explicit labels that would collide raise
``LabelCollision``.

Arity is capped at 24 (tables of 2^24 exact scalars are the practical
ceiling for the brute-force evaluator).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .errors import (
    ArityMismatch, ArityTooLarge, BadPermutation, IndexOutOfRange,
    LabelCollision, NotSymmetric, SameIndex, TrivialSignature,
)
from . import scalar as _sc
from .scalar import Approx, Cyclo, DEFAULT_EPS, Scalar

MAX_ARITY = 24

_fresh_counter = itertools.count()


def fresh_label() -> str:
    return "v%d" % next(_fresh_counter)


def bits_of(index: int, n: int) -> tuple:
    return tuple((index >> (n - 1 - i)) & 1 for i in range(n))


def index_of(bits) -> int:
    idx = 0
    for b in bits:
        idx = (idx << 1) | (b & 1)
    return idx


def weight(index: int) -> int:
    return index.bit_count()


def coerce_scalar(v, field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Scalar:
    """Lift python values / literals into the requested scalar backend."""
    if isinstance(v, (Cyclo, Approx)):
        return v
    if isinstance(v, str):
        return _sc.parse_literal(v, field, eps)
    if isinstance(v, bool):
        return _sc.from_int(int(v), field, eps)
    if isinstance(v, int):
        return _sc.from_int(v, field, eps)
    if isinstance(v, Fraction):
        if field == "approx":
            return Approx(complex(v), eps)
        return Cyclo.from_fraction(v)
    if isinstance(v, (float, complex)):
        if field != "approx":
            raise _sc.BackendMismatch(
                "float entry %r requires the approx field" % (v,))
        return Approx(complex(v), eps)
    raise TypeError("cannot coerce %r to a scalar" % (v,))


class Signature:
    __slots__ = ("table", "arity", "vars")

    def __init__(self, table, vars=None, field=None, eps: float = DEFAULT_EPS):
        table = list(table)
        n = (len(table) - 1).bit_length()
        if len(table) != 1 << n:
            raise ArityMismatch("table length %d is not a power of 2" % len(table))
        if n > MAX_ARITY:
            raise ArityTooLarge("arity %d exceeds cap %d" % (n, MAX_ARITY))
        if field is None:
            field = "cyclo24"
            for v in table:
                if isinstance(v, Approx) or isinstance(v, (float, complex)) \
                        and not isinstance(v, bool):
                    field = "approx"
                    break
                if isinstance(v, Cyclo):
                    break
        self.table = tuple(coerce_scalar(v, field, eps) for v in table)
        if self.table:
            _sc.same_backend(*self.table)
        self.arity = n
        if vars is None:
            vars = tuple(fresh_label() for _ in range(n))
        else:
            vars = tuple(vars)
            if len(vars) != n:
                raise ArityMismatch("%d labels for arity %d" % (len(vars), n))
            if len(set(vars)) != n:
                raise LabelCollision("duplicate labels %r" % (vars,))
        self.vars = vars

    # -- views ------------------------------------------------------------

    @property
    def backend(self) -> str:
        return self.table[0].backend

    @property
    def eps(self) -> float:
        return getattr(self.table[0], "eps", DEFAULT_EPS)

    def zero_scalar(self) -> Scalar:
        return _sc.zero(self.backend, self.eps)

    def one_scalar(self) -> Scalar:
        return _sc.one(self.backend, self.eps)

    def __len__(self):
        return len(self.table)

    def entry(self, bits) -> Scalar:
        if isinstance(bits, int):
            return self.table[bits]
        if isinstance(bits, str):
            bits = tuple(int(c) for c in bits)
        if len(bits) != self.arity:
            raise ArityMismatch("%d bits for arity %d" % (len(bits), self.arity))
        return self.table[index_of(bits)]

    __getitem__ = entry

    def support(self) -> list:
        """Indices of nonzero entries, ascending."""
        return [i for i, v in enumerate(self.table) if not v.is_zero()]

    def support_bits(self) -> list:
        return [bits_of(i, self.arity) for i in self.support()]

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.table)

    def is_symmetric(self) -> bool:
        try:
            self.to_symmetric()
            return True
        except NotSymmetric:
            return False

    def to_symmetric(self) -> list:
        """Return [f_0, ..., f_n] with f_k the value on weight-k inputs."""
        reps: list = [None] * (self.arity + 1)
        for i, v in enumerate(self.table):
            w = weight(i)
            if reps[w] is None:
                reps[w] = v
            elif not (reps[w] == v):
                raise NotSymmetric(
                    "entries differ within weight class %d" % w)
        return reps

    def __eq__(self, other):
        if not isinstance(other, Signature):
            return NotImplemented
        if self.arity != other.arity:
            return False
        return all(a == b for a, b in zip(self.table, other.table))

    def __hash__(self):
        return hash((self.arity, self.table))

    def __repr__(self):
        shown = ", ".join(_sc.format_literal(v) for v in self.table[:8])
        if len(self.table) > 8:
            shown += ", ..."
        return "Signature(arity=%d, [%s])" % (self.arity, shown)

    # -- pointwise --------------------------------------------------------

    def scale(self, s) -> "Signature":
        s = coerce_scalar(s, self.backend, self.eps)
        return Signature([v * s for v in self.table], self.vars)

    def map_entries(self, fn) -> "Signature":
        return Signature([fn(v) for v in self.table], self.vars)

    def conjugate_entries(self) -> "Signature":
        return self.map_entries(lambda v: v.conjugate())

    def with_fresh_vars(self) -> "Signature":
        return Signature(self.table, None)

    def relabel(self, vars) -> "Signature":
        return Signature(self.table, vars)

    # -- structural operations ---------------------------------------------

    def tensor(self, other: "Signature") -> "Signature":
        if self.arity + other.arity > MAX_ARITY:
            raise ArityTooLarge("tensor arity %d exceeds cap" %
                                (self.arity + other.arity))
        overlap = set(self.vars) & set(other.vars)
        if overlap:
            raise LabelCollision("shared labels %r" % sorted(overlap))
        out = []
        for a in self.table:
            for b in other.table:
                out.append(a * b)
        return Signature(out, self.vars + other.vars)

    def permute_vars(self, perm) -> "Signature":
        """Move variable i to position perm[i]."""
        n = self.arity
        perm = tuple(perm)
        if sorted(perm) != list(range(n)):
            raise BadPermutation("%r is not a permutation of 0..%d" %
                                 (perm, n - 1))
        out = [None] * len(self.table)
        shifts = [n - 1 - perm[i] for i in range(n)]
        for idx, v in enumerate(self.table):
            new_idx = 0
            for i in range(n):
                if (idx >> (n - 1 - i)) & 1:
                    new_idx |= 1 << shifts[i]
            out[new_idx] = v
        new_vars = [None] * n
        for i in range(n):
            new_vars[perm[i]] = self.vars[i]
        return Signature(out, new_vars)

    def pin(self, i: int, b: int) -> "Signature":
        """Fix variable i to constant bit b."""
        n = self.arity
        if not 0 <= i < n:
            raise IndexOutOfRange("variable %d of arity %d" % (i, n))
        if b not in (0, 1):
            raise IndexOutOfRange("pin value must be 0 or 1")
        out = []
        for idx in range(1 << (n - 1)):
            hi = idx >> (n - 1 - i)
            lo = idx & ((1 << (n - 1 - i)) - 1)
            full = (hi << (n - i)) | (b << (n - 1 - i)) | lo
            out.append(self.table[full])
        new_vars = self.vars[:i] + self.vars[i + 1:]
        return Signature(out, new_vars)

    def self_loop(self, i: int, j: int,
                  connector: "Signature | None" = None) -> "Signature":
        """Join variables i and j through a binary connector (default =2).

        The result g(rest) = sum_{a,b} connector(a,b) * f(..a..b..), i.e. a
        self-loop edge in the gadget sense.
        """
        n = self.arity
        if i == j:
            raise SameIndex("self-loop needs two distinct variables")
        if not (0 <= i < n and 0 <= j < n):
            raise IndexOutOfRange("variables (%d, %d) of arity %d" % (i, j, n))
        if connector is not None and connector.arity != 2:
            raise ArityMismatch("connector must be binary")
        zero = self.zero_scalar()
        flipped = i > j
        if flipped:
            i, j = j, i
        pairs = []
        if connector is None:
            one = self.one_scalar()
            pairs = [(0, 0, one), (1, 1, one)]
        else:
            for a in (0, 1):
                for b in (0, 1):
                    c = connector.table[(b << 1) | a if flipped else (a << 1) | b]
                    if not c.is_zero():
                        pairs.append((a, b, c))
        out = []
        for idx in range(1 << (n - 2)):
            acc = zero
            for a, b, c in pairs:
                full = _insert_bit(_insert_bit(idx, n - 1, j - 1, b), n, i, a)
                acc = acc + c * self.table[full]
            out.append(acc)
        new_vars = tuple(v for t, v in enumerate(self.vars) if t not in (i, j))
        return Signature(out, new_vars)

    def compose(self, other: "Signature", k: int) -> "Signature":
        """Connect the last k variables of self to the first k of other.

        Each connection is an edge (shared bit), so the result table is the
        matrix product of the two matrix views split at k.
        """
        nf, ng = self.arity, other.arity
        if not 0 <= k <= min(nf, ng):
            raise ArityMismatch("cannot join %d variables" % k)
        if nf + ng - 2 * k > MAX_ARITY:
            raise ArityTooLarge("composition arity exceeds cap")
        overlap = (set(self.vars[:nf - k]) & set(other.vars[k:]))
        if overlap:
            raise LabelCollision("shared labels %r" % sorted(overlap))
        rows = 1 << (nf - k)
        mid = 1 << k
        cols = 1 << (ng - k)
        zero = self.zero_scalar()
        out = []
        for r in range(rows):
            base = r << k
            for c in range(cols):
                acc = zero
                for m in range(mid):
                    a = self.table[base | m]
                    if a.is_zero():
                        continue
                    acc = acc + a * other.table[(m << (ng - k)) | c]
                out.append(acc)
        new_vars = self.vars[:nf - k] + other.vars[k:]
        return Signature(out, new_vars)

    def matrix_view(self, row_count: int) -> list:
        """2^r x 2^(n-r) nested-list matrix, first r variables as rows."""
        n = self.arity
        if not 0 <= row_count <= n:
            raise ArityMismatch("row split %d of arity %d" % (row_count, n))
        cols = 1 << (n - row_count)
        return [list(self.table[r * cols:(r + 1) * cols])
                for r in range(1 << row_count)]


def _insert_bit(idx: int, n: int, pos: int, b: int) -> int:
    """Insert bit b at variable position pos into an (n-1)-variable index."""
    hi = idx >> (n - 1 - pos)
    lo = idx & ((1 << (n - 1 - pos)) - 1)
    return (hi << (n - pos)) | (b << (n - 1 - pos)) | lo


# -- stock constructors ----------------------------------------------------

def unary(a, b, field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Signature:
    return Signature([a, b], field=field, eps=eps)


def binary(f00, f01, f10, f11, field: str = "cyclo24",
           eps: float = DEFAULT_EPS) -> Signature:
    return Signature([f00, f01, f10, f11], field=field, eps=eps)


def symmetric(values, field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Signature:
    """Build the symmetric signature [f_0, ..., f_n] of arity n = len - 1."""
    values = [coerce_scalar(v, field, eps) for v in values]
    n = len(values) - 1
    if n < 0:
        raise ArityMismatch("empty symmetric value list")
    table = [values[weight(i)] for i in range(1 << n)]
    return Signature(table, field=field, eps=eps)


def equality(n: int, field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Signature:
    """The equality signature =_n: 1 on all-zeros and all-ones."""
    if n < 1:
        raise ArityMismatch("equality needs arity >= 1")
    table = [0] * (1 << n)
    table[0] = 1
    table[-1] = 1
    return Signature(table, field=field, eps=eps)


def disequality(field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Signature:
    """The binary disequality signature: 1 on 01 and 10."""
    return Signature([0, 1, 1, 0], field=field, eps=eps)


def delta(c: int, field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Signature:
    """Unary pin to constant c."""
    if c not in (0, 1):
        raise IndexOutOfRange("pin constant must be 0 or 1")
    return Signature([1, 0] if c == 0 else [0, 1], field=field, eps=eps)
