"""Scalar backends for signature entries.

Two interchangeable-but-unmixable backends:

* ``Cyclo`` -- exact arithmetic in the cyclotomic field Q(zeta_24).  An
  element is stored as an integer coefficient vector of length
  phi(24) = 8 over the power basis 1, w, ..., w^7 (w = zeta_24 a primitive
  24th root of unity), together with one positive denominator, reduced
  modulo the 24th cyclotomic polynomial x^8 - x^4 + 1 and normalized so
  gcd(coefficients, denominator) = 1.  This field contains i = w^6,
  sqrt(2) = w^3 + w^{-3}, the primitive cube root of unity w^8, and every
  24th root of unity, which covers all scalars the exact pipeline needs.

* ``Approx`` -- a complex float plus a relative tolerance ``eps``.
  Equality means |a - b| <= eps * (1 + max(|a|, |b|)).

Mixing backends in one expression raises ``BackendMismatch``: silent
coercion from exact to float would invalidate exactness guarantees.
Converting explicitly with :func:`to_approx` is one-way and fine.

Scalar literals (used in JSON files and CLI output) follow a small grammar:
rationals ``p`` / ``p/q``, the imaginary unit ``i``, the basis root ``w``,
products ``a*b``, powers ``w^k`` (k may be negative), sums/differences, and
parentheses.  ``format_literal`` emits a canonical form: the reduced basis
expansion with ascending powers, e.g. ``sqrt(2)`` prints as ``w+w^3-w^5``.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd

from .errors import BackendMismatch, DivisionByZero, ParseError

# Reduction rule for the power basis: w^8 = w^4 - 1 (x^8 - x^4 + 1 = 0).
_DEG = 8
DEFAULT_EPS = 1e-9

_ZETA = cmath.exp(2j * cmath.pi / 24)


def _reduce(coeffs: list) -> list:
    """Reduce a coefficient list of any length modulo x^8 - x^4 + 1."""
    c = list(coeffs)
    if len(c) < _DEG:
        c += [0] * (_DEG - len(c))
    for k in range(len(c) - 1, _DEG - 1, -1):
        v = c[k]
        if v:
            c[k] = 0
            c[k - 4] += v
            c[k - 8] -= v
    return c[:_DEG]


def _zeta_vec(k: int) -> tuple:
    k %= 24
    raw = [0] * (k + 1)
    raw[k] = 1
    return tuple(_reduce(raw))


_ZETA_POW = [_zeta_vec(k) for k in range(24)]
# Images of the basis powers under complex conjugation w -> w^{-1}.
_CONJ_BASIS = [_zeta_vec((24 - j) % 24) for j in range(_DEG)]


class Cyclo:
    """An element of Q(zeta_24), exact."""

    __slots__ = ("num", "den")
    backend = "cyclo24"

    def __init__(self, num, den=1, _normalized=False):
        if _normalized:
            self.num = num
            self.den = den
            return
        if den == 0:
            raise DivisionByZero("zero denominator")
        if den < 0:
            num = tuple(-x for x in num)
            den = -den
        g = den
        for x in num:
            g = gcd(g, x)
            if g == 1:
                break
        if g > 1:
            num = tuple(x // g for x in num)
            den //= g
        self.num = tuple(num)
        self.den = den

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "Cyclo":
        return Cyclo((int(n), 0, 0, 0, 0, 0, 0, 0), 1, _normalized=(n == int(n)))

    @staticmethod
    def from_fraction(q) -> "Cyclo":
        q = Fraction(q)
        return Cyclo((q.numerator, 0, 0, 0, 0, 0, 0, 0), q.denominator)

    @staticmethod
    def zeta(k: int = 1) -> "Cyclo":
        return Cyclo(_ZETA_POW[k % 24], 1, _normalized=True)

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not rational: %s" % format_literal(self))
        return Fraction(self.num[0], self.den)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Cyclo):
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclo.from_fraction(other)
        if isinstance(other, Approx):
            raise BackendMismatch("cannot mix exact and approx scalars")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self, o
        num = tuple(x * b.den + y * a.den for x, y in zip(a.num, b.num))
        return Cyclo(num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(tuple(-x for x in self.num), self.den, _normalized=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.num, o.num
        c = [0] * 15
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        c[i + j] += x * y
        return Cyclo(tuple(_reduce(c)), self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclo":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        # Solve (num-vector) * x = 1 by Gaussian elimination over Q, then
        # scale by den.  Columns of m are the basis images under
        # multiplication by self.num.
        cols = []
        for j in range(_DEG):
            prod = [0] * 15
            for i, x in enumerate(self.num):
                if x:
                    prod[i + j] += x
            cols.append(_reduce(prod))
        m = [[Fraction(cols[j][i]) for j in range(_DEG)] for i in range(_DEG)]
        rhs = [Fraction(1)] + [Fraction(0)] * (_DEG - 1)
        for col in range(_DEG):
            piv = next(r for r in range(col, _DEG) if m[r][col] != 0)
            m[col], m[piv] = m[piv], m[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
            inv_p = 1 / m[col][col]
            m[col] = [v * inv_p for v in m[col]]
            rhs[col] *= inv_p
            for r in range(_DEG):
                if r != col and m[r][col] != 0:
                    f = m[r][col]
                    m[r] = [v - f * w for v, w in zip(m[r], m[col])]
                    rhs[r] -= f * rhs[col]
        den = 1
        for q in rhs:
            den = den * q.denominator // gcd(den, q.denominator)
        num = tuple(int(q * den) for q in rhs)
        return Cyclo(num, den) * Cyclo.from_int(self.den)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "Cyclo":
        acc = [0] * _DEG
        for j, x in enumerate(self.num):
            if x:
                basis = _CONJ_BASIS[j]
                for t in range(_DEG):
                    acc[t] += x * basis[t]
        return Cyclo(tuple(acc), self.den)

    # -- comparisons / embedding ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Approx):
            raise BackendMismatch("cannot compare exact and approx scalars")
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def to_complex(self) -> complex:
        return self.embed(1)

    def embed(self, u: int) -> complex:
        """Numeric image under the embedding w -> exp(2*pi*i*u/24)."""
        z = cmath.exp(2j * cmath.pi * u / 24)
        acc = 0j
        p = 1 + 0j
        for x in self.num:
            if x:
                acc += x * p
            p *= z
        return acc / self.den

    def __repr__(self):
        return "Cyclo(%s)" % format_literal(self)


class Approx:
    """A complex float with a relative comparison tolerance."""

    __slots__ = ("val", "eps")
    backend = "approx"

    def __init__(self, val, eps: float = DEFAULT_EPS):
        self.val = complex(val)
        self.eps = float(eps)

    def is_zero(self) -> bool:
        return abs(self.val) <= self.eps * (1.0 + abs(self.val))

    def _coerce(self, other):
        if isinstance(other, Approx):
            return other
        if isinstance(other, (int, float, complex, Fraction)):
            return Approx(complex(other), self.eps)
        if isinstance(other, Cyclo):
            raise BackendMismatch("cannot mix exact and approx scalars")
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Approx(self.val + o.val, max(self.eps, o.eps))

    __radd__ = __add__

    def __neg__(self):
        return Approx(-self.val, self.eps)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Approx(self.val - o.val, max(self.eps, o.eps))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Approx(o.val - self.val, max(self.eps, o.eps))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Approx(self.val * o.val, max(self.eps, o.eps))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of (approximately) zero")
        return Approx(1 / self.val, self.eps)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return Approx(self.val ** k, self.eps)

    def conjugate(self):
        return Approx(self.val.conjugate(), self.eps)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        tol = max(self.eps, o.eps) * (1.0 + max(abs(self.val), abs(o.val)))
        return abs(self.val - o.val) <= tol

    def __hash__(self):
        # Tolerant equality cannot have a consistent hash; this one only has
        # to make exact-duplicate memo keys collide, which it does.
        return hash(self.val)

    def to_complex(self) -> complex:
        return self.val

    def __repr__(self):
        return "Approx(%r)" % self.val


Scalar = Cyclo | Approx

ZERO = Cyclo.from_int(0)
ONE = Cyclo.from_int(1)
TWO = Cyclo.from_int(2)
MINUS_ONE = Cyclo.from_int(-1)
I = Cyclo.zeta(6)
SQRT2 = Cyclo.zeta(3) + Cyclo.zeta(21)
HALF_SQRT2 = SQRT2 / 2          # = 1/sqrt(2)
OMEGA = Cyclo.zeta(8)           # primitive cube root of unity
ZETA = Cyclo.zeta(1)

# i^k lookup used by phase tests.
I_POWERS = (ONE, I, MINUS_ONE, I * I * I)


def from_int(n: int, field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Scalar:
    if field == "cyclo24":
        return Cyclo.from_int(n)
    if field == "approx":
        return Approx(n, eps)
    raise ParseError("unknown field %r" % field)


def zero(field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Scalar:
    return from_int(0, field, eps)


def one(field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Scalar:
    return from_int(1, field, eps)


def to_approx(s: Scalar, eps: float = DEFAULT_EPS) -> Approx:
    """Explicit one-way conversion exact -> approx."""
    if isinstance(s, Approx):
        return s
    return Approx(s.to_complex(), eps)


def same_backend(*scalars) -> str:
    kinds = {s.backend for s in scalars}
    if len(kinds) > 1:
        raise BackendMismatch("mixed scalar backends: %s" % sorted(kinds))
    return kinds.pop()


def field_ops(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    """Uniform entry point for field arithmetic.

    ``op`` is one of add, sub, mul, div, neg, inv, conj; the unary ops
    ignore ``b``.
    """
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "conj":
        return a.conjugate()
    raise ParseError("unknown field op %r" % op)


def power_of_i(s: Scalar, unit: Scalar | None = None):
    """Return k in {0,1,2,3} with s = i^k * unit (unit defaults to 1), else None."""
    base = unit if unit is not None else (
        one(s.backend, getattr(s, "eps", DEFAULT_EPS)))
    cur = base
    i_val = I if isinstance(s, Cyclo) else Approx(1j, getattr(s, "eps", DEFAULT_EPS))
    for k in range(4):
        if s == cur:
            return k
        cur = cur * i_val
    return None


# -- literals ------------------------------------------------------------------

def format_literal(s: Scalar) -> str:
    """Canonical literal: reduced basis expansion, ascending powers."""
    if isinstance(s, Approx):
        v = s.val
        re, im = v.real, v.imag
        if im == 0:
            return repr(re)
        if re == 0:
            return repr(im) + "j"
        sign = "+" if im > 0 else "-"
        return "%r%s%rj" % (re, sign, abs(im))
    parts = []
    for k in range(_DEG):
        c = Fraction(s.num[k], s.den)
        if c == 0:
            continue
        base = "" if k == 0 else ("w" if k == 1 else "w^%d" % k)
        if k == 0:
            body = str(c)
        elif c == 1:
            body = base
        elif c == -1:
            body = "-" + base
        else:
            body = "%s*%s" % (c, base)
        if parts and not body.startswith("-"):
            parts.append("+")
        parts.append(body)
    return "".join(parts) if parts else "0"


class _Tok:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def peek(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self):
        c = self.peek()
        self.pos += 1
        return c

    def integer(self) -> int:
        self.peek()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise ParseError("expected integer at %d in %r" % (start, self.text))
        return int(self.text[start:self.pos])


def _parse_atom(t: _Tok) -> Cyclo:
    c = t.peek()
    if c == "(":
        t.take()
        v = _parse_expr(t)
        if t.take() != ")":
            raise ParseError("missing ')' in %r" % t.text)
        return v
    if c == "i":
        t.take()
        return I
    if c == "w":
        t.take()
        return ZETA
    if c.isdigit():
        n = t.integer()
        if t.peek() == "/":
            t.take()
            d = t.integer()
            if d == 0:
                raise ParseError("zero denominator in %r" % t.text)
            return Cyclo.from_fraction(Fraction(n, d))
        return Cyclo.from_int(n)
    raise ParseError("unexpected %r in %r" % (c, t.text))


def _parse_factor(t: _Tok) -> Cyclo:
    v = _parse_atom(t)
    if t.peek() == "^":
        t.take()
        neg = False
        if t.peek() == "-":
            t.take()
            neg = True
        k = t.integer()
        v = v ** (-k if neg else k)
    return v


def _parse_term(t: _Tok) -> Cyclo:
    v = _parse_factor(t)
    while t.peek() == "*":
        t.take()
        v = v * _parse_factor(t)
    return v


def _parse_expr(t: _Tok) -> Cyclo:
    neg = False
    if t.peek() == "-":
        t.take()
        neg = True
    v = _parse_term(t)
    if neg:
        v = -v
    while t.peek() in ("+", "-"):
        op = t.take()
        rhs = _parse_term(t)
        v = v + rhs if op == "+" else v - rhs
    return v


def parse_literal(text: str, field: str = "cyclo24",
                  eps: float = DEFAULT_EPS) -> Scalar:
    """Parse a scalar literal in the given field.

    The approx field accepts both decimal complex forms ("1.5-0.5j") and
    any exact-grammar literal, evaluated numerically.
    """
    text = text.strip()
    if field == "approx":
        try:
            return Approx(complex(text.replace(" ", "")), eps)
        except ValueError:
            pass
        t = _Tok(text)
        v = _parse_expr(t)
        if t.peek():
            raise ParseError("trailing junk in %r" % text)
        return Approx(v.to_complex(), eps)
    if field != "cyclo24":
        raise ParseError("unknown field %r" % field)
    t = _Tok(text)
    v = _parse_expr(t)
    if t.peek():
        raise ParseError("trailing junk in %r" % text)
    return v
