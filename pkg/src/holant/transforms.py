"""2x2 basis changes and holographic transformations of signatures.

``apply_holographic(f, M)`` treats the table of f as a column vector and
applies M to every variable: the result g satisfies

    g(x) = sum_y  prod_i M[x_i, y_i] * f(y).

``apply_slocc`` is the same with an independent matrix per variable.

The distinguished basis change between the equality-edge world and the
disequality-edge world uses

    K    = (1/sqrt2) [[1, 1], [i, -i]]      (edges: =2  ->  !=2)
    Kinv = (1/sqrt2) [[1, -i], [1, i]]      (signatures: f -> hat f)

``hat`` transforms every signature variable by Kinv, ``unhat`` by K.  The
partition function of a closed grid is preserved exactly: evaluating the
original grid with shared-bit edges equals evaluating the transformed grid
with flip edges, scalar for scalar.  The tests pin this down on random
grids.

Matrices are named for the registry/CLI by: I, X, Z, H, K, Kinv, T<d>
(diag(1, rho_d) with rho_d = exp(i*pi/(2d)); exact only when 4d divides
24, i.e. d in {1,2,3,6} -- other d raise InexactMatrix unless the approx
field is requested), diag:<literal>, and ortho:<a>,<b>.
"""

from __future__ import annotations

import cmath

from .errors import (
    ArityMismatch, BackendMismatch, InexactMatrix, IsotropicUnary,
    SingularMatrix, UnknownMatrixName,
)
from . import scalar as _sc
from .scalar import Approx, Cyclo, DEFAULT_EPS, Scalar
from .signature import Signature, coerce_scalar


class Mat2:
    """A 2x2 matrix over one scalar backend, row-major entries a,b,c,d."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a, b, c, d, field: str = "cyclo24",
                 eps: float = DEFAULT_EPS):
        vals = [coerce_scalar(v, field, eps) for v in (a, b, c, d)]
        _sc.same_backend(*vals)
        self.a, self.b, self.c, self.d = vals

    @property
    def backend(self) -> str:
        return self.a.backend

    @property
    def eps(self) -> float:
        return getattr(self.a, "eps", DEFAULT_EPS)

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries(), other.entries()))

    def __hash__(self):
        return hash(self.entries())

    def __repr__(self):
        return "Mat2[[%s, %s], [%s, %s]]" % tuple(
            _sc.format_literal(v) for v in self.entries())

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a * other.a + self.b * other.c,
                    self.a * other.b + self.b * other.d,
                    self.c * other.a + self.d * other.c,
                    self.c * other.b + self.d * other.d,
                    self.backend, self.eps)

    def scale(self, s) -> "Mat2":
        s = coerce_scalar(s, self.backend, self.eps)
        return Mat2(self.a * s, self.b * s, self.c * s, self.d * s,
                    self.backend, self.eps)

    def det(self) -> Scalar:
        return self.a * self.d - self.b * self.c

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d, self.backend, self.eps)

    def conjugate(self) -> "Mat2":
        return Mat2(*(v.conjugate() for v in self.entries()),
                    field=self.backend, eps=self.eps)

    def inverse(self) -> "Mat2":
        dt = self.det()
        if dt.is_zero():
            raise SingularMatrix("determinant is zero: %r" % self)
        inv = dt.inverse()
        return Mat2(self.d * inv, -self.b * inv, -self.c * inv, self.a * inv,
                    self.backend, self.eps)

    def apply_unary(self, pair) -> tuple:
        x0, x1 = pair
        return (self.a * x0 + self.b * x1, self.c * x0 + self.d * x1)

    def as_signature(self) -> Signature:
        """The matrix as a binary vertex: variable 0 = row, 1 = column.

        Composing its column variable onto a signature variable applies
        the matrix to that variable.
        """
        return Signature(list(self.entries()), field=self.backend,
                         eps=self.eps)

    def power(self, k: int) -> "Mat2":
        if k < 0:
            return self.inverse().power(-k)
        out = identity(self.backend, self.eps)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out


def identity(field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Mat2:
    return Mat2(1, 0, 0, 1, field, eps)


def _k_pair(field: str, eps: float) -> tuple:
    if field == "cyclo24":
        h = _sc.HALF_SQRT2
        i = _sc.I
        return (Mat2(h, h, i * h, -(i * h)),
                Mat2(h, -(i * h), h, i * h))
    h = Approx(2 ** -0.5, eps)
    i = Approx(1j, eps)
    return (Mat2(h, h, i * h, -(i * h), "approx", eps),
            Mat2(h, -(i * h), h, i * h, "approx", eps))


def matrix_k(field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Mat2:
    return _k_pair(field, eps)[0]


def matrix_kinv(field: str = "cyclo24", eps: float = DEFAULT_EPS) -> Mat2:
    return _k_pair(field, eps)[1]


def phase_matrix(d: int, field: str = "cyclo24",
                 eps: float = DEFAULT_EPS) -> Mat2:
    """diag(1, rho_d) with rho_d = exp(i*pi/(2d)), a primitive 4d-th root."""
    if d < 1:
        raise UnknownMatrixName("phase index must be positive")
    if field == "cyclo24":
        if 24 % (4 * d):
            raise InexactMatrix(
                "rho_%d is a primitive %dth root of unity, outside the "
                "exact scalar field; use the approx field" % (d, 4 * d))
        return Mat2(1, 0, 0, Cyclo.zeta(6 // d))
    rho = Approx(cmath.exp(1j * cmath.pi / (2 * d)), eps)
    return Mat2(1, 0, 0, rho, "approx", eps)


def ortho_from_unary(a, b, field: str = "cyclo24",
                     eps: float = DEFAULT_EPS) -> Mat2:
    """Orthogonal-up-to-scalar Q = [[a, b], [b, -a]] sending (a,b) to
    (a^2+b^2, 0).  Isotropic (a,b), i.e. a^2+b^2 = 0, has no such Q."""
    a = coerce_scalar(a, field, eps)
    b = coerce_scalar(b, field, eps)
    if (a * a + b * b).is_zero():
        raise IsotropicUnary("(a, b) with a^2 + b^2 = 0")
    return Mat2(a, b, b, -a, field, eps)


def named_matrix(name: str, field: str = "cyclo24",
                 eps: float = DEFAULT_EPS) -> Mat2:
    """Resolve a registry name to a matrix in the requested field."""
    name = name.strip()
    if name == "I":
        return identity(field, eps)
    if name == "X":
        return Mat2(0, 1, 1, 0, field, eps)
    if name == "Z":
        return Mat2(1, 0, 0, -1, field, eps)
    if name == "H":
        if field == "cyclo24":
            h = _sc.HALF_SQRT2
            return Mat2(h, h, h, -h)
        h = Approx(2 ** -0.5, eps)
        return Mat2(h, h, h, -h, "approx", eps)
    if name == "K":
        return matrix_k(field, eps)
    if name == "Kinv":
        return matrix_kinv(field, eps)
    if name.startswith("T") and name[1:].isdigit():
        return phase_matrix(int(name[1:]), field, eps)
    if name.startswith("diag:"):
        q = _sc.parse_literal(name[5:], field, eps)
        return Mat2(_sc.one(field, eps), _sc.zero(field, eps),
                    _sc.zero(field, eps), q, field, eps)
    if name.startswith("ortho:"):
        parts = name[6:].split(",")
        if len(parts) != 2:
            raise UnknownMatrixName("ortho: needs two literals")
        return ortho_from_unary(parts[0], parts[1], field, eps)
    if name.startswith("rot:"):
        parts = name[4:].split(",")
        if len(parts) != 2:
            raise UnknownMatrixName("rot: needs two literals")
        a = coerce_scalar(parts[0], field, eps)
        b = coerce_scalar(parts[1], field, eps)
        return Mat2(a, b, -b, a, field, eps)
    raise UnknownMatrixName(name)


# -- applying transforms -----------------------------------------------------


def apply_slocc(sig: Signature, mats) -> Signature:
    """One matrix per variable: g(x) = sum_y prod_i mats[i][x_i,y_i] f(y)."""
    mats = list(mats)
    if len(mats) != sig.arity:
        raise ArityMismatch("%d matrices for arity %d" %
                            (len(mats), sig.arity))
    for m in mats:
        if m.backend != sig.backend:
            raise BackendMismatch("matrix backend %s vs signature %s" %
                                  (m.backend, sig.backend))
    table = list(sig.table)
    n = sig.arity
    for i, m in enumerate(mats):
        stride = 1 << (n - 1 - i)
        for base in range(1 << n):
            if base & stride:
                continue
            lo, hi = table[base], table[base | stride]
            table[base] = m.a * lo + m.b * hi
            table[base | stride] = m.c * lo + m.d * hi
    return Signature(table, sig.vars)


def apply_holographic(sig: Signature, m: Mat2, side: str = "col") -> Signature:
    """Transform every variable by m (side="col") or its transpose
    (side="row", the action on a signature used as a row vector)."""
    if side == "row":
        m = m.transpose()
    elif side != "col":
        raise ArityMismatch("side must be 'col' or 'row'")
    return apply_slocc(sig, [m] * sig.arity)


def apply_to_var(sig: Signature, m: Mat2, i: int) -> Signature:
    mats = [identity(sig.backend, sig.eps)] * sig.arity
    mats[i] = m
    return apply_slocc(sig, mats)


def hat(sig: Signature) -> Signature:
    """Move to the disequality-edge world: every variable gets Kinv."""
    return apply_holographic(sig, matrix_kinv(sig.backend, sig.eps))


def unhat(sig: Signature) -> Signature:
    """Inverse of :func:`hat`: every variable gets K."""
    return apply_holographic(sig, matrix_k(sig.backend, sig.eps))


# -- shape tests --------------------------------------------------------------


def is_orthogonal(m: Mat2) -> tuple:
    """Classify M^T M: ("yes", 1), ("yes_up_to_scalar", lam), or ("no", None).

    "yes" means M^T M = I; "yes_up_to_scalar" means M^T M = lam*I with
    lam nonzero.  Complex-orthogonal in the bilinear (not Hermitian) sense.
    """
    g = m.transpose() @ m
    if not g.b.is_zero() or not g.c.is_zero():
        return ("no", None)
    if not (g.a == g.d):
        return ("no", None)
    if g.a.is_zero():
        return ("no", None)
    one = _sc.one(m.backend, m.eps)
    if g.a == one:
        return ("yes", one)
    return ("yes_up_to_scalar", g.a)


def neq2_preserving_form(m: Mat2) -> tuple:
    """How M acts on the disequality bilinear form X = [[0,1],[1,0]].

    Returns ("diag", lam) or ("antidiag", lam) when M^T X M = lam*X with
    lam nonzero (such M are exactly the diagonal and antidiagonal
    invertible matrices), else (None, None).
    """
    g = m.transpose() @ Mat2(0, 1, 1, 0, m.backend, m.eps) @ m
    if not g.a.is_zero() or not g.d.is_zero():
        return (None, None)
    if g.b.is_zero():
        return (None, None)
    kind = "diag" if m.b.is_zero() and m.c.is_zero() else "antidiag"
    return (kind, g.b)
