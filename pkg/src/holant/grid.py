"""Instances and brute-force partition functions.

A ``Grid`` is a multigraph whose vertices carry signatures.  Each vertex of
arity d exposes d ports (variable slots); an edge joins two ports.  Ports
left unwired must be declared as ordered ``externals``, turning the grid
into a gadget whose realized signature :func:`realize_gadget` computes.

Two evaluation semantics share one engine:

* ``eval_holant`` -- every edge carries one shared bit (an equality edge).
* ``eval_eo`` -- every edge carries a bit read as s at its first end and
  1-s at its second end, i.e. a disequality edge.  This is the evaluation
  for instances written against the disequality-edge (orientation) world.

Both enumerate edge assignments in Gray-code order and recompute the full
vertex product each step.  No division is performed, so exact zeros in
tables are harmless and the approx backend accumulates no cancellation
from removed factors.  Edge count is capped at 24 (TooManyEdges).

``CspInstance`` holds a counting-CSP instance (variables plus constraints
applied to variable tuples).  ``eval_csp`` sums over variable assignments
directly; ``csp_to_grid`` encodes the instance as a grid by giving every
variable an equality vertex of arity equal to its occurrence count.  The
two routes agree exactly, which the tests pin down.
"""

from __future__ import annotations

import random

from .errors import (
    ArityTooLarge, CspShapeError, DanglingPresent, GridShapeError,
    NotEOSignature, OddDegree, TooManyEdges,
)
from . import scalar as _sc
from .scalar import DEFAULT_EPS, Scalar
from .signature import MAX_ARITY, Signature, equality, weight

MAX_EVAL_EDGES = 24
MAX_GADGET_INTERNAL_EDGES = 20


class Grid:
    """Multigraph of signature vertices; ports = (vertex, slot)."""

    __slots__ = ("signatures", "edges", "externals")

    def __init__(self, signatures, edges, externals=()):
        self.signatures = tuple(signatures)
        self.edges = tuple((tuple(a), tuple(b)) for a, b in edges)
        self.externals = tuple(tuple(p) for p in externals)
        seen = set()
        for port in [p for e in self.edges for p in e] + list(self.externals):
            v, s = port
            if not (0 <= v < len(self.signatures)):
                raise GridShapeError("vertex %d out of range" % v)
            if not (0 <= s < self.signatures[v].arity):
                raise GridShapeError("slot %d out of range on vertex %d" % (s, v))
            if port in seen:
                raise GridShapeError("port %r used twice" % (port,))
            seen.add(port)
        want = {(v, s) for v, sig in enumerate(self.signatures)
                for s in range(sig.arity)}
        missing = want - seen
        if missing:
            raise GridShapeError("unwired ports %r: wire them or declare "
                                 "them external" % sorted(missing))
        if self.signatures:
            _sc.same_backend(*(sig.table[0] for sig in self.signatures))

    @property
    def backend(self) -> str:
        return self.signatures[0].backend if self.signatures else "cyclo24"

    @property
    def eps(self) -> float:
        return self.signatures[0].eps if self.signatures else DEFAULT_EPS

    def degree_sequence(self) -> list:
        return [sig.arity for sig in self.signatures]

    def __repr__(self):
        return "Grid(%d vertices, %d edges, %d externals)" % (
            len(self.signatures), len(self.edges), len(self.externals))


def _gray_sum(grid: Grid, eo: bool, ext_bits: int = 0) -> Scalar:
    """Sum the vertex product over all edge assignments, Gray-code order."""
    sigs = grid.signatures
    n = len(sigs)
    one = _sc.one(grid.backend, grid.eps)
    if n == 0:
        return one
    zero = _sc.zero(grid.backend, grid.eps)
    idx = [0] * n
    # externals contribute fixed bits, MSB-first over the external tuple
    k = len(grid.externals)
    for pos, (v, s) in enumerate(grid.externals):
        if (ext_bits >> (k - 1 - pos)) & 1:
            idx[v] |= 1 << (sigs[v].arity - 1 - s)
    if eo:
        # edge bit 0 means: first end reads 0, second end reads 1
        for (_, _), (v, s) in grid.edges:
            idx[v] |= 1 << (sigs[v].arity - 1 - s)
    masks = []
    for (v1, s1), (v2, s2) in grid.edges:
        m = [0] * n
        m[v1] |= 1 << (sigs[v1].arity - 1 - s1)
        m[v2] |= 1 << (sigs[v2].arity - 1 - s2)
        masks.append([(v, b) for v, b in enumerate(m) if b])
    tables = [sig.table for sig in sigs]

    def product() -> Scalar:
        acc = one
        for v in range(n):
            t = tables[v][idx[v]]
            if t.is_zero():
                return zero
            acc = acc * t
        return acc

    total = product()
    for step in range(1, 1 << len(grid.edges)):
        e = (step & -step).bit_length() - 1
        for v, b in masks[e]:
            idx[v] ^= b
        total = total + product()
    return total


def eval_holant(grid: Grid) -> Scalar:
    """Exact partition function with shared-bit (equality) edges."""
    if grid.externals:
        raise DanglingPresent("grid has %d external ports" % len(grid.externals))
    if len(grid.edges) > MAX_EVAL_EDGES:
        raise TooManyEdges("%d edges exceeds cap %d" %
                           (len(grid.edges), MAX_EVAL_EDGES))
    return _gray_sum(grid, eo=False)


def eval_eo(grid: Grid) -> Scalar:
    """Exact partition function with disequality (orientation) edges."""
    if grid.externals:
        raise DanglingPresent("grid has %d external ports" % len(grid.externals))
    if len(grid.edges) > MAX_EVAL_EDGES:
        raise TooManyEdges("%d edges exceeds cap %d" %
                           (len(grid.edges), MAX_EVAL_EDGES))
    return _gray_sum(grid, eo=True)


def validate_eo(grid: Grid, require_balanced_support: bool = True) -> None:
    """Check the grid is a legal orientation-world instance.

    Every vertex must have even arity; with ``require_balanced_support``
    each signature must vanish off exactly-half-ones inputs.
    """
    for v, sig in enumerate(grid.signatures):
        if sig.arity % 2:
            raise OddDegree("vertex %d has odd arity %d" % (v, sig.arity))
        if require_balanced_support:
            half = sig.arity // 2
            for i in sig.support():
                if weight(i) != half:
                    raise NotEOSignature(
                        "vertex %d has support off the balanced slice" % v)


def realize_gadget(grid: Grid) -> Signature:
    """Contract internal edges, leaving externals as the new variables.

    The result's variable order is the external port order.
    """
    if len(grid.edges) > MAX_GADGET_INTERNAL_EDGES:
        raise TooManyEdges("%d internal edges exceeds cap %d" %
                           (len(grid.edges), MAX_GADGET_INTERNAL_EDGES))
    k = len(grid.externals)
    if k > MAX_ARITY:
        raise ArityTooLarge("gadget with %d externals" % k)
    table = [_gray_sum(grid, eo=False, ext_bits=a) for a in range(1 << k)]
    return Signature(table, field=grid.backend, eps=grid.eps)


def random_grid(seed: int, pool, num_vertices: int) -> Grid:
    """Deterministic random closed grid over a signature pool.

    Vertices draw signatures from ``pool``; ports are matched uniformly.
    The final vertex is re-drawn until the total port count is even, so the
    pool must contain signatures of both parities or any even mix.
    """
    if not pool or num_vertices <= 0:
        raise GridShapeError("need a nonempty pool and at least one vertex")
    rng = random.Random(seed)
    sigs = [pool[rng.randrange(len(pool))] for _ in range(num_vertices)]
    tries = 0
    while sum(s.arity for s in sigs) % 2:
        sigs[-1] = pool[rng.randrange(len(pool))]
        tries += 1
        if tries > 200:
            raise GridShapeError("pool cannot reach an even port total")
    ports = [(v, s) for v, sig in enumerate(sigs) for s in range(sig.arity)]
    rng.shuffle(ports)
    edges = [(ports[i], ports[i + 1]) for i in range(0, len(ports), 2)]
    return Grid([s.with_fresh_vars() for s in sigs], edges)


class CspInstance:
    """A counting-CSP instance: Boolean variables plus constraints."""

    __slots__ = ("num_vars", "constraints")

    def __init__(self, num_vars: int, constraints):
        self.num_vars = int(num_vars)
        if self.num_vars < 0:
            raise CspShapeError("negative variable count")
        self.constraints = tuple((sig, tuple(vs)) for sig, vs in constraints)
        for sig, vs in self.constraints:
            if sig.arity != len(vs):
                raise CspShapeError("constraint arity %d applied to %d "
                                    "variables" % (sig.arity, len(vs)))
            for v in vs:
                if not (0 <= v < self.num_vars):
                    raise CspShapeError("variable %d out of range" % v)
        backs = [sig.table[0] for sig, _ in self.constraints]
        if backs:
            _sc.same_backend(*backs)

    @property
    def backend(self) -> str:
        if self.constraints:
            return self.constraints[0][0].backend
        return "cyclo24"

    @property
    def eps(self) -> float:
        if self.constraints:
            return self.constraints[0][0].eps
        return DEFAULT_EPS

    def occurrence_counts(self) -> list:
        counts = [0] * self.num_vars
        for _, vs in self.constraints:
            for v in vs:
                counts[v] += 1
        return counts


def eval_csp(csp: CspInstance) -> Scalar:
    """Sum over variable assignments of the product of constraints."""
    if csp.num_vars > MAX_EVAL_EDGES:
        raise TooManyEdges("%d variables exceeds cap %d" %
                           (csp.num_vars, MAX_EVAL_EDGES))
    one = _sc.one(csp.backend, csp.eps)
    zero = _sc.zero(csp.backend, csp.eps)
    total = zero
    for asg in range(1 << csp.num_vars):
        acc = one
        for sig, vs in csp.constraints:
            bits = tuple((asg >> (csp.num_vars - 1 - v)) & 1 for v in vs)
            t = sig.entry(bits)
            if t.is_zero():
                acc = zero
                break
            acc = acc * t
        total = total + acc
    return total


def csp_to_grid(csp: CspInstance) -> Grid:
    """Encode a CSP instance as a grid with equality vertices per variable.

    A variable with no occurrences becomes an arity-0 vertex of value 2
    (it is free, so it contributes a factor of 2).
    """
    counts = csp.occurrence_counts()
    sigs = [sig.with_fresh_vars() for sig, _ in csp.constraints]
    var_vertex = {}
    for v, c in enumerate(counts):
        if c == 0:
            sigs.append(Signature([2], field=csp.backend, eps=csp.eps))
            var_vertex[v] = (len(sigs) - 1, None)
        else:
            sigs.append(equality(c, field=csp.backend, eps=csp.eps))
            var_vertex[v] = (len(sigs) - 1, 0)
    next_slot = [0] * csp.num_vars
    edges = []
    for ci, (_, vs) in enumerate(csp.constraints):
        for pos, v in enumerate(vs):
            vertex, _ = var_vertex[v]
            edges.append(((ci, pos), (vertex, next_slot[v])))
            next_slot[v] += 1
    return Grid(sigs, edges)
