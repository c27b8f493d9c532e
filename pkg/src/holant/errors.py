"""Exception hierarchy for the holant package.

Three broad groups: parse failures (bad literals / JSON), precondition
violations (caller handed an operation something outside its contract), and
search exhaustion (a bounded, incomplete search ended without a find --
informational, never a refutation).
"""


class HolantError(Exception):
    """Base class for every error raised by this package."""


class ParseError(HolantError):
    """Malformed scalar literal, signature JSON, grid JSON, or script JSON."""


class PreconditionError(HolantError):
    """An operation's precondition does not hold for the given arguments."""


class SearchExhausted(HolantError):
    """A bounded search ran out of budget without a find.

    Raised only by operations documented to be incomplete; absence of a
    find is not evidence of non-existence.
    """


# -- scalar / field -----------------------------------------------------------

class BackendMismatch(PreconditionError):
    """Exact and approximate scalars were mixed in one expression."""


class DivisionByZero(PreconditionError):
    """Field inverse of zero requested."""


# -- signatures ---------------------------------------------------------------

class ArityTooLarge(PreconditionError):
    """Dense table would exceed the arity cap (24)."""


class LabelCollision(PreconditionError):
    """Combining signatures whose variable label sets overlap."""


class BadPermutation(PreconditionError):
    """Not a permutation of range(arity)."""


class IndexOutOfRange(PreconditionError):
    """Variable position outside range(arity)."""


class SameIndex(PreconditionError):
    """Two distinct variable positions required but equal ones given."""


class DuplicatePairing(PreconditionError):
    """A variable appears twice in a composition pairing."""


class ArityMismatch(PreconditionError):
    """Operand arities incompatible with the operation."""


class TrivialSignature(PreconditionError):
    """The identically-zero signature is outside this operation's domain."""


# -- transforms ---------------------------------------------------------------

class SingularMatrix(PreconditionError):
    """A 2x2 transform must be invertible here."""


class IsotropicUnary(PreconditionError):
    """Unary (a, b) with a^2 + b^2 = 0 has no orthogonal normalizer."""


class UnknownMatrixName(ParseError):
    """Name not in the 2x2 matrix registry."""


class InexactMatrix(PreconditionError):
    """The requested matrix has no exact representation in the active field."""


# -- factorization ------------------------------------------------------------

class EmptySplit(PreconditionError):
    """A variable split must leave both sides non-empty."""


# -- grids --------------------------------------------------------------------

class GridShapeError(PreconditionError):
    """Incidence structure violates the grid contract."""


class DanglingPresent(PreconditionError):
    """Closed evaluation called on a grid with dangling edges."""


class TooManyEdges(PreconditionError):
    """Edge count exceeds the brute-force enumeration cap."""


class NotEOSignature(PreconditionError):
    """Orientation-sum evaluation needs signatures supported on balanced strings."""


class OddDegree(PreconditionError):
    """Orientation-sum evaluation needs even degree at every vertex."""


class CspShapeError(PreconditionError):
    """Constraint instance references an unknown variable or signature."""


# -- classes ------------------------------------------------------------------

class NotSingleWeighted(PreconditionError):
    """Support touches more than one Hamming weight."""


class UnsupportedD(PreconditionError):
    """Occurrence modulus d outside the supported range."""


# -- constructions ------------------------------------------------------------

class NoImbalancedSupport(PreconditionError):
    """Pure-string reduction needs a support string with nonzero imbalance."""


class IsVanishing(PreconditionError):
    """Every closed instance over this signature evaluates to zero."""


class NotStrictEO(PreconditionError):
    """Pin-power extraction needs a strictly imbalanced support profile."""


class NotTernary(PreconditionError):
    """Operation defined for arity-3 signatures only."""


class Reducible(PreconditionError):
    """Operation defined for irreducible signatures only."""


class NotSymmetric(PreconditionError):
    """Operation defined for symmetric signatures only."""


class NotGHZ(PreconditionError):
    """Signature is not in the generic (two-distinct-cubes) ternary orbit."""


class ZeroLambda(PreconditionError):
    """Interpolation iterates need a nonzero diagonal parameter."""


class BothPureStrings(PreconditionError):
    """Arity-gap reduction needs a support pair not both in {0...0, 1...1}."""


class ReplayMismatch(HolantError):
    """A gadget script's two replay routes disagree, or disagree with the
    claimed table.  Always a bug in the construction, never user error."""


# -- classifier ---------------------------------------------------------------

class NoOddAritySignature(PreconditionError):
    """The odd-arity dichotomy hypothesis (a non-trivial odd-arity member) fails."""


class NotEOSet(PreconditionError):
    """Orientation dichotomy needs every support on balanced strings."""
