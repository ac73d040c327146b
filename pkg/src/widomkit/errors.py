"""Exception hierarchy.

Three families matter to callers (and to the CLI exit codes):

* :class:`InputError` -- the caller handed us something invalid.
* :class:`NumericalError` -- an engine could not deliver its accuracy contract.
* :class:`InvariantViolation` -- a computed quantity broke a mathematical
  inequality or identity that must hold. This is the "the math check failed"
  signal and is kept separate so it can be treated as a hard failure.
"""


class WidomError(Exception):
    """Base class for every error raised by widomkit."""


class InputError(WidomError, ValueError):
    pass


class NumericalError(WidomError, ArithmeticError):
    pass


class InvariantViolation(NumericalError):
    pass


# intervals
class EmptyInput(InputError):
    pass


class DegenerateSet(InputError):
    pass


class ZeroScale(InputError):
    pass


# quadrature
class NoConvergence(NumericalError):
    pass


class NonFiniteIntegrand(NumericalError):
    pass


# potential
class DegenerateGeometry(InputError):
    pass


class OutsideSupport(InputError):
    pass


class OnSupport(InputError):
    pass


class IllConditioned(NumericalError):
    pass


class RootEscape(NumericalError):
    pass


class NormalizationFailure(NumericalError):
    pass


class ProbeInconsistency(NumericalError):
    pass


class IdentityViolation(InvariantViolation):
    pass


# jacobi
class BreakDown(NumericalError):
    pass


class IndexBudget(InputError):
    pass


class RenormalizationTooLarge(NumericalError):
    pass


class DegreeOutOfRange(InputError):
    pass


# tset
class NotAdmissible(InputError):
    pass


class RootFindFailure(NumericalError):
    pass


class RationalityViolation(InvariantViolation):
    pass


class NotConverged(NumericalError):
    pass


class Theorem2cViolation(InvariantViolation):
    pass


# chebyshev
class StalledExchange(NumericalError):
    pass


class ReferenceCollapse(NumericalError):
    pass


class OrderingViolation(InvariantViolation):
    pass


# experiments
class DepthTooLarge(InputError):
    pass


class RatioOutOfRange(InputError):
    pass


class MechanismViolation(InvariantViolation):
    pass
