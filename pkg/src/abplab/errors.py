"""Exception types raised across the package."""


class AbpLabError(Exception):
    """Base class for all library errors."""


class ShapeMismatch(AbpLabError, ValueError):
    pass


class NegativeExponentPresent(AbpLabError, ValueError):
    """A Laurent coefficient still carries a pole at eps = 0."""


class ZeroTensor(AbpLabError, ValueError):
    pass


class ModeOutOfRange(AbpLabError, IndexError):
    pass


class HypothesisViolated(AbpLabError, ValueError):
    """The input does not satisfy the preconditions of a theorem-backed routine."""


class EvenDegreeUnsupported(HypothesisViolated):
    pass


class NotMonotoneEps(AbpLabError, ValueError):
    pass


class NotSingleModel(AbpLabError, ValueError):
    pass


class NotDivisibleByEps(AbpLabError, ValueError):
    pass


class OutputHasNegativeEps(AbpLabError, ValueError):
    pass


class SinkReachable(AbpLabError, AssertionError):
    """Internal invariant failure: the sink was reached through non-eps edges."""


class Disconnected(AbpLabError, ValueError):
    pass


class FormatTooLarge(AbpLabError, ValueError):
    pass
