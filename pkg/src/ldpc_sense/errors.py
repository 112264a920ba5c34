"""Exception types shared across the package."""


class LdpcSenseError(Exception):
    """Base class for all errors raised by ldpc_sense."""


class DimensionMismatch(LdpcSenseError, ValueError):
    pass


class CapExceeded(LdpcSenseError):
    """An exhaustive enumeration would exceed the caller-supplied cap."""


class ConstructionError(LdpcSenseError, ValueError):
    pass


class ExpansionTooWeak(LdpcSenseError, ValueError):
    pass


class InfeasibleError(LdpcSenseError):
    pass


class NotInNullspace(LdpcSenseError, ValueError):
    pass


class HypothesisNotCertified(LdpcSenseError):
    """A guarantee was requested for a matrix whose hypothesis was not verified."""


class AlistParseError(LdpcSenseError, ValueError):
    pass


class RowTooDense(LdpcSenseError, ValueError):
    pass


class NoSolutionFound(LdpcSenseError):
    pass
