"""Exception taxonomy shared by all bfix modules."""


class BfixError(Exception):
    """Base class for every error raised by this package."""


class DistanceDomainError(BfixError):
    """A distance evaluator produced a negative or non-finite value."""


class ParameterError(BfixError):
    """A constructor or operation parameter is outside its allowed range."""


class NotABMetric(BfixError):
    """A candidate distance table fails the b-metric axioms for its declared s."""


class EmptySetError(BfixError):
    """A set-valued argument that must be non-empty is empty."""


class RangeError(BfixError):
    """A user-supplied function returned a value outside its declared range."""


class DomainError(BfixError):
    """A function was evaluated outside its declared domain."""


class PreconditionError(BfixError):
    """A stated precondition of an operation does not hold."""


class LengthError(BfixError):
    """A sequence argument is shorter than the operation requires."""


class AdmissibleSuccessorNotFound(BfixError):
    """No candidate successor passes the admissibility threshold."""


class ConfigError(BfixError):
    """An experiment configuration document is invalid."""
