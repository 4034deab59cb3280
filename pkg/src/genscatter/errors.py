"""Exception hierarchy shared by every module.

The CLI maps these onto its exit codes: configuration problems exit with 2,
precondition violations with 4 and numerical failures with 3.
"""


class GenScatterError(Exception):
    """Base class for all library errors."""


class PreconditionError(GenScatterError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class DomainError(PreconditionError):
    pass


class PoleError(DomainError):
    pass


class InadmissiblePotentialError(PreconditionError):
    pass


class NumericalError(GenScatterError, RuntimeError):
    """A numerical procedure did not reach its requested accuracy."""


class QuadratureError(NumericalError):
    pass


class IntegrationError(NumericalError):
    pass


class MatchingError(NumericalError):
    """Asymptotic matching produced an ill-conditioned linear system."""


class DegenerateDesignError(PreconditionError):
    pass


class ConfigError(GenScatterError):
    pass
