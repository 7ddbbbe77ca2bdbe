"""Exception hierarchy shared by all modules."""


class RandCoverError(Exception):
    """Base class for all package errors."""


class InvalidInputError(RandCoverError, ValueError):
    pass


class UnsupportedGeometryError(RandCoverError):
    """Rectangle too large to lift unambiguously (diameter >= 1/2)."""


class DoesNotFitError(RandCoverError):
    pass


class NotInjectiveError(RandCoverError):
    pass


class NotContractiveError(RandCoverError):
    pass


class NotContractiveYetError(RandCoverError):
    """Phi^s >= 1 inside the requested window; raise N_min."""


class UnsupportedError(RandCoverError):
    pass


class WindowTooSmallError(RandCoverError):
    pass


class FeasibilityError(RandCoverError):
    """A level plan cannot be realised below the index ceiling.

    ``level`` is the first infeasible level and ``conditions`` lists
    ``(level, condition)`` pairs whose lower bound on n_k overflows.
    """

    def __init__(self, message, level, conditions):
        super().__init__(message)
        self.level = level
        self.conditions = list(conditions)


class DegeneratePlanError(RandCoverError):
    pass


class StreamExhaustedError(RandCoverError):
    pass


class ResolutionTooFineError(RandCoverError):
    pass
