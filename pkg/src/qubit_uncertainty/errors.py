"""Exception types raised across the package."""


class UncertaintyError(ValueError):
    """Base class for invalid inputs to the uncertainty-relation routines."""


class ZeroDirection(UncertaintyError):
    pass


class NotAState(UncertaintyError):
    pass


class DomainError(UncertaintyError):
    pass


class DimensionMismatch(UncertaintyError):
    pass


class TooManyObservables(UncertaintyError):
    pass


class DegenerateTriple(UncertaintyError):
    pass


class ParallelObservables(UncertaintyError):
    pass


class NotRealizable(UncertaintyError):
    pass


class UnknownRelation(UncertaintyError):
    pass


class UnsupportedSetSize(UncertaintyError):
    pass


class TrivialObservable(UncertaintyError):
    pass
