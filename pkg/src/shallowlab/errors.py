"""Exception hierarchy shared by all shallowlab modules."""


class ShallowLabError(Exception):
    """Base class for every error raised by this package."""


class DegenerateInput(ShallowLabError):
    pass


class InvalidDepth(ShallowLabError):
    pass


class ParameterRange(ShallowLabError):
    pass


class EpsilonTooLarge(ShallowLabError):
    pass


class PaddingUnverifiable(ShallowLabError):
    pass


class InvalidPartition(ShallowLabError):
    pass


class InvalidInput(ShallowLabError):
    pass


class OracleTooLarge(ShallowLabError):
    pass


class HypothesisViolated(ShallowLabError):
    """The coloring breaks a lemma hypothesis; the path found is still attached."""

    def __init__(self, message, path=None, distinct=None):
        super().__init__(message)
        self.path = path
        self.distinct = distinct
