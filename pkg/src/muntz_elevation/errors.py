"""Exception hierarchy shared by all modules."""


class MuntzError(Exception):
    """Base class for errors raised by this package."""


class DomainError(MuntzError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class NonMonotoneExponentsError(DomainError):
    """Materialized exponents are not strictly increasing.

    ``index`` is the first position ``i`` with ``r_i >= r_{i+1}``.
    """

    def __init__(self, message, index):
        super().__init__(message)
        self.index = index


class PartitionError(DomainError):
    """A sequence violates the real-partition chain condition."""


class ControlPointError(MuntzError):
    """Control points could not be obtained for the requested basis."""


class NumericalFailure(MuntzError, ArithmeticError):
    """A computed quantity left its admissible range even after escalation.

    ``iteration`` is set when the failure happens inside an elevation run.
    """

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class ConfigError(MuntzError, ValueError):
    """Experiment configuration failed validation.

    ``errors`` maps dotted field paths to messages.
    """

    def __init__(self, errors):
        self.errors = dict(errors)
        text = "; ".join(f"{k}: {v}" for k, v in self.errors.items())
        super().__init__(f"invalid configuration: {text}")
