"""Exception types shared by every module."""


class CubeisoError(Exception):
    """Base class for all package errors."""


class InvalidInput(CubeisoError, ValueError):
    """A parameter is outside the domain of the operation."""


class OutOfHypothesis(CubeisoError, ValueError):
    """The inputs are well formed but violate a theorem's hypothesis.

    Bound evaluators raise this instead of extrapolating a formula past the
    range where it was proved.
    """


class ResourceLimit(CubeisoError, RuntimeError):
    """A search would exceed its configured budget."""


class BackendDisagreement(CubeisoError, AssertionError):
    """Two solver backends returned different optima for the same instance."""
