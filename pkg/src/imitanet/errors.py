"""Exception types shared across the package."""


class ImitanetError(Exception):
    """Base class for package-specific failures."""


class PreconditionError(ImitanetError, ValueError):
    """A documented operation precondition does not hold."""


class StateError(ImitanetError, RuntimeError):
    """An operation was invoked in a state where it has no defined result."""


class NonConvergenceError(ImitanetError, RuntimeError):
    """A bounded relaxation exceeded its switch budget."""


class GenerationError(ImitanetError, RuntimeError):
    """Random instance generation exhausted its attempt budget."""


class InternalInvariantError(ImitanetError, RuntimeError):
    """A guaranteed invariant failed; this signals a bug, not bad input."""
