"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-contract input (bad ids, invalid weights, ...)."""


class CapExceeded(RuntimeError):
    """Instance is larger than an operation's documented size cap."""


class NotAPotential(ValueError):
    """A vertex labelling violates some arc-length constraint."""


class PerturbationFailed(RuntimeError):
    """Perturbation retries exhausted; carries the last candidate tried."""

    def __init__(self, message, last_candidate=None):
        super().__init__(message)
        self.last_candidate = last_candidate
