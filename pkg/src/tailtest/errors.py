"""Exception types shared across the library."""


class TailTestError(Exception):
    """Base class for library errors."""


class InputError(TailTestError):
    """Bad user input: files, distribution specs, malformed arguments."""


class InvalidModelError(TailTestError):
    """A CDF model returned values outside [0, 1] or violated monotonicity."""


class ConvergenceError(TailTestError):
    """Numerical inversion could not meet the requested tolerance."""

    def __init__(self, message, achieved_bound=None):
        super().__init__(message)
        self.achieved_bound = achieved_bound
