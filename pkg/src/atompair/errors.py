"""Exception types raised by the simulation and design layers."""


class AtomPairError(Exception):
    """Base class for all package-specific failures."""


class InvariantViolationError(AtomPairError):
    """A state broke a physicality invariant (trace, Hermiticity, positivity).

    Raised instead of silently repairing the state, so that integrator or
    construction bugs surface immediately.
    """

    def __init__(self, message, *, time=None, metric=None, value=None):
        super().__init__(message)
        self.time = time
        self.metric = metric
        self.value = value


class DegenerateSteadyStateError(AtomPairError):
    """The stationary linear system is degenerate or ill-conditioned."""

    def __init__(self, message, *, condition_number=None, residual=None):
        super().__init__(message)
        self.condition_number = condition_number
        self.residual = residual


class NoMaximumError(AtomPairError):
    """No usable population maximum was found within the search horizon."""

    def __init__(self, message, *, horizon=None):
        super().__init__(message)
        self.horizon = horizon


class StepUnderflowError(AtomPairError):
    """The required integrator step is too small to advance time in float64."""


class StepBudgetError(AtomPairError):
    """The requested evolution needs more steps than the configured budget."""
