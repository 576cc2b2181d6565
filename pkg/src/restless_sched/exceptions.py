"""Exception types shared across the package."""


class RestlessSchedError(Exception):
    """Base class for domain errors."""


class DimensionMismatchError(RestlessSchedError, ValueError):
    pass


class InvalidBeliefError(RestlessSchedError, ValueError):
    """Belief vector violates the simplex constraints beyond repairable drift."""


class IncomparablePairError(RestlessSchedError):
    """Two belief vectors are not MLR-comparable.

    Signals a violated order-separation premise; carries the 1-based
    indices of the offending pair when known.
    """

    def __init__(self, first, second, message=None):
        self.first = first
        self.second = second
        super().__init__(
            message or f"beliefs {first} and {second} are MLR-incomparable"
        )


class ImpossibleObservationError(RestlessSchedError):
    """Filter update requested for an observation with (near-)zero likelihood."""


class ComplexSpectrumError(RestlessSchedError):
    """Transition matrix has complex eigenvalues; spectral machinery unsupported."""


class NonDiagonalizableError(RestlessSchedError):
    """Eigendecomposition residual too large; matrix treated as defective."""


class GenerationExhaustedError(RestlessSchedError):
    """Rejection sampling ran out of attempts."""

    def __init__(self, attempts, last_failure):
        self.attempts = attempts
        self.last_failure = last_failure
        super().__init__(
            f"gave up after {attempts} attempts (last failure: {last_failure})"
        )


class NodeBudgetExceededError(RestlessSchedError):
    """DP expansion exceeded the configured node budget."""

    def __init__(self, budget, n_projects, n_obs, horizon):
        self.budget = budget
        super().__init__(
            f"node budget {budget} exceeded for N={n_projects}, Y={n_obs}, T={horizon}"
        )


class CannotViolateError(RestlessSchedError):
    """Requested clause violation is impossible at the given dimensions."""
