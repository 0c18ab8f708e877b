"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Invalid model, channel or experiment parameters."""

    def __init__(self, message, key=None):
        self.key = key
        if key is not None and key not in message:
            message = f"{key}: {message}"
        super().__init__(message)


class ContractViolation(ValueError):
    """Input breaks a documented precondition (e.g. unclipped gradients)."""


class InfeasibleError(ValueError):
    """No parameter value satisfies the requested constraint."""


class DivergenceError(FloatingPointError):
    """A chain produced a non-finite state."""

    def __init__(self, round_index, message=None):
        self.round_index = round_index
        super().__init__(message or f"non-finite theta at round {round_index}")
