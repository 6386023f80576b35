"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A configuration value is outside its allowed range."""


class InputError(ValueError):
    """Input data is malformed (non-finite values, wrong dtype)."""


class ContractError(ValueError):
    """Shapes or operator wiring do not chain together."""


class DomainError(ValueError):
    """Data violates a mathematical domain requirement (e.g. log of 0)."""


class FormatError(ValueError):
    """A file on disk does not match its declared format."""


class DivergenceError(RuntimeError):
    """The solver produced non-finite iterates."""

    def __init__(self, message: str, iteration: int):
        super().__init__(f"{message} (iteration {iteration})")
        self.iteration = iteration
