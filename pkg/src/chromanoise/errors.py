"""Exception taxonomy shared by all chromanoise modules.

The CLI maps these onto process exit codes: validation/state/format
problems exit 2, numerical failures exit 3.
"""


class ChromanoiseError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ChromanoiseError, ValueError):
    """An argument or precondition was invalid."""


class UnsatisfiableTargetError(ValidationError):
    """A requested positive-ratio target falls outside [0, 1]."""


class UnknownColorError(ValidationError):
    """A color name is not in the registry; carries the known names."""

    def __init__(self, name: str, known: tuple[str, ...]):
        self.name = name
        self.known = known
        super().__init__(
            f"unknown color {name!r}; available colors: {', '.join(known)}"
        )


class FormatError(ValidationError):
    """A file did not conform to its on-disk format."""


class EmptyRegionError(ValidationError):
    """A region selected for statistics contains no pixels."""


class StateError(ChromanoiseError, RuntimeError):
    """An operation was invoked on an object in the wrong state."""


class NumericalFailureError(ChromanoiseError, ArithmeticError):
    """A sampler iteration produced a non-finite intermediate."""

    def __init__(self, step: int, timestep: int):
        self.step = step
        self.timestep = timestep
        super().__init__(
            f"non-finite values at sampling step {step} (timestep {timestep})"
        )
