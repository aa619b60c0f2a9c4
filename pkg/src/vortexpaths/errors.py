"""Exception hierarchy.

Every error raised by the library derives from :class:`VortexPathsError`.
The CLI maps :class:`ValidationError` to exit code 1 and
:class:`NumericalError` to exit code 2.
"""

from __future__ import annotations


class VortexPathsError(Exception):
    """Base class for all library errors."""


class ValidationError(VortexPathsError, ValueError):
    """Invalid input: parameter out of range, malformed config, bad shape."""


class DomainError(ValidationError):
    """Argument outside the mathematical domain of a function."""


class PreconditionError(ValidationError):
    """Inputs do not satisfy the precondition of the requested reduction."""


class SchemaError(ValidationError):
    """Config document does not match the expected schema."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class NumericalError(VortexPathsError):
    """A numerical procedure failed or its result cannot be trusted."""


class DegenerateCubicError(NumericalError):
    """Cubic has a vanishing leading coefficient or a (near) repeated root."""


class NoOrbitError(NumericalError):
    """The radicand does not bracket a bounded orbit in the scan range.

    ``roots`` holds whatever sign changes the scan did find, so callers can
    still inspect an isolated turning point.
    """

    def __init__(self, message: str, roots: tuple[float, ...] = ()) -> None:
        super().__init__(message)
        self.roots = roots


class StepSizeUnderflowError(NumericalError):
    def __init__(self, t: float) -> None:
        super().__init__(f"step size underflow at t = {t!r}")
        self.t = t


class OutOfValidityWindowError(NumericalError):
    """The closed form was evaluated at a time where it does not give real Z."""

    def __init__(self, t: float, value: float, threshold: float, relation: str) -> None:
        super().__init__(
            f"closed form invalid at t = {t!r}: requires {relation} "
            f"{threshold!r}, got {value!r}"
        )
        self.t = t
        self.value = value
        self.threshold = threshold


class AsymptoteError(NumericalError):
    """Peakon evaluated at its vertical asymptote."""


class PeakonValidityError(ValidationError):
    """Peakon requested for coefficients where it does not solve the system."""


class BranchAmbiguityError(NumericalError):
    """The phase X could not be recovered consistently from (Z, dZ/dt)."""


class OutputError(VortexPathsError):
    """A file could not be read or written."""

    def __init__(self, path, reason: str) -> None:
        super().__init__(f"{path}: {reason}")
        self.path = str(path)
