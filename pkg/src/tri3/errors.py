"""Exception types shared across the package."""

from __future__ import annotations


class DimensionMismatchError(ValueError):
    """Operands live in spaces of different dimensions."""


class NotNestedError(ValueError):
    """A quotient was requested for subspaces that are not nested."""


class ShapeError(ValueError):
    """A structure tensor does not have the shape its declared dimensions demand."""


class InconsistentSystemError(ValueError):
    """Modules or a pairing refer to the wrong acting algebras."""


class ValidationError(ValueError):
    """An instance failed one or more axiom checks.

    ``violations`` holds the individual :class:`tri3.algebra.Violation` records.
    """

    def __init__(self, violations, message: str | None = None) -> None:
        self.violations = list(violations)
        if message is None:
            head = "; ".join(str(v) for v in self.violations[:5])
            more = len(self.violations) - 5
            message = head + (f" (+{more} more)" if more > 0 else "")
        super().__init__(message)


class NonUnitalError(ValueError):
    """An operation that needs unital corner algebras got a non-unital one."""


class NotADerivationError(ValueError):
    """A linear map expected to be a derivation breaks the Leibniz rule."""


class CornerStructureError(RuntimeError):
    """A derivation of the triangular algebra has an impossible block pattern.

    ``case`` is the index (1-9) of the basis-element family whose image
    had the wrong shape.
    """

    def __init__(self, case: int, message: str) -> None:
        self.case = case
        super().__init__(f"case {case}: {message}")


class PreconditionError(ValueError):
    """Inputs to a constructor violate an identity it relies on."""

    def __init__(self, identity: str, message: str) -> None:
        self.identity = identity
        super().__init__(f"{identity}: {message}")


class InvariantError(AssertionError):
    """An internal invariant failed; this always indicates a bug."""


class ParseError(ValueError):
    """An instance file is malformed. ``location`` says where."""

    def __init__(self, message: str, location: str = "") -> None:
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)
