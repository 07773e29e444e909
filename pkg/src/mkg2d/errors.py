"""Exception hierarchy shared across the package."""


class Mkg2dError(Exception):
    """Base class for all package errors."""


class ConfigurationError(Mkg2dError):
    """Invalid configuration value or combination."""


class ShapeError(Mkg2dError):
    """Fields live on incompatible grids."""


class PreconditionError(Mkg2dError):
    """An operation's stated precondition is violated."""


class DegenerateInputError(Mkg2dError):
    """Input makes the requested quantity undefined (e.g. zero denominator)."""


class BlowUpError(Mkg2dError):
    """NaN/Inf detected during time stepping."""

    def __init__(self, t: float, message: str = ""):
        self.t = t
        super().__init__(message or f"non-finite field values at t={t:.6g}")


class AdmissibilityError(Mkg2dError):
    """Regularity triple rejected; carries the violated constraint names."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__(
            "regularity not admissible; violated: " + "; ".join(self.violations)
        )


class SnapshotError(Mkg2dError):
    """Base class for snapshot file problems."""


class SnapshotMagicError(SnapshotError):
    """File does not start with the expected magic bytes."""


class SnapshotVersionError(SnapshotError):
    """Unsupported snapshot format version."""


class SnapshotTruncatedError(SnapshotError):
    """File ends before the declared payload is complete."""


class SnapshotChecksumError(SnapshotError):
    """Payload CRC does not match the stored checksum."""
