"""Exception types shared across the gridplan package."""


class GridplanError(Exception):
    """Base class for all gridplan errors."""


class MissingFile(GridplanError):
    """A config or data file does not exist."""


class SchemaViolation(GridplanError):
    """A config or CSV file is malformed (names the offending field/row)."""


class LengthMismatch(GridplanError):
    """A time series does not have exactly the configured horizon length."""


class InvariantViolation(GridplanError):
    """Loaded data violates a documented invariant."""


class DomainError(GridplanError):
    """An argument is outside the mathematical domain of an operation."""


class ModelAssemblyError(GridplanError):
    """The LP cannot be assembled; the message names the failed precondition."""


class NumericalBreakdown(GridplanError):
    """The solver lost numerical control (message carries diagnostics)."""


class NameMapOverflow(GridplanError):
    """MPS name sanitization cannot stay bijective."""


class UnknownColumn(GridplanError):
    """An external solution references a column not present in the model."""


class ResidualTooLarge(GridplanError):
    """An imported solution violates constraint residual tolerances."""


class MismatchedScenarios(GridplanError):
    """Two runs being compared do not share a comparable scenario."""
