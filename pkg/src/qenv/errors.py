"""Exception types raised across the package."""


class QEnvError(ValueError):
    """Base class for domain errors (invalid channels, bad dimensions)."""


class DimensionError(QEnvError):
    """Matrix or channel dimensions are inconsistent with the request."""


class NotHermitianError(QEnvError):
    pass


class NotUnitaryError(QEnvError):
    pass


class NotIsometryError(QEnvError):
    pass


class NotTracePreservingError(QEnvError):
    """Kraus operators violate sum_i A_i^dagger A_i = 1 beyond tolerance."""


class NotCompletelyPositiveError(QEnvError):
    """A Choi matrix has an eigenvalue below the negative tolerance."""


class OutsideTetrahedronError(QEnvError):
    pass


class SchemaError(ValueError):
    """Input file is not valid JSON or does not follow the expected layout."""
