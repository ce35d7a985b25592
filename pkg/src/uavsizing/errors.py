"""Exception hierarchy shared by all modules."""


class SizingError(Exception):
    """Base class for every error raised by uavsizing."""


class DomainError(SizingError, ValueError):
    """An argument lies outside the domain of a model equation."""


class GeometryError(SizingError):
    """No hover layout achieves full coverage."""


class NoInteriorOptimumError(SizingError):
    """The elevation-angle derivative has no sign change on the search interval."""


class InfeasibleFlightError(SizingError):
    """A sortie cannot be flown (transit too long or counter-wind speed beyond the envelope)."""


class ConfigurationError(SizingError, ValueError):
    """Inconsistent or missing configuration."""


class DataError(SizingError, ValueError):
    """Input series are malformed or inconsistent."""


class ParseError(DataError):
    """A data file failed to parse. Carries the offending row and column when known."""

    def __init__(self, message, row=None, column=None, path=None):
        self.row = row
        self.column = column
        self.path = path
        where = []
        if path is not None:
            where.append(str(path))
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class PreconditionError(SizingError):
    """The caller broke a documented precondition."""


class CoverageInfeasibleError(SizingError):
    """The rate requirement cannot be met by any swarm of at most ten UAVs."""


class BudgetInfeasibleError(SizingError):
    """No energy system fits inside the budget."""
