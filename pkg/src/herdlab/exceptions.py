"""Exception hierarchy. The CLI maps each class to an exit code."""


class HerdlabError(Exception):
    """Base class for all errors raised by herdlab."""


class ConfigError(HerdlabError, ValueError):
    """Invalid parameters or run configuration."""


class DomainError(HerdlabError, ValueError):
    """An argument lies outside the domain of a function."""


class IngestionError(HerdlabError, ValueError):
    """A CSV file could not be read or contains invalid rows."""


class DegenerateInputError(HerdlabError, ValueError):
    """A statistic is undefined for the input (e.g. zero variance)."""


class InvariantError(HerdlabError, RuntimeError):
    """An internal invariant was violated. Indicates a bug."""
