"""Error taxonomy shared by the CLI: each class maps to an exit code."""


class ImpactLabError(Exception):
    """Base class for tool-level failures."""

    exit_code = 1


class ConfigError(ImpactLabError):
    """Invalid or unknown configuration (exit code 2)."""

    exit_code = 2


class DataError(ImpactLabError):
    """Missing or malformed input data (exit code 3)."""

    exit_code = 3


class NumericError(ImpactLabError):
    """Numerical failure in an estimator or solver (exit code 4)."""

    exit_code = 4
