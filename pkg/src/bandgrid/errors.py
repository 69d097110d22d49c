"""Exception hierarchy shared by the library and the CLI."""


class BandGridError(Exception):
    """Base class for every error raised by bandgrid."""

    exit_code = 1


class ConfigurationError(BandGridError, ValueError):
    """Inconsistent or invalid settings (dimensions, policies, band counts)."""

    exit_code = 4


class DataError(BandGridError, ValueError):
    """Input data that cannot be used: NaN values, unknown labels, bad rows."""

    exit_code = 3
