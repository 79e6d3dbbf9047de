class StrfpError(Exception):
    """Base class for all package errors."""

    exit_code = 3


class DataError(StrfpError, ValueError):
    """Malformed input data or file."""

    exit_code = 3


class GuardError(StrfpError):
    """Request exceeds a feasibility guard (e.g. exact enumeration size)."""

    exit_code = 4
