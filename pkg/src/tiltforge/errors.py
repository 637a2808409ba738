"""Exception hierarchy.  The CLI maps these onto exit codes."""


class TiltforgeError(Exception):
    exit_code = 3


class NotDynkinError(TiltforgeError):
    """The input is not of Dynkin (mutation) type."""

    exit_code = 1


class MalformedInputError(TiltforgeError, ValueError):
    exit_code = 2


class InternalError(TiltforgeError, AssertionError):
    """A consistency check failed; always indicates a bug, never bad input."""

    exit_code = 3
