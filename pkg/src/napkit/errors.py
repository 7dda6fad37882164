"""Error classes shared across the toolkit, one per failure category.

Each class carries a distinct process exit code so the command line
interface can report failures in a scriptable way.
"""

import builtins


class NapkitError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 2


class FormatError(NapkitError, ValueError):
    """A file or document does not follow its declared format."""

    exit_code = 3


class DataError(NapkitError, ValueError):
    """Structurally valid input carries invalid values.

    Examples: non-finite numbers, duplicate sample ids, absurd dimensions.
    """

    exit_code = 4


class ShapeError(NapkitError, ValueError):
    """Array or matrix dimensions do not line up."""

    exit_code = 5


class LookupError(NapkitError, builtins.LookupError):
    """A named layer, model, sample, or record does not exist."""

    exit_code = 6


class ParamError(NapkitError, ValueError):
    """A parameter value is outside its allowed domain."""

    exit_code = 7


class IoError(NapkitError, OSError):
    """Reading or writing a resource failed."""

    exit_code = 8
