"""Common exception base for the package.

Every domain error raised by this package derives from DoodleSearchError so
batch entry points can distinguish expected failures (bad input, bad file)
from genuine bugs.
"""


class DoodleSearchError(Exception):
    """Base class for all domain errors."""

    code = "error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__ or self.code)
