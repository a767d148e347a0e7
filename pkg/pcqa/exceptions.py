"""Exception hierarchy for PCQA.

Library code raises these; only the CLI turns them into exit codes.
"""


class PcqaError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class UsageError(PcqaError):
    """Bad flags, bad paths or invalid configuration."""

    exit_code = 2


class DataError(PcqaError):
    """Input data is malformed or violates a precondition."""

    exit_code = 3


class NumericalError(PcqaError):
    """A numerical routine failed (zero variance, domain violation, ...)."""

    exit_code = 4


class PlyParseError(DataError):
    """Malformed PLY stream.

    Attributes:
        offset: Byte offset into the stream where the problem was detected.
    """

    def __init__(self, message: str, offset: int) -> None:
        self.offset = offset
        super().__init__(f"{message} (at byte offset {offset})")


class DegenerateInputError(DataError):
    """Input is too small or too flat for the requested operation."""


class DimensionMismatchError(DataError):
    """Paired inputs do not share dimensions."""


class MissingAttributeError(DataError):
    """A cloud lacks colors or normals that an operation requires."""


class ZeroVarianceError(NumericalError):
    """A standardisation or correlation was asked of a constant vector."""
