"""
Exception hierarchy for the Fermat quotient sequence toolkit
Each error carries the process exit code the command line maps it to
"""
from typing import Optional

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_CAPACITY = 3


class FermatSeqError(Exception):
    """Base class for every error raised by the toolkit"""
    exit_code = EXIT_MISMATCH


class ParameterError(FermatSeqError, ValueError):
    """Invalid argument: not an odd prime, index out of range, bad divisor"""
    exit_code = EXIT_USAGE


class CapacityError(FermatSeqError):
    """A configured cap (field degree, prime size) would be exceeded"""
    exit_code = EXIT_CAPACITY

    def __init__(self, message: str, cap: Optional[int] = None):
        super().__init__(message)
        self.cap = cap


class InvariantViolation(FermatSeqError):
    """Internal consistency failure; points at an arithmetic bug"""
    exit_code = EXIT_MISMATCH

    def __init__(self, message: str, index: Optional[int] = None):
        if index is not None:
            message = f"{message} (at index {index})"
        super().__init__(message)
        self.index = index


class VerificationMismatch(FermatSeqError):
    """Measured value disagrees with the theorem or with another method"""
    exit_code = EXIT_MISMATCH


class SequenceFileError(FermatSeqError):
    """Reading or writing a sequence, spectrum or report file failed"""
    exit_code = EXIT_MISMATCH

    def __init__(self, message: str, path: Optional[str] = None):
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message)
        self.path = path
