"""Exception hierarchy shared by every module."""


class MWreathError(Exception):
    """Base class for all errors raised by mwreath."""


class InvalidInput(MWreathError, ValueError):
    """Malformed user input (maps to CLI exit code 2)."""


class NotConnected(InvalidInput):
    pass


class NotMedian(InvalidInput):
    def __init__(self, triple, count):
        self.triple = tuple(triple)
        self.count = count
        super().__init__(
            f"triple {self.triple} has {count} median points (expected exactly 1)"
        )


class WallNotConvex(MWreathError):
    pass


class NotConvex(InvalidInput):
    pass


class AmbientMismatch(MWreathError, ValueError):
    pass


class TooLarge(MWreathError):
    pass


class EmptySet(InvalidInput):
    pass


class InvalidAction(InvalidInput):
    pass


class OrbitNotClosed(MWreathError):
    pass


class SupportOutsideModel(MWreathError):
    pass


class TruncationTooSmall(MWreathError):
    pass


class BoundExceeded(MWreathError):
    pass


class InvalidDocument(InvalidInput):
    pass


class IoError(MWreathError, OSError):
    pass
