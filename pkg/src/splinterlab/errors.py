class SplinterLabError(Exception):
    pass


class DimensionError(SplinterLabError, ValueError):
    pass


class SizeCapError(SplinterLabError):
    """Raised instead of silently truncating an enumeration that is too large."""


class NotFullDimensionalError(SplinterLabError, ValueError):
    pass


class ProportionalQueryError(SplinterLabError, ValueError):
    def __init__(self, index: int):
        super().__init__(f"query is proportional to stream query #{index}")
        self.index = index


class VerificationError(SplinterLabError):
    """A certificate failed to recompute, or a theorem check was violated."""
