"""Exception types shared across the package."""


class CtsortError(Exception):
    """Base class for all package-specific errors."""


class RegexSyntaxError(CtsortError):
    """Malformed regular expression; carries the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class CapExceeded(CtsortError):
    """A configured resource cap (state count, enumeration size, ...) was hit."""
