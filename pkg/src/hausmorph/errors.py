"""Exception hierarchy shared by all modules."""


class HausmorphError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(HausmorphError):
    """A shape violates a structural invariant."""


class ValidationError(ShapeError):
    """Deep validation failure (self-intersection, bad nesting).

    ``ring_index`` is the index of the offending ring, counting rings in
    document order (outer ring first, then its holes, polygon by polygon).
    """

    def __init__(self, message, ring_index=None):
        if ring_index is not None:
            message = f"{message} (ring {ring_index})"
        super().__init__(message)
        self.ring_index = ring_index


class EmptyShapeError(ShapeError):
    """An operation that needs a non-empty (positive area) shape got an empty one."""


class WktParseError(HausmorphError):
    """Malformed well-known text.  ``position`` is a character offset."""

    def __init__(self, message, position):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class GeometryError(HausmorphError):
    """A geometric computation failed (as opposed to bad user input)."""
