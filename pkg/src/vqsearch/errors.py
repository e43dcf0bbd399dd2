"""Exception types shared across the package."""


class CapacityError(ValueError):
    """Requested register exceeds the simulator's qubit budget."""


class ShapeError(ValueError):
    """Array, pattern or parameter vector has the wrong length or shape."""


class StructureError(RuntimeError):
    """A layer matrix does not have exactly one uniform-sign row."""
