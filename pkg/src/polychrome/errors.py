"""Exception types shared across the package.

Every error that the CLI can surface carries a stable machine-readable
``code`` so JSON reports can name the failure class.
"""


class PolychromeError(Exception):
    code = "error"


class GeometryError(PolychromeError):
    code = "geometry"


class DegenerateShapeError(GeometryError):
    code = "degenerate-shape"


class PositionError(PolychromeError):
    """A predicate needed very general position and the input violates it."""

    code = "position"


class ConditioningError(PolychromeError):
    code = "conditioning"


class EnumerationError(PolychromeError):
    code = "enumeration"


class BudgetExhaustedError(PolychromeError):
    """A bounded search ran out of budget (the instance is dumped in args)."""

    code = "budget"


class NoGoodThreePathError(PolychromeError):
    """No good 3-path exists in a tree-induced range.

    For parallelograms and triangles this contradicts universal goodness and
    signals a bug; for other polygons it is the expected adversarial witness.
    """

    code = "no-good-3path"

    def __init__(self, message, range_indices=(), path=()):
        super().__init__(message)
        self.range_indices = tuple(range_indices)
        self.path = tuple(path)


class InputError(PolychromeError):
    code = "input"
