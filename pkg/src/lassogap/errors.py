"""Exception hierarchy.

Every failure mode that callers are expected to branch on gets its own
class; all inherit from LassogapError so CLI entry points can convert any
library failure into a config/budget exit status without enumerating types.
"""

from __future__ import annotations


class LassogapError(Exception):
    """Base class for all library errors."""


class InvalidIsometryError(LassogapError):
    """Matrix is not (renormalizable to) a unit-determinant real matrix."""


class DomainError(LassogapError):
    """Numeric input outside the mathematical domain of an operation."""


class DegenerateConfigurationError(LassogapError):
    """Geometric configuration has no well-defined answer.

    Raised for overlapping collinear segments and for angle-kernel
    evaluations whose denominator vanishes (coincident points).
    """


class NotHyperbolicError(LassogapError):
    """Translation length requested for a non-hyperbolic isometry."""


class InvalidHalfPantsError(LassogapError):
    """Half-pants side lengths violate cuff < zipper ordering."""


class InvalidParametersError(LassogapError):
    """Gap/psi parameter tuple outside its validity domain."""


class InvalidPantsError(LassogapError):
    """Pair-of-pants data admits no hyperbolic realization."""


class ConstructionFailedError(LassogapError):
    """Surface construction did not meet its residual acceptance gate."""


class LookupFailedError(LassogapError):
    """Point location exceeded its wall-crossing budget."""


class VertexHitError(LassogapError):
    """Ray exits the fundamental domain through (or too near) a vertex.

    Callers retry with a small direction jitter; see surfaces.unfold_ray.
    """


class BudgetExceededError(LassogapError):
    """Enumeration or tree expansion exceeded its configured cap."""

    def __init__(self, message: str, checkpoint: dict | None = None):
        super().__init__(message)
        self.checkpoint = checkpoint  # partial state, serializable


class NotLassoInducibleError(LassogapError):
    """Loop is both non-simple and crossing its free geodesic."""


class NotPrimitiveError(LassogapError):
    """Loop word is a proper power."""


class DegeneratePositionError(LassogapError):
    """Marked point lies on a cuff axis (distance 0): parameters undefined."""
