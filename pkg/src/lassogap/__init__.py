"""Gap angles at a marked point of a closed hyperbolic surface.

The visual circle at a marked point decomposes into a countable union of
arcs, one per lasso-induced half-pants, whose angular widths sum to the
full turn. This package computes those widths in closed form, enumerates
the half-pants on explicit surfaces, and cross-checks every analytic value
against a Monte Carlo geodesic ray tracer.
"""

from .errors import (
    BudgetExceededError,
    ConstructionFailedError,
    DegenerateConfigurationError,
    DegeneratePositionError,
    DomainError,
    InvalidHalfPantsError,
    InvalidIsometryError,
    InvalidPantsError,
    InvalidParametersError,
    LassogapError,
    LookupFailedError,
    NotHyperbolicError,
    NotLassoInducibleError,
    NotPrimitiveError,
    VertexHitError,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "ConstructionFailedError",
    "DegenerateConfigurationError",
    "DegeneratePositionError",
    "DomainError",
    "InvalidHalfPantsError",
    "InvalidIsometryError",
    "InvalidPantsError",
    "InvalidParametersError",
    "LassogapError",
    "LookupFailedError",
    "NotHyperbolicError",
    "NotLassoInducibleError",
    "NotPrimitiveError",
    "VertexHitError",
    "__version__",
]
