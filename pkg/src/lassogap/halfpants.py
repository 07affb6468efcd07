"""Closed-form gap angles for lasso-induced half-pants.

A half-pants is specified by its cuff length, the length of the based
geodesic loop at the marked point (the zipper once the half-pants is cut
open), and, for the non-embedded cases, the position parameters (tau,
delta) of the marked point together with a signed wrap count n. Each
topological case has its own closed form built from the perpendicular-
to-chord kernel theta and one shared arcsin blocking angle; this module
evaluates them and records the individual contributions so every value
can be audited term by term.

The arccosh ratio printed in the source formulas is inverted relative to
the trirectangle relation that grounds it (the printed argument is < 1
for every realizable half-pants); both readings are available behind
``ratio_orientation`` and the geometrically consistent one is the
default. Likewise the wrapped coordinate for n != 0 is implemented in a
chart-invariant form ("locked") and in the literal printed form.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import hyperbolic as hp
from .errors import (
    InvalidHalfPantsError,
    InvalidPantsError,
    InvalidParametersError,
)
from .hyperbolic import Angle, clamp_unit

__all__ = [
    "TopoType",
    "HalfPantsParams",
    "GapBreakdown",
    "spiral_angle",
    "gap_embedded",
    "gap_three_holed_n0",
    "gap_three_holed_nonzero",
    "gap_one_holed_torus",
    "gap",
    "psi",
    "zipper_length",
    "twz_interior_summand",
    "twz_exterior_summand",
]

RATIO_ORIENTATIONS = ("corrected", "printed")
WRAP_CONVENTIONS = ("locked", "printed")

# Defaults resolved by the oracles: "corrected" by the trirectangle
# relation cosh(d) * sinh(l_cuff/2) = sinh(l_loop/2) (the printed ratio has
# arccosh argument < 1), "locked" by Monte Carlo agreement on harvested
# wrapped half-pants.
DEFAULT_RATIO_ORIENTATION = "corrected"
DEFAULT_WRAP_CONVENTION = "locked"


class TopoType(enum.Enum):
    """Topological type of a lasso-induced half-pants."""

    EMBEDDED = "embedded"
    THRICE_HOLED = "thrice_holed"
    ONE_HOLED_TORUS = "one_holed_torus"


@dataclass(frozen=True)
class HalfPantsParams:
    """Length and position parameters of one half-pants.

    l_cuff is the cuff length, l_loop the length of the based geodesic
    loop. tau in [0, l_cuff) positions the foot of the marked point's
    interior preimage along the cuff (origin at the zipper tip's foot),
    delta >= 0 is that preimage's distance to the cuff, and n counts
    signed wraps of the zipper tip. Embedded half-pants carry
    tau = delta = 0 and n = 0.

    l_loop > l_cuff is not validated here: each gap case checks its own
    domain at call time.
    """

    topo_type: TopoType
    l_cuff: float
    l_loop: float
    tau: float = 0.0
    delta: float = 0.0
    n: int = 0

    def __post_init__(self):
        if not isinstance(self.topo_type, TopoType):
            raise InvalidParametersError(f"not a TopoType: {self.topo_type!r}")
        for name in ("l_cuff", "l_loop", "tau", "delta"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParametersError(f"{name} must be finite")
        if self.l_cuff <= 0.0 or self.l_loop <= 0.0:
            raise InvalidParametersError("lengths must be positive")
        if not 0.0 <= self.tau < self.l_cuff:
            raise InvalidParametersError(
                f"tau = {self.tau!r} outside [0, l_cuff = {self.l_cuff!r})"
            )
        if self.delta < 0.0:
            raise InvalidParametersError("delta must be nonnegative")
        if self.n != int(self.n):
            raise InvalidParametersError("n must be an integer")
        if self.topo_type is TopoType.EMBEDDED and (
            self.tau != 0.0 or self.delta != 0.0 or self.n != 0
        ):
            raise InvalidParametersError(
                "embedded half-pants carry tau = delta = 0 and n = 0"
            )


@dataclass(frozen=True)
class GapBreakdown:
    """A gap angle plus the labeled contributions it was assembled from.

    The case formula applied to `terms` reproduces `gap` to 1e-12; see the
    computing function's docstring for each case's term labels.
    """

    gap: Angle
    terms: tuple[tuple[str, float], ...]

    def term(self, label: str) -> float:
        for key, value in self.terms:
            if key == label:
                return value
        raise KeyError(label)


# ---------------------------------------------------------------------------
# shared pieces


def _check_orientation(ratio_orientation: str) -> None:
    if ratio_orientation not in RATIO_ORIENTATIONS:
        raise InvalidParametersError(
            f"ratio_orientation must be one of {RATIO_ORIENTATIONS}"
        )


def _axis_distance(l_cuff: float, l_loop: float, ratio_orientation: str) -> float:
    """Third theta argument: the arccosh term of the gap formulas.

    Under "corrected" this is arccosh(sinh(l_loop/2)/sinh(l_cuff/2)), the
    distance from the loop's interior-side tip to the cuff axis by the
    trirectangle relation. "printed" evaluates the literal source ratio,
    whose argument is < 1 whenever l_loop > l_cuff.
    """
    _check_orientation(ratio_orientation)
    a = math.sinh(0.5 * l_cuff)
    b = math.sinh(0.5 * l_loop)
    arg = b / a if ratio_orientation == "corrected" else a / b
    if arg <= 1.0:
        raise InvalidParametersError(
            f"arccosh argument {arg:.6g} <= 1 under {ratio_orientation!r} "
            "orientation (needs l_loop > l_cuff)"
        )
    return math.acosh(arg)


def _blocked_angle(l_cuff: float, l_loop: float) -> float:
    # arcsin(sinh(l_cuff/2)/sinh(l_loop/2)): the angle of parallelism of
    # the tip-to-axis distance; directions inside it spiral without return
    ratio = math.sinh(0.5 * l_cuff) / math.sinh(0.5 * l_loop)
    if ratio >= 1.0:
        raise InvalidParametersError("needs l_loop > l_cuff")
    return math.asin(ratio)


def _spiral_terms(l_cuff: float, l_zip: float) -> tuple[float, float]:
    if not (math.isfinite(l_cuff) and math.isfinite(l_zip)) or not (
        0.0 < l_cuff < l_zip
    ):
        raise InvalidHalfPantsError(
            f"needs 0 < l_cuff < l_zip, got ({l_cuff!r}, {l_zip!r})"
        )
    t1 = math.asin(clamp_unit(math.cosh(0.5 * l_cuff) / math.cosh(0.5 * l_zip)))
    t2 = math.asin(clamp_unit(math.sinh(0.5 * l_cuff) / math.sinh(0.5 * l_zip)))
    return t1, t2


def _require_type(p: HalfPantsParams, topo_type: TopoType) -> None:
    if p.topo_type is not topo_type:
        raise InvalidParametersError(
            f"expected {topo_type.value} parameters, got {p.topo_type.value}"
        )


# ---------------------------------------------------------------------------
# spiral angle and the embedded case


def spiral_angle(l_cuff: float, l_zip: float) -> Angle:
    """Angle at the zipper tip between the zipper and a spiraling ray.

    arcsin(cosh(l_cuff/2)/cosh(l_zip/2)) - arcsin(sinh(l_cuff/2)/sinh(l_zip/2)),
    strictly positive for 0 < l_cuff < l_zip and below pi/2. Shrinks to 0
    both as l_zip -> l_cuff (degenerate half-pants) and as l_zip -> inf.
    """
    t1, t2 = _spiral_terms(l_cuff, l_zip)
    return Angle(t1 - t2)


def gap_embedded(l_cuff: float, l_loop: float) -> GapBreakdown:
    """Gap of an embedded half-pants: twice the spiral angle.

    Terms: arcsin_cosh_ratio, arcsin_sinh_ratio; the gap is
    2 * (first - second).
    """
    t1, t2 = _spiral_terms(l_cuff, l_loop)
    return GapBreakdown(
        gap=Angle(2.0 * (t1 - t2)),
        terms=(("arcsin_cosh_ratio", t1), ("arcsin_sinh_ratio", t2)),
    )


# ---------------------------------------------------------------------------
# thrice-holed sphere


def gap_three_holed_n0(
    p: HalfPantsParams, *, ratio_orientation: str = DEFAULT_RATIO_ORIENTATION
) -> GapBreakdown:
    """Gap of a thrice-holed-sphere half-pants with wrap count 0.

    max(theta(delta, tau, z) - A, 0) + max(theta(delta, l_cuff - tau, z) - A, 0)
    with z the arccosh term and A the blocking arcsin. Terms: theta_tau,
    theta_cuff_minus_tau, blocked_arcsin, wing_tau, wing_cuff_minus_tau.
    """
    _require_type(p, TopoType.THRICE_HOLED)
    if p.n != 0:
        raise InvalidParametersError("n = 0 case called with nonzero n")
    z = _axis_distance(p.l_cuff, p.l_loop, ratio_orientation)
    a_block = _blocked_angle(p.l_cuff, p.l_loop)
    th1 = float(hp.theta(p.delta, p.tau, z))
    th2 = float(hp.theta(p.delta, p.l_cuff - p.tau, z))
    wing1 = max(th1 - a_block, 0.0)
    wing2 = max(th2 - a_block, 0.0)
    return GapBreakdown(
        gap=Angle(wing1 + wing2),
        terms=(
            ("theta_tau", th1),
            ("theta_cuff_minus_tau", th2),
            ("blocked_arcsin", a_block),
            ("wing_tau", wing1),
            ("wing_cuff_minus_tau", wing2),
        ),
    )


def gap_three_holed_nonzero(
    p: HalfPantsParams,
    *,
    ratio_orientation: str = DEFAULT_RATIO_ORIENTATION,
    wrap_convention: str = DEFAULT_WRAP_CONVENTION,
) -> GapBreakdown:
    """Gap of a thrice-holed-sphere half-pants with nonzero wrap count.

    theta(delta, y, z) - max(A, theta(delta, y - l_cuff, z)) with the
    wrapped coordinate y = |n| * l_cuff - tau_eff, where tau_eff is tau for
    n > 0 and l_cuff - tau for n < 0 ("locked": invariant under
    re-orienting the cuff) or y = |n * l_cuff - tau| literally ("printed").
    The inner theta argument may be negative; theta is even in its second
    argument, and when the argument is negative the configuration it
    describes is vacuous and the max resolves to A (inner_theta_vacuous
    records this). Negative round-off is clamped to 0.

    Terms: theta_wrapped, theta_wrapped_minus_cuff, blocked_arcsin,
    inner_theta_vacuous, wrapped_coordinate.
    """
    _require_type(p, TopoType.THRICE_HOLED)
    if p.n == 0:
        raise InvalidParametersError("nonzero-n case called with n = 0")
    if wrap_convention not in WRAP_CONVENTIONS:
        raise InvalidParametersError(
            f"wrap_convention must be one of {WRAP_CONVENTIONS}"
        )
    z = _axis_distance(p.l_cuff, p.l_loop, ratio_orientation)
    a_block = _blocked_angle(p.l_cuff, p.l_loop)
    if wrap_convention == "printed":
        y = abs(p.n * p.l_cuff - p.tau)
    else:
        tau_eff = p.tau if p.n > 0 else p.l_cuff - p.tau
        y = abs(p.n) * p.l_cuff - tau_eff
    inner = y - p.l_cuff
    th_outer = float(hp.theta(p.delta, y, z))
    th_inner = float(hp.theta(p.delta, abs(inner), z))
    vacuous = inner < 0.0
    blocker = a_block if vacuous else max(a_block, th_inner)
    raw = th_outer - blocker
    return GapBreakdown(
        gap=Angle(min(max(raw, 0.0), math.pi)),
        terms=(
            ("theta_wrapped", th_outer),
            ("theta_wrapped_minus_cuff", th_inner),
            ("blocked_arcsin", a_block),
            ("inner_theta_vacuous", 1.0 if vacuous else 0.0),
            ("wrapped_coordinate", y),
        ),
    )


# ---------------------------------------------------------------------------
# one-holed torus


def psi(l_cuff: float, l_loop: float, delta: float) -> float:
    """Position threshold of the one-holed-torus case.

    0.5 * log(cosh(delta)^2/sinh(l_cuff/2)^2 - cosh(delta)^2/sinh(l_loop/2)^2);
    may be negative. Requires l_loop > l_cuff (the log argument is positive
    exactly then).
    """
    for name, v in (("l_cuff", l_cuff), ("l_loop", l_loop), ("delta", delta)):
        if not math.isfinite(v):
            raise InvalidParametersError(f"{name} must be finite")
    if l_cuff <= 0.0 or l_loop <= 0.0 or delta < 0.0:
        raise InvalidParametersError("lengths positive, delta nonnegative")
    c2 = math.cosh(delta) ** 2
    arg = c2 / math.sinh(0.5 * l_cuff) ** 2 - c2 / math.sinh(0.5 * l_loop) ** 2
    if arg <= 0.0:
        raise InvalidParametersError(
            f"log argument {arg:.6g} <= 0 (needs l_loop > l_cuff)"
        )
    return 0.5 * math.log(arg)


def gap_one_holed_torus(
    p: HalfPantsParams, *, ratio_orientation: str = DEFAULT_RATIO_ORIENTATION
) -> GapBreakdown:
    """Gap of a one-holed-torus half-pants.

    2 arcsin(cosh(l_cuff/2)/cosh(l_loop/2)) minus two theta terms whose
    second arguments are tau and l_cuff - tau shifted by the smallest cuff
    multiples that clear the threshold psi; theta is evaluated at the
    absolute shifted coordinate (it is even, and the coordinate is a signed
    position along the cuff axis). Negative round-off is clamped to 0.

    Terms: lead_arcsin, theta_tau_side, theta_far_side, ceil_index_tau,
    ceil_index_far, psi.
    """
    _require_type(p, TopoType.ONE_HOLED_TORUS)
    z = _axis_distance(p.l_cuff, p.l_loop, ratio_orientation)
    ps = psi(p.l_cuff, p.l_loop, p.delta)
    lead = 2.0 * math.asin(
        clamp_unit(math.cosh(0.5 * p.l_cuff) / math.cosh(0.5 * p.l_loop))
    )
    k1 = math.ceil((ps - p.tau) / p.l_cuff)
    k2 = math.ceil((ps - (p.l_cuff - p.tau)) / p.l_cuff)
    y1 = p.l_cuff * k1 + p.tau
    y2 = p.l_cuff * k2 + (p.l_cuff - p.tau)
    th1 = float(hp.theta(p.delta, abs(y1), z))
    th2 = float(hp.theta(p.delta, abs(y2), z))
    raw = lead - th1 - th2
    return GapBreakdown(
        gap=Angle(min(max(raw, 0.0), math.pi)),
        terms=(
            ("lead_arcsin", lead),
            ("theta_tau_side", th1),
            ("theta_far_side", th2),
            ("ceil_index_tau", float(k1)),
            ("ceil_index_far", float(k2)),
            ("psi", ps),
        ),
    )


# ---------------------------------------------------------------------------
# dispatch


def gap(
    p: HalfPantsParams,
    *,
    ratio_orientation: str = DEFAULT_RATIO_ORIENTATION,
    wrap_convention: str = DEFAULT_WRAP_CONVENTION,
) -> GapBreakdown:
    """Gap angle of any half-pants; dispatches on the topological type."""
    if p.topo_type is TopoType.EMBEDDED:
        return gap_embedded(p.l_cuff, p.l_loop)
    if p.topo_type is TopoType.THRICE_HOLED:
        if p.n == 0:
            return gap_three_holed_n0(p, ratio_orientation=ratio_orientation)
        return gap_three_holed_nonzero(
            p,
            ratio_orientation=ratio_orientation,
            wrap_convention=wrap_convention,
        )
    return gap_one_holed_torus(p, ratio_orientation=ratio_orientation)


# ---------------------------------------------------------------------------
# pants-level conversion and the cone-surface summands


def zipper_length(l1: float, l2: float, theta_p: float) -> float:
    """Zipper length of the pants with boundary lengths l1, l2 and cone
    angle theta_p at the third boundary point.

    cosh^2(lz/2) = (cosh^2(l1/2) + cosh^2(l2/2)
                    + 2 cos(theta_p/2) cosh(l1/2) cosh(l2/2)) / sin^2(theta_p/2).

    Length 0 encodes a cusp. The right side exceeds 1 for every real input
    (it factors as 1 + (cos + cosh((l1-l2)/2))(cos + cosh((l1+l2)/2))/sin^2),
    so the guard below only trips on non-real degeneracies.
    """
    if not (math.isfinite(l1) and math.isfinite(l2)) or l1 < 0.0 or l2 < 0.0:
        raise InvalidPantsError(f"boundary lengths must be >= 0, got {(l1, l2)!r}")
    if not math.isfinite(theta_p) or not 0.0 < theta_p < 2.0 * math.pi:
        raise InvalidPantsError(f"cone angle must be in (0, 2*pi), got {theta_p!r}")
    ch1 = math.cosh(0.5 * l1)
    ch2 = math.cosh(0.5 * l2)
    half = 0.5 * theta_p
    s2 = math.sin(half) ** 2
    val = (ch1 * ch1 + ch2 * ch2 + 2.0 * math.cos(half) * ch1 * ch2) / s2
    if val < 1.0:
        raise InvalidPantsError(f"cosh^2(lz/2) = {val:.6g} < 1: no realization")
    return 2.0 * math.acosh(math.sqrt(val))


def _check_summand_domain(l1: float, l2: float, theta_p: float) -> None:
    if not (math.isfinite(l1) and math.isfinite(l2)) or l1 < 0.0 or l2 < 0.0:
        raise InvalidPantsError(f"boundary lengths must be >= 0, got {(l1, l2)!r}")
    if not math.isfinite(theta_p) or not 0.0 < theta_p <= math.pi:
        raise InvalidPantsError(f"cone angle must be in (0, pi], got {theta_p!r}")


def twz_interior_summand(
    l1: float, l2: float, theta_p: float, *, form: str = "arctan"
) -> Angle:
    """Cone-surface identity summand for an interior pair of pants.

    2 arctan(sin(theta_p/2)/(cos(theta_p/2) + exp((l1+l2)/2))). The
    "zipper" form evaluates the underlying two-half-pants arcsin chain
    through zipper_length instead; both agree to 1e-12.
    """
    _check_summand_domain(l1, l2, theta_p)
    half = 0.5 * theta_p
    if form == "arctan":
        return Angle(
            2.0 * math.atan(math.sin(half) / (math.cos(half) + math.exp(0.5 * (l1 + l2))))
        )
    if form != "zipper":
        raise InvalidParametersError("form must be 'arctan' or 'zipper'")
    lz = zipper_length(l1, l2, theta_p)
    total = 0.0
    for l_cuff in (l1, l2):
        total += math.asin(clamp_unit(math.cosh(0.5 * l_cuff) / math.cosh(0.5 * lz)))
        total -= math.asin(clamp_unit(math.sinh(0.5 * l_cuff) / math.sinh(0.5 * lz)))
    return Angle(total)


def twz_exterior_summand(
    l1: float, l2: float, theta_p: float, *, form: str = "arctan"
) -> Angle:
    """Cone-surface identity summand for a pair of pants with exterior
    cuff l2.

    theta_p/2 - arctan(sin(theta_p/2) sinh(l1/2) /
                       (cos(theta_p/2) cosh(l1/2) + cosh(l2/2))).
    The "arcsin" form evaluates the three-arcsin expression through
    zipper_length instead; both agree to 1e-12. Value in (0, theta_p/2].
    """
    _check_summand_domain(l1, l2, theta_p)
    half = 0.5 * theta_p
    if form == "arctan":
        num = math.sin(half) * math.sinh(0.5 * l1)
        den = math.cos(half) * math.cosh(0.5 * l1) + math.cosh(0.5 * l2)
        return Angle(half - math.atan(num / den))
    if form != "arcsin":
        raise InvalidParametersError("form must be 'arctan' or 'arcsin'")
    lz = zipper_length(l1, l2, theta_p)
    val = (
        math.asin(clamp_unit(math.cosh(0.5 * l1) / math.cosh(0.5 * lz)))
        - math.asin(clamp_unit(math.sinh(0.5 * l1) / math.sinh(0.5 * lz)))
        + math.asin(clamp_unit(math.cosh(0.5 * l2) / math.cosh(0.5 * lz)))
    )
    return Angle(val)
