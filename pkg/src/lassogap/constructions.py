"""Measurement-based oracles for the closed-form angle formulas.

Every function here re-derives a value by explicit construction in the
half-plane and direct measurement (distances between constructed points,
angles between measured tangent directions, root-finding on measured
quantities). They deliberately avoid the closed forms they are meant to
check: the only trigonometry used is the model's own distance and angle
primitives. They are slower than the formulas and exist purely as
cross-checks, both in the test suite and behind the CLI's residual
reports.
"""

from __future__ import annotations

import math

from scipy.optimize import brentq

from . import hyperbolic as hp
from .errors import DomainError, InvalidHalfPantsError, InvalidPantsError
from .hyperbolic import Geodesic, HPoint, Isometry

__all__ = [
    "theta_by_construction",
    "spiral_angle_by_construction",
    "half_pants_tip_angle",
    "cone_angle_by_construction",
    "zipper_length_by_construction",
]

_AXIS = Geodesic(0.0, math.inf)


def theta_by_construction(x: float, y: float, z: float) -> float:
    """Perpendicular-to-chord angle measured on an explicit configuration.

    Base line, a perpendicular carrying the apex Q at distance z, and a
    probe point P at distance x above the base at arclength y along it,
    on the same side as Q. The value is the angle at Q between the
    perpendicular (toward its foot) and the chord QP, folded to acute;
    that folded apex angle is what the closed-form kernel computes.
    """
    for name, v in (("x", x), ("y", y)):
        if not math.isfinite(v) or v < 0.0:
            raise DomainError(f"{name} must be finite and >= 0, got {v!r}")
    if not math.isfinite(z) or z <= 0.0:
        raise DomainError(f"z must be finite and > 0, got {z!r}")
    q = hp.point_from_axis(_AXIS, 0.0, math.sinh(z))
    p = hp.point_from_axis(_AXIS, y, math.sinh(x))
    foot = HPoint(0.0, 1.0)
    a = hp.angle_between(hp.tangent_direction(q, foot), hp.tangent_direction(q, p))
    return min(a, math.pi - a)


# ---------------------------------------------------------------------------
# half-pants tips


def _tip_configuration(l_cuff: float, l_zip: float) -> tuple[HPoint, Isometry]:
    """Zipper tip of the half-pants with the given cuff and zipper lengths.

    The cuff holonomy translates along the base line (a parabolic for a
    cusp cuff of length 0). The tip is placed on the symmetry
    perpendicular at the height where the MEASURED distance to its
    holonomy image equals l_zip, found by root-finding on that
    measurement, so no length formula enters.
    """
    if l_cuff > 0.0:
        iso = hp.translation_along(_AXIS, l_cuff)

        def loop_len(r: float) -> float:
            t = hp.point_from_axis(_AXIS, -0.5 * l_cuff, math.sinh(r))
            return hp.distance(t, hp.apply(iso, t))

        hi = 1.0
        while loop_len(hi) < l_zip:
            hi *= 2.0
            if hi > 400.0:
                raise InvalidPantsError("zipper length out of constructible range")
        r = brentq(lambda s: loop_len(s) - l_zip, 0.0, hi, xtol=1e-14, maxiter=200)
        return hp.point_from_axis(_AXIS, -0.5 * l_cuff, math.sinh(r)), iso

    iso = Isometry(1.0, 1.0, 0.0, 1.0)  # cusp cuff: unit parabolic

    def loop_len_h(h: float) -> float:
        t = HPoint(-0.5, h)
        return hp.distance(t, hp.apply(iso, t))

    lo = hi = 1.0
    while loop_len_h(lo) < l_zip:  # length grows as the horocycle shrinks
        lo *= 0.5
        if lo < 1e-150:
            raise InvalidPantsError("zipper length out of constructible range")
    while loop_len_h(hi) > l_zip:
        hi *= 2.0
        if hi > 1e150:
            raise InvalidPantsError("zipper length out of constructible range")
    h = brentq(lambda s: loop_len_h(s) - l_zip, lo, hi, xtol=1e-14, maxiter=200)
    return HPoint(-0.5, h), iso


def half_pants_tip_angle(l_cuff: float, l_zip: float) -> float:
    """Measured interior angle of a half-pants at its zipper tip.

    The angle between the two zipper strands leaving the tip, i.e.
    between the directions toward the holonomy image and preimage of the
    tip. l_cuff = 0 encodes a cusp cuff.
    """
    if not math.isfinite(l_cuff) or l_cuff < 0.0:
        raise InvalidPantsError(f"cuff length must be >= 0, got {l_cuff!r}")
    if not math.isfinite(l_zip) or l_zip <= l_cuff:
        raise InvalidPantsError(f"needs l_zip > l_cuff, got {(l_cuff, l_zip)!r}")
    tip, iso = _tip_configuration(l_cuff, l_zip)
    u = hp.tangent_direction(tip, hp.apply(iso, tip))
    w = hp.tangent_direction(tip, hp.apply(iso.inverse(), tip))
    return hp.angle_between(u, w)


def spiral_angle_by_construction(l_cuff: float, l_zip: float) -> float:
    """Spiral angle measured at an explicitly constructed zipper tip.

    The angle between the outgoing zipper strand and the ray from the tip
    to the cuff holonomy's attracting endpoint (the ray that spirals onto
    the cuff). Checks the two-quadrilateral closed form.
    """
    if not (
        math.isfinite(l_cuff) and math.isfinite(l_zip) and 0.0 < l_cuff < l_zip
    ):
        raise InvalidHalfPantsError(
            f"needs 0 < l_cuff < l_zip, got ({l_cuff!r}, {l_zip!r})"
        )
    tip, iso = _tip_configuration(l_cuff, l_zip)
    u = hp.tangent_direction(tip, hp.apply(iso, tip))
    # the attracting endpoint of the base translation is the top ideal
    # point, reached from anywhere along the vertical
    v = hp.tangent_direction(tip, HPoint(tip.x, 2.0 * tip.y))
    return hp.angle_between(u, v)


# ---------------------------------------------------------------------------
# cone pants


def cone_angle_by_construction(l1: float, l2: float, l_zip: float) -> float:
    """Cone angle of the pants assembled from two half-pants tips.

    The pants with boundary lengths l1, l2 and the given zipper is two
    half-pants glued along the zipper; their measured tip angles meet at
    the cone point and sum to its angle.
    """
    return half_pants_tip_angle(l1, l_zip) + half_pants_tip_angle(l2, l_zip)


def zipper_length_by_construction(l1: float, l2: float, theta_p: float) -> float:
    """Zipper length of the cone pants (l1, l2, theta_p) by construction.

    Root-solves the measured cone angle over the zipper length: each
    candidate builds both half-pants, realizes their zipper loops as
    shortest arcs between tip lifts, and measures the angles at the tips.
    Independent of the algebraic conversion relation. Cone angles are
    restricted to (0, pi], the range where the corner-angle pants
    realization exists.
    """
    if not (math.isfinite(l1) and math.isfinite(l2)) or l1 < 0.0 or l2 < 0.0:
        raise InvalidPantsError(f"boundary lengths must be >= 0, got {(l1, l2)!r}")
    if not math.isfinite(theta_p) or not 0.0 < theta_p <= math.pi:
        raise InvalidPantsError(f"cone angle must be in (0, pi], got {theta_p!r}")

    base = max(l1, l2)

    def residual(l_zip: float) -> float:
        return cone_angle_by_construction(l1, l2, l_zip) - theta_p

    lo = base + 1e-9 if base > 0.0 else 1e-9
    hi = base + 1.0
    while residual(hi) > 0.0:
        hi = base + 2.0 * (hi - base)
        if hi > base + 300.0:
            raise InvalidPantsError("cone angle too small to bracket")
    return brentq(residual, lo, hi, xtol=1e-12, maxiter=200)
