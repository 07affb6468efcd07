"""High-precision re-evaluation of the closed-form angle formulas.

Every function mirrors its double-precision counterpart (same formula,
same branch choices) but runs the arithmetic in mpmath at a configurable
number of decimal digits, so chained arccosh/arcsin values can be
cross-checked with headroom below the 1e-9 .. 1e-12 tolerances used in
the test suite. Results come back as ordinary floats: the final rounding
step loses ~1e-16 relative, negligible at those tolerances.

Validation is left to the double-precision path; only the guards whose
absence would silently produce complex values are repeated here.
"""

from __future__ import annotations

import mpmath as mp

from .errors import InvalidParametersError
from .halfpants import (
    DEFAULT_RATIO_ORIENTATION,
    DEFAULT_WRAP_CONVENTION,
    HalfPantsParams,
    TopoType,
)

__all__ = [
    "DPS",
    "theta",
    "spiral_angle",
    "psi",
    "zipper_length",
    "twz_interior_summand",
    "twz_exterior_summand",
    "gap",
]

DPS = 50


def theta(x: float, y: float, z: float, *, dps: int = DPS) -> float:
    """Perpendicular-to-chord kernel at `dps` decimal digits."""
    with mp.workdps(dps):
        x, y, z = mp.mpf(x), mp.mpf(y), mp.mpf(z)
        n = mp.cosh(x) * mp.cosh(y) * mp.sinh(z) - mp.sinh(x) * mp.cosh(z)
        return float(mp.atan2(mp.cosh(x) * mp.sinh(y), abs(n)))


def spiral_angle(l_cuff: float, l_zip: float, *, dps: int = DPS) -> float:
    with mp.workdps(dps):
        a, b = mp.mpf(l_cuff) / 2, mp.mpf(l_zip) / 2
        return float(
            mp.asin(mp.cosh(a) / mp.cosh(b)) - mp.asin(mp.sinh(a) / mp.sinh(b))
        )


def psi(l_cuff: float, l_loop: float, delta: float, *, dps: int = DPS) -> float:
    with mp.workdps(dps):
        c2 = mp.cosh(mp.mpf(delta)) ** 2
        arg = c2 / mp.sinh(mp.mpf(l_cuff) / 2) ** 2 - c2 / mp.sinh(mp.mpf(l_loop) / 2) ** 2
        if arg <= 0:
            raise InvalidParametersError("log argument <= 0 (needs l_loop > l_cuff)")
        return float(mp.log(arg) / 2)


def zipper_length(l1: float, l2: float, theta_p: float, *, dps: int = DPS) -> float:
    with mp.workdps(dps):
        ch1 = mp.cosh(mp.mpf(l1) / 2)
        ch2 = mp.cosh(mp.mpf(l2) / 2)
        half = mp.mpf(theta_p) / 2
        val = (ch1**2 + ch2**2 + 2 * mp.cos(half) * ch1 * ch2) / mp.sin(half) ** 2
        return float(2 * mp.acosh(mp.sqrt(val)))


def twz_interior_summand(
    l1: float, l2: float, theta_p: float, *, dps: int = DPS
) -> float:
    with mp.workdps(dps):
        half = mp.mpf(theta_p) / 2
        return float(
            2 * mp.atan(mp.sin(half) / (mp.cos(half) + mp.exp((mp.mpf(l1) + mp.mpf(l2)) / 2)))
        )


def twz_exterior_summand(
    l1: float, l2: float, theta_p: float, *, dps: int = DPS
) -> float:
    with mp.workdps(dps):
        half = mp.mpf(theta_p) / 2
        num = mp.sin(half) * mp.sinh(mp.mpf(l1) / 2)
        den = mp.cos(half) * mp.cosh(mp.mpf(l1) / 2) + mp.cosh(mp.mpf(l2) / 2)
        return float(half - mp.atan(num / den))


def _axis_distance(l_cuff: mp.mpf, l_loop: mp.mpf, ratio_orientation: str) -> mp.mpf:
    a = mp.sinh(l_cuff / 2)
    b = mp.sinh(l_loop / 2)
    arg = b / a if ratio_orientation == "corrected" else a / b
    if arg <= 1:
        raise InvalidParametersError(
            f"arccosh argument <= 1 under {ratio_orientation!r} orientation"
        )
    return mp.acosh(arg)


def _theta_mp(x: mp.mpf, y: mp.mpf, z: mp.mpf) -> mp.mpf:
    n = mp.cosh(x) * mp.cosh(y) * mp.sinh(z) - mp.sinh(x) * mp.cosh(z)
    return mp.atan2(mp.cosh(x) * mp.sinh(y), abs(n))


def gap(
    p: HalfPantsParams,
    *,
    ratio_orientation: str = DEFAULT_RATIO_ORIENTATION,
    wrap_convention: str = DEFAULT_WRAP_CONVENTION,
    dps: int = DPS,
) -> float:
    """Gap angle of `p`, re-evaluated at `dps` decimal digits."""
    with mp.workdps(dps):
        lc, ll = mp.mpf(p.l_cuff), mp.mpf(p.l_loop)
        tau, delta = mp.mpf(p.tau), mp.mpf(p.delta)

        if p.topo_type is TopoType.EMBEDDED:
            return float(
                2 * (mp.asin(mp.cosh(lc / 2) / mp.cosh(ll / 2))
                     - mp.asin(mp.sinh(lc / 2) / mp.sinh(ll / 2)))
            )

        z = _axis_distance(lc, ll, ratio_orientation)
        if p.topo_type is TopoType.THRICE_HOLED:
            a_block = mp.asin(mp.sinh(lc / 2) / mp.sinh(ll / 2))
            if p.n == 0:
                w1 = max(_theta_mp(delta, tau, z) - a_block, mp.mpf(0))
                w2 = max(_theta_mp(delta, lc - tau, z) - a_block, mp.mpf(0))
                return float(w1 + w2)
            if wrap_convention == "printed":
                y = abs(p.n * lc - tau)
            else:
                tau_eff = tau if p.n > 0 else lc - tau
                y = abs(p.n) * lc - tau_eff
            inner = y - lc
            blocker = a_block if inner < 0 else max(a_block, _theta_mp(delta, abs(inner), z))
            return float(max(_theta_mp(delta, y, z) - blocker, mp.mpf(0)))

        c2 = mp.cosh(delta) ** 2
        arg = c2 / mp.sinh(lc / 2) ** 2 - c2 / mp.sinh(ll / 2) ** 2
        if arg <= 0:
            raise InvalidParametersError("log argument <= 0 (needs l_loop > l_cuff)")
        ps = mp.log(arg) / 2
        lead = 2 * mp.asin(mp.cosh(lc / 2) / mp.cosh(ll / 2))
        k1 = mp.ceil((ps - tau) / lc)
        k2 = mp.ceil((ps - (lc - tau)) / lc)
        y1 = lc * k1 + tau
        y2 = lc * k2 + (lc - tau)
        raw = lead - _theta_mp(delta, abs(y1), z) - _theta_mp(delta, abs(y2), z)
        return float(max(raw, mp.mpf(0)))
