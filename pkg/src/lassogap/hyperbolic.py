"""Upper half-plane kernel.

Points are complex numbers z with Im z > 0; orientation-preserving
isometries are real 2x2 unit-determinant matrices acting by Mobius
transformations; geodesics are vertical half-lines or half-circles
centered on the real axis.

Numerical conventions:
  * all matrices are renormalized to det = 1 after every composition
    (long word products drift otherwise);
  * arccos/arcsin arguments are clamped to [-1, 1] when they overshoot by
    at most EPS_CLAMP, and rejected beyond that;
  * distances use 2*asinh(|dz| / (2*sqrt(y1*y2))), which is exact for both
    nearby and far apart points (the textbook arccosh form loses half the
    significand for nearby points and is kept as a test oracle only).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateConfigurationError,
    DomainError,
    InvalidHalfPantsError,
    InvalidIsometryError,
    NotHyperbolicError,
)

# Tolerances. EPS_INT decides segment-crossing transversality (tangential
# contacts count as misses), EPS_CLAMP absorbs round-off overshoot of
# inverse-trig arguments, EPS_DET is the unit-determinant gate.
EPS_INT = 1e-10
EPS_CLAMP = 1e-9
EPS_DET = 1e-12
_EPS_TRACE = 1e-9  # elliptic/parabolic/hyperbolic classification band

INF = math.inf


# ---------------------------------------------------------------------------
# points and angles


@dataclass(frozen=True)
class HPoint:
    """A point of the upper half-plane. Interior points have y > 0."""

    x: float
    y: float

    def as_complex(self) -> complex:
        return complex(self.x, self.y)

    @staticmethod
    def from_complex(z: complex) -> "HPoint":
        return HPoint(z.real, z.imag)

    def is_interior(self) -> bool:
        return self.y > 0.0


@dataclass(frozen=True)
class Angle:
    """A plain radian value.

    Formula outputs are stored unreduced (their ranges like [0, pi/2] are
    guaranteed by the math); only ray directions are normalized, via
    Angle.direction.
    """

    value: float

    @staticmethod
    def direction(value: float) -> "Angle":
        """Normalized representative in [0, 2*pi)."""
        v = math.fmod(value, 2.0 * math.pi)
        if v < 0.0:
            v += 2.0 * math.pi
        return Angle(v)

    def __float__(self) -> float:
        return self.value


def clamp_unit(u: float, eps: float = EPS_CLAMP) -> float:
    """Clamp an inverse-trig argument to [-1, 1], rejecting gross overshoot."""
    if u > 1.0:
        if u > 1.0 + eps:
            raise DomainError(f"inverse-trig argument {u!r} exceeds 1 beyond tolerance")
        return 1.0
    if u < -1.0:
        if u < -1.0 - eps:
            raise DomainError(f"inverse-trig argument {u!r} below -1 beyond tolerance")
        return -1.0
    return u


# ---------------------------------------------------------------------------
# isometries


@dataclass(frozen=True)
class Isometry:
    """Real 2x2 matrix of determinant 1, acting by z -> (az+b)/(cz+d).

    The constructor renormalizes any input with positive determinant and
    rejects the rest; g and -g act identically (the projective ambiguity is
    handled by proj_equal, never by canonicalizing signs here).
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if not math.isfinite(det) or det <= 0.0:
            raise InvalidIsometryError(f"determinant {det!r} not positive")
        if abs(det - 1.0) > EPS_DET:
            s = 1.0 / math.sqrt(det)
            object.__setattr__(self, "a", self.a * s)
            object.__setattr__(self, "b", self.b * s)
            object.__setattr__(self, "c", self.c * s)
            object.__setattr__(self, "d", self.d * s)

    # -- algebra ------------------------------------------------------------

    def __matmul__(self, other: "Isometry") -> "Isometry":
        return Isometry(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Isometry":
        return Isometry(self.d, -self.b, -self.c, self.a)

    def trace(self) -> float:
        return self.a + self.d

    @staticmethod
    def identity() -> "Isometry":
        return Isometry(1.0, 0.0, 0.0, 1.0)

    @staticmethod
    def axis_translation(length: float) -> "Isometry":
        """Translation by `length` along the imaginary axis, upward."""
        e = math.exp(0.5 * length)
        return Isometry(e, 0.0, 0.0, 1.0 / e)

    def classify(self) -> str:
        t = abs(self.trace())
        if t > 2.0 + _EPS_TRACE:
            return "hyperbolic"
        if t < 2.0 - _EPS_TRACE:
            return "elliptic"
        return "parabolic"

    # -- action -------------------------------------------------------------

    def apply_complex(self, z: complex) -> complex:
        den = self.c * z + self.d
        return (self.a * z + self.b) / den

    def apply_boundary(self, x: float) -> float:
        """Action on the boundary circle R u {inf}."""
        if math.isinf(x):
            return self.a / self.c if self.c != 0.0 else INF
        den = self.c * x + self.d
        if den == 0.0:
            return INF
        return (self.a * x + self.b) / den


def apply(iso: Isometry, p: HPoint) -> HPoint:
    """Mobius action on an interior point."""
    if not p.is_interior():
        raise DomainError(f"point {p} not interior (y <= 0)")
    z = iso.apply_complex(p.as_complex())
    return HPoint(z.real, z.imag)


def proj_equal(g: Isometry, h: Isometry, tol: float = 1e-9) -> bool:
    """Equality in the projective group: g == h or g == -h entrywise."""
    plus = max(abs(g.a - h.a), abs(g.b - h.b), abs(g.c - h.c), abs(g.d - h.d))
    minus = max(abs(g.a + h.a), abs(g.b + h.b), abs(g.c + h.c), abs(g.d + h.d))
    return min(plus, minus) <= tol


def translation_length(iso: Isometry) -> float:
    """2*arccosh(|tr|/2) for hyperbolic isometries."""
    if iso.classify() != "hyperbolic":
        raise NotHyperbolicError(f"trace {iso.trace()!r} is not > 2 in magnitude")
    return 2.0 * math.acosh(0.5 * abs(iso.trace()))


# ---------------------------------------------------------------------------
# metric


def distance(p: HPoint, q: HPoint) -> float:
    if not (p.is_interior() and q.is_interior()):
        raise DomainError("distance requires interior points")
    dz = math.hypot(p.x - q.x, p.y - q.y)
    return 2.0 * math.asinh(dz / (2.0 * math.sqrt(p.y * q.y)))


def distance_complex(p: complex, q: complex) -> float:
    return 2.0 * math.asinh(abs(p - q) / (2.0 * math.sqrt(p.imag * q.imag)))


# ---------------------------------------------------------------------------
# geodesics

_VERTICAL_EPS = 1e-13  # |x1 - x2| below this means a vertical geodesic


@dataclass(frozen=True)
class Geodesic:
    """Oriented complete geodesic with ideal endpoints (u, v).

    Either a half-circle (both endpoints finite, center (u+v)/2) or a
    vertical line (one endpoint infinite). Orientation runs u -> v.
    """

    u: float
    v: float

    def __post_init__(self):
        if self.u == self.v:
            raise DegenerateConfigurationError("geodesic needs distinct ideal endpoints")

    @property
    def vertical(self) -> bool:
        return math.isinf(self.u) or math.isinf(self.v)

    @property
    def foot_x(self) -> float:
        """Real coordinate of a vertical geodesic."""
        return self.v if math.isinf(self.u) else self.u

    @property
    def center(self) -> float:
        return 0.5 * (self.u + self.v)

    @property
    def radius(self) -> float:
        return 0.5 * abs(self.v - self.u)

    def reversed(self) -> "Geodesic":
        return Geodesic(self.v, self.u)

    @staticmethod
    def through(p: HPoint, q: HPoint) -> "Geodesic":
        """The complete geodesic through two distinct points, oriented p -> q."""
        if abs(p.x - q.x) < _VERTICAL_EPS * max(1.0, abs(p.x)):
            if p.y == q.y:
                raise DegenerateConfigurationError("coincident points span no geodesic")
            return Geodesic(p.x, INF) if q.y > p.y else Geodesic(INF, p.x)
        # center from equal-radius condition |p-c|^2 = |q-c|^2
        c = ((q.x * q.x + q.y * q.y) - (p.x * p.x + p.y * p.y)) / (2.0 * (q.x - p.x))
        r = math.hypot(p.x - c, p.y)
        return Geodesic(c - r, c + r) if q.x > p.x else Geodesic(c + r, c - r)

    def signed_sinh_distance(self, p: HPoint) -> float:
        """sinh of the distance from p, signed positive on the LEFT side.

        Left is relative to the u -> v orientation. Vanishes on the geodesic.
        """
        if self.vertical:
            if math.isinf(self.v):  # pointing up
                return (self.foot_x - p.x) / p.y
            return (p.x - self.foot_x) / p.y
        c, r = self.center, self.radius
        val = ((p.x - c) ** 2 + p.y * p.y - r * r) / (2.0 * r * p.y)
        # traversal u -> v with u < v has the far side (outside) on its left
        return val if self.u < self.v else -val

    def sinh_distance(self, p: HPoint) -> float:
        return abs(self.signed_sinh_distance(p))

    def distance_to(self, p: HPoint) -> float:
        return math.asinh(self.sinh_distance(p))

    def side(self, p: HPoint, eps: float = EPS_INT) -> int:
        """-1 / 0 / +1 by signed distance, with a zero band of width eps."""
        s = self.signed_sinh_distance(p)
        if s > eps:
            return 1
        if s < -eps:
            return -1
        return 0

    def reflect(self, p: HPoint) -> HPoint:
        if self.vertical:
            return HPoint(2.0 * self.foot_x - p.x, p.y)
        c, r = self.center, self.radius
        w = complex(p.x - c, p.y)
        w = (r * r / abs(w) ** 2) * w
        return HPoint(c + w.real, w.imag)

    def contains(self, p: HPoint, eps: float = 1e-9) -> bool:
        return self.sinh_distance(p) <= eps


def to_std(geo: Geodesic) -> Isometry:
    """Isometry sending geo to the imaginary axis oriented 0 -> inf."""
    u, v = geo.u, geo.v
    if math.isinf(u):
        m = Isometry(0.0, -1.0, 1.0, -v)
    elif math.isinf(v):
        m = Isometry(1.0, -u, 0.0, 1.0)
    elif u < v:
        # [[1,-u],[1,-v]] has det u-v < 0; negate the first row
        m = Isometry(-1.0, u, 1.0, -v)
    else:
        m = Isometry(1.0, -u, 1.0, -v)
    return m


def point_to_std(geo: Geodesic, anchor: HPoint) -> Isometry:
    """Like to_std, additionally sending anchor's foot to i.

    The returned map m has m(geo) = imaginary axis (oriented up) and the
    orthogonal projection of m(anchor) onto the axis equal to i, so the
    axis coordinate of anchor becomes 0.
    """
    m = to_std(geo)
    z = m.apply_complex(anchor.as_complex())
    s = 1.0 / math.sqrt(abs(z))
    return Isometry(s, 0.0, 0.0, 1.0 / s) @ m


def axis_coordinates(geo: Geodesic, p: HPoint) -> tuple[float, float]:
    """Fermi coordinates (t, s) of p about the oriented geodesic.

    t is the arclength position of the orthogonal projection (measured along
    the orientation, zero at an arbitrary but fixed reference: the point sent
    to i by to_std), s the signed sinh-distance, positive left.
    """
    z = to_std(geo).apply_complex(p.as_complex())
    t = 0.5 * math.log(z.real * z.real + z.imag * z.imag)
    s = -z.real / z.imag  # left of upward axis is x < 0
    return t, s


def point_from_axis(geo: Geodesic, t: float, s: float) -> HPoint:
    """Inverse of axis_coordinates: Fermi (t, signed sinh-distance) to point."""
    m = to_std(geo).inverse()
    # on the standard axis: e^t * (unit vector at angle from the s side)
    # with sinh(rho) = |s|: the point e^t * (-tanh(rho) + i*sech(rho)) lies
    # left (x<0) for s > 0
    ch = math.sqrt(1.0 + s * s)  # cosh(rho)
    z = complex(-s / ch, 1.0 / ch) * math.exp(t)
    w = m.apply_complex(z)
    return HPoint(w.real, w.imag)


def axis_of(iso: Isometry) -> Geodesic:
    """Invariant geodesic of a hyperbolic isometry, oriented toward the
    attracting fixed point (so the isometry translates in the +t direction).
    """
    if iso.classify() != "hyperbolic":
        raise NotHyperbolicError("axis exists only for hyperbolic isometries")
    a, b, c, d = iso.a, iso.b, iso.c, iso.d
    tr = a + d
    disc = math.sqrt(tr * tr - 4.0)
    if tr < 0:  # normalize so the trace is positive; same projective map
        a, b, c, d, tr = -a, -b, -c, -d, -tr
    if c == 0.0:
        # fixed points: b/(d-a) and inf; derivative at inf-side is a/d
        p = b / (d - a)
        return Geodesic(p, INF) if abs(a) > abs(d) else Geodesic(INF, p)
    # roots of c x^2 + (d - a) x - b = 0, paired stably: the naive formula
    # cancels catastrophically when |bc| << (a - d)^2 (near-diagonal matrices)
    bb = d - a
    q = -0.5 * (bb + math.copysign(disc, bb)) if bb != 0.0 else -0.5 * disc
    x1 = q / c
    x2 = -b / q
    # attracting fixed point has |derivative| = 1/(c*x+d)^2 < 1
    if abs(c * x1 + d) > 1.0:
        return Geodesic(x2, x1)
    return Geodesic(x1, x2)


def translation_along(geo: Geodesic, length: float) -> Isometry:
    """Hyperbolic translation by `length` along the oriented geodesic."""
    m = to_std(geo)
    return m.inverse() @ Isometry.axis_translation(length) @ m


def isometry_two_points(p1: HPoint, p2: HPoint, q1: HPoint, q2: HPoint) -> Isometry:
    """The orientation-preserving isometry with p1 -> q1 and p2 -> q2.

    Exists iff d(p1, p2) = d(q1, q2); the mismatch is not checked, so with
    unequal distances the result maps p1 -> q1 and p2 to a point at distance
    d(p1, p2) from q1 along the geodesic toward q2.
    """
    a = point_to_std(Geodesic.through(p1, p2), p1)
    b = point_to_std(Geodesic.through(q1, q2), q1)
    return b.inverse() @ a


# ---------------------------------------------------------------------------
# rays and tangents


def ray_from(p: HPoint, direction: float) -> Geodesic:
    """Complete geodesic through p whose tangent at p has Euclidean angle
    `direction`, oriented forward along the ray."""
    if not p.is_interior():
        raise DomainError("ray origin must be interior")
    co, si = math.cos(direction), math.sin(direction)
    if abs(co) < 1e-15:
        return Geodesic(p.x, INF) if si > 0.0 else Geodesic(INF, p.x)
    # center c on the real axis with radius vector orthogonal to the tangent:
    # (p.x - c, p.y) . (co, si) = 0
    c = p.x + p.y * si / co
    r = math.hypot(p.x - c, p.y)
    return Geodesic(c - r, c + r) if co > 0.0 else Geodesic(c + r, c - r)


def direction_at(geo: Geodesic, p: HPoint) -> float:
    """Euclidean angle of the forward tangent of `geo` at a point p on it."""
    if geo.vertical:
        return 0.5 * math.pi if math.isinf(geo.v) else -0.5 * math.pi
    rad = complex(p.x - geo.center, p.y)
    t = -1j * rad if geo.v > geo.u else 1j * rad
    return math.atan2(t.imag, t.real)


def tangent_direction(p: HPoint, q: HPoint) -> float:
    """Euclidean angle at p of the unit tangent of the geodesic from p to q."""
    geo = Geodesic.through(p, q)
    if geo.vertical:
        return 0.5 * math.pi if q.y > p.y else -0.5 * math.pi
    # tangent = radius vector rotated a quarter turn; traversing the upper
    # semicircle toward the right-hand endpoint means clockwise (-i), toward
    # the left-hand endpoint counterclockwise (+i)
    rad = complex(p.x - geo.center, p.y)
    t = -1j * rad if geo.v > geo.u else 1j * rad
    return math.atan2(t.imag, t.real)


def point_along(p: HPoint, direction: float, arclength: float) -> HPoint:
    """Point at the given arclength from p along the ray."""
    geo = ray_from(p, direction)
    # p lies on geo, so point_to_std sends p itself to i; forward is upward
    m = point_to_std(geo, p)
    z = complex(0.0, 1.0) * math.exp(arclength)
    w = m.inverse().apply_complex(z)
    return HPoint(w.real, w.imag)


def angle_between(d1: float, d2: float) -> float:
    """Unsigned angle in [0, pi] between two direction angles."""
    d = math.fmod(d1 - d2, 2.0 * math.pi)
    if d < 0:
        d += 2.0 * math.pi
    return min(d, 2.0 * math.pi - d)


def transport_direction(iso: Isometry, p: HPoint, direction: float) -> float:
    """Direction angle at iso(p) of the pushed-forward tangent.

    The derivative of a Mobius map at z is 1/(cz+d)^2, so directions rotate
    by -2 arg(c z + d).
    """
    w = complex(iso.c * p.x + iso.d, iso.c * p.y)
    return direction - 2.0 * math.atan2(w.imag, w.real)


# ---------------------------------------------------------------------------
# segments


@dataclass(frozen=True)
class GeodesicSegment:
    """Geodesic segment between two interior points."""

    start: HPoint
    end: HPoint

    @property
    def length(self) -> float:
        return distance(self.start, self.end)

    def geodesic(self) -> Geodesic:
        return Geodesic.through(self.start, self.end)

    def midpoint(self) -> "HPoint":
        return self.point_at(0.5 * self.length)

    def point_at(self, arclength: float) -> HPoint:
        geo = self.geodesic()
        m = to_std(geo)
        z0 = m.apply_complex(self.start.as_complex())
        t0 = 0.5 * math.log(abs(z0) ** 2)
        # start and end share the axis; arclength moves t linearly
        z = z0 * math.exp(arclength)  # start is ON the axis (z0 = i e^{t0})
        w = m.inverse().apply_complex(z)
        return HPoint(w.real, w.imag)


def segment_intersection(
    s1: GeodesicSegment, s2: GeodesicSegment, eps: float = EPS_INT
) -> HPoint | None:
    """Unique transverse crossing point of two open segments, if any.

    Tangential contacts and endpoint touches within the eps band count as
    misses. Overlapping collinear segments are an error (no unique point).
    """
    g1 = s1.geodesic()
    g2 = s2.geodesic()
    if _same_geodesic(g1, g2):
        if _collinear_overlap(s1, s2):
            raise DegenerateConfigurationError("overlapping collinear segments")
        return None
    # mutual strict separation decides transversality
    a = g2.signed_sinh_distance(s1.start)
    b = g2.signed_sinh_distance(s1.end)
    c = g1.signed_sinh_distance(s2.start)
    d = g1.signed_sinh_distance(s2.end)
    if not (_strictly_opposite(a, b, eps) and _strictly_opposite(c, d, eps)):
        return None
    return geodesic_crossing(g1, g2)


def _strictly_opposite(a: float, b: float, eps: float) -> bool:
    return (a > eps and b < -eps) or (a < -eps and b > eps)


def _same_geodesic(g1: Geodesic, g2: Geodesic, tol: float = 1e-11) -> bool:
    e1 = sorted([g1.u, g1.v])
    e2 = sorted([g2.u, g2.v])
    for x, y in zip(e1, e2):
        if math.isinf(x) != math.isinf(y):
            return False
        if not math.isinf(x) and abs(x - y) > tol * max(1.0, abs(x), abs(y)):
            return False
    return True


def _collinear_overlap(s1: GeodesicSegment, s2: GeodesicSegment) -> bool:
    geo = s1.geodesic()
    t1 = sorted([axis_coordinates(geo, s1.start)[0], axis_coordinates(geo, s1.end)[0]])
    t2 = sorted([axis_coordinates(geo, s2.start)[0], axis_coordinates(geo, s2.end)[0]])
    return t1[0] < t2[1] - 1e-12 and t2[0] < t1[1] - 1e-12


def geodesic_crossing(g1: Geodesic, g2: Geodesic) -> HPoint | None:
    """Crossing point of two distinct complete geodesics, or None.

    Circles are handled through their root products u*v = c^2 - r^2, which
    stays well conditioned when an ideal endpoint is far away (pulled-back
    rays routinely have |u| of order 1e6 while crossing unit-scale walls).
    """
    if g1.vertical and g2.vertical:
        return None
    if g1.vertical or g2.vertical:
        vert, circ = (g1, g2) if g1.vertical else (g2, g1)
        x = vert.foot_x
        y2 = -(x - circ.u) * (x - circ.v)
        if y2 <= 0.0:
            return None
        return HPoint(x, math.sqrt(y2))
    c1, c2 = g1.center, g2.center
    if c1 == c2:
        return None  # concentric: disjoint or identical
    # equate the two circle equations x^2+y^2 = 2*c*x - u*v
    x = (g1.u * g1.v - g2.u * g2.v) / (2.0 * (c1 - c2))
    y2 = -(x - g1.u) * (x - g1.v)
    if y2 <= 0.0:
        return None
    return HPoint(x, math.sqrt(y2))


# ---------------------------------------------------------------------------
# trigonometric kernels


def theta(x: float, y: float, z: float) -> Angle:
    """Perpendicular-to-chord angle kernel.

    Configuration: a base geodesic; a point P at distance x from it with
    foot F_P; a point Q at distance z with foot F_Q; |F_P F_Q| = y along the
    base; P and Q on the same side. The returned value is the angle at Q
    between the dropped perpendicular Q -> F_Q and the chord Q -> P, folded
    into [0, pi/2] (when the true angle is obtuse, which requires x > z, the
    supplement is returned).

        Theta = arccos(2 N^2 / (M^2 - 1) - 1) / 2,
        N = cosh x cosh y sinh z - sinh x cosh z,
        M = cosh x cosh y cosh z - sinh x sinh z.

    M is cosh of the chord length |PQ|, so the denominator vanishes iff
    P = Q (y = 0 and x = z).

    Evaluated via the identity M^2 - 1 - N^2 = cosh^2(x) sinh^2(y), which
    turns the half-arccos into atan2(cosh x sinh y, |N|): equal in exact
    arithmetic, but free of the squared-term cancellation that costs the
    arccos form half its digits near y = 0 (configurations where the chord
    nearly runs along the perpendicular).
    """
    if x < 0.0 or y < 0.0 or z <= 0.0:
        raise DomainError(f"theta arguments out of range: {(x, y, z)!r}")
    chx, shx = math.cosh(x), math.sinh(x)
    chy, shy = math.cosh(y), math.sinh(y)
    chz, shz = math.cosh(z), math.sinh(z)
    n = chx * chy * shz - shx * chz
    opp = chx * shy
    if n * n + opp * opp < 1e-18:  # == M^2 - 1
        raise DegenerateConfigurationError(
            "theta denominator vanishes (coincident configuration points)"
        )
    return Angle(math.atan2(opp, abs(n)))


def trirectangle_acute_angle(l_cuff_half: float, l_zip_half: float) -> Angle:
    """Acute angle of the three-right-angle quadrilateral with the given
    half-cuff side (opposite the angle) and half-zipper hypotenuse-side:
    arcsin(cosh(l_cuff_half) / cosh(l_zip_half)).
    """
    ratio = math.cosh(l_cuff_half) / math.cosh(l_zip_half)
    if ratio > 1.0 + EPS_CLAMP:
        raise InvalidHalfPantsError(
            f"cosh({l_cuff_half}) > cosh({l_zip_half}): zipper shorter than cuff"
        )
    return Angle(math.asin(clamp_unit(ratio)))


def angle_of_parallelism(d: float) -> float:
    """Angle between a perpendicular and the asymptote: sin = 1/cosh(d)."""
    return math.asin(clamp_unit(1.0 / math.cosh(d)))
