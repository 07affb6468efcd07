"""Half-pants enumeration over a Fuchsian surface group.

A based loop at the marked point p is a deck transformation g: its based
geodesic representative is the projection of the chord [p~, g p~], its free
representative the closed geodesic under the axis of g.  Enumerating all
loops up to a based-length bound is a breadth-first walk over reduced words
pruned by orbit distance; the (simple?, crosses-cuff?) classification then
sorts each loop into one of the three half-pants shapes and the gap angle
follows from the closed forms in halfpants.

All intersection tests share one technique: unfold the arc in question
through the fundamental domain with surfaces.unfold_ray, form the prefix
products of the crossing word, and intersect true-frame translates pairwise.
Any two sub-arcs meeting on the quotient surface lie in two specific domain
copies, so the pair set of prefix products is a complete candidate list and
every comparison happens between unit-scale segments.

Parameter extraction for a non-embedded half-pants works in Fermi
coordinates about the cuff axis A (oriented so g translates forward):

* the marked point's own lift sits at height z = d(p~, A) over foot t_p,
  and z always agrees with arccosh(sinh(l_loop/2)/sinh(l_cuff/2));
* the interior preimage of p is the unique other orbit point inside the
  strip between A and the chain of chord translates g^k [p~, g p~]; its
  Fermi position gives tau (foot offset mod l_cuff) and delta (height);
* |n| counts the transverse self-crossings of the projected spoke (the
  perpendicular arc from p~ down to A) and the sign comes from the
  handedness of the first crossing, scaled by SPOKE_SIGN_CONVENTION.

The sign convention and the tau orientation are a matched pair: flipping
both maps (tau, n) to (l_cuff - tau, -n), which leaves every gap formula
invariant under the default wrap convention, so only their relative
calibration is observable.  SPOKE_SIGN_CONVENTION records the validated
choice.
"""

from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass

from . import hyperbolic as hp
from .errors import (
    BudgetExceededError,
    ConstructionFailedError,
    DegenerateConfigurationError,
    DegeneratePositionError,
    LookupFailedError,
    NotLassoInducibleError,
    NotPrimitiveError,
    VertexHitError,
)
from .halfpants import GapBreakdown, HalfPantsParams, TopoType, gap
from .hyperbolic import Geodesic, GeodesicSegment, HPoint, Isometry
from .surfaces import SurfaceGroup, locate, unfold_ray

log = logging.getLogger(__name__)

# +1: a positive n means the first spoke self-crossing is counterclockwise
# (the later strand crosses the earlier one left over right). Validated
# against the ray-shooting oracle; see also the module docstring.
SPOKE_SIGN_CONVENTION: int = 1

_ELEMENT_SEP = 1e-6  # orbit points closer than this are the same element
_EPS_END = 1e-9  # endpoint exclusion band along segment parameters
_NUDGES = (0.0, 1e-7, -1e-7, 3e-7, -3e-7, 1e-6, -1e-6)

DEFAULT_CAP = 250_000


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class GeodesicLoop:
    """A based loop: deck element plus its two geodesic lengths."""

    word: tuple[int, ...]
    matrix: Isometry
    l_loop: float  # based representative: distance(p~, g p~)
    l_free: float  # free representative: translation length of g
    loop_is_simple: bool
    loop_meets_free: bool


@dataclass(frozen=True)
class HalfPantsRecord:
    """One lasso-induced half-pants with its gap-angle breakdown."""

    canonical_word: str
    params: HalfPantsParams
    gap: GapBreakdown


# ---------------------------------------------------------------------------
# orbit-point bookkeeping
#
# Deck elements are deduplicated through their orbit point g p~ (the action
# is free, so element <-> orbit point is a bijection and distinct orbit
# points are at least a systole apart). Keys live in the unit-disc model
# centered at p~: the disc map contracts the absolute float error of far
# orbit points, so a fixed 1e-9 grid with one-cell probing is collision-safe
# at every depth the enumeration reaches.


class _OrbitIndex:
    def __init__(self, center: complex):
        self._center = center
        self._cells: dict[tuple[int, int], list[complex]] = {}

    def _disc(self, z: complex) -> complex:
        return (z - self._center) / (z - self._center.conjugate())

    def add(self, z: complex) -> bool:
        """Register an orbit point; False when it is already present."""
        w = self._disc(z)
        kx, ky = round(w.real * 1e9), round(w.imag * 1e9)
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for seen in self._cells.get((kx + dx, ky + dy), ()):
                    if abs(w - seen) < 1e-6:
                        return False
        self._cells.setdefault((kx, ky), []).append(w)
        return True


def _mul(m: tuple, n: tuple) -> tuple:
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def _mobius(m: tuple, z: complex) -> complex:
    a, b, c, d = m
    return (a * z + b) / (c * z + d)


def _ball_orbit(group: SurfaceGroup, radius: float, cap: int) -> list[complex]:
    """Orbit points g p~ of all deck elements with d(p~, g p~) <= radius.

    Breadth-first over reduced words with orbit-point deduplication. Prefix
    orbits are pruned at radius + circumradius: every prefix copy of a
    qualifying chord's wall word touches the chord, so its orbit point stays
    within that slack of the basepoint.
    """
    p0 = group.basepoint_lift
    z0 = complex(p0.x, p0.y)
    gens = [(g.a, g.b, g.c, g.d) for g in group.generators]
    inv = group.inverse_table
    circum = max(hp.distance(p0, v) for v in group.vertices)
    prune = radius + circum + 1e-6
    keep = radius + 1e-6
    index = _OrbitIndex(z0)
    index.add(z0)
    queue: deque = deque()
    queue.append(((1.0, 0.0, 0.0, 1.0), -1))
    out: list[complex] = [z0]
    nodes = 0
    while queue:
        m, last = queue.popleft()
        for i in range(len(gens)):
            if last >= 0 and i == inv[last]:
                continue
            nodes += 1
            if nodes > cap:
                raise BudgetExceededError(
                    f"orbit ball of radius {radius:.3f} exceeded {cap} nodes",
                    checkpoint={"nodes": nodes, "kept": len(out), "radius": radius},
                )
            m2 = _mul(m, gens[i])
            z2 = _mobius(m2, z0)
            d = hp.distance_complex(z0, z2)
            if d > prune:
                continue
            if not index.add(z2):
                continue
            queue.append((m2, i))
            if d <= keep:
                out.append(z2)
    return out


# ---------------------------------------------------------------------------
# loop enumeration


def _label_ranks(group: SurfaceGroup) -> list[int]:
    # alphabet order a < A < b < B < ...: lowercase breaks the tie downward
    order = sorted(range(len(group.labels)), key=lambda i: (group.labels[i].lower(), group.labels[i].isupper()))
    ranks = [0] * len(group.labels)
    for pos, i in enumerate(order):
        ranks[i] = pos
    return ranks


def _canonical_indices(group: SurfaceGroup, word: tuple[int, ...]) -> tuple[tuple[int, ...], bool]:
    """Lexicographic minimum over {word, inverse word}, plus an inverted flag."""
    ranks = _label_ranks(group)
    inverse = tuple(group.inverse_table[i] for i in reversed(word))
    if tuple(ranks[i] for i in inverse) < tuple(ranks[i] for i in word):
        return inverse, True
    return word, False


def canonical_word(group: SurfaceGroup, word: tuple[int, ...] | list[int]) -> str:
    """Inversion-normalized label string naming the loop and its reverse."""
    chosen, _ = _canonical_indices(group, tuple(word))
    return "".join(group.labels[i] for i in chosen)


def enumerate_loops(
    group: SurfaceGroup, length_bound: float, *, cap: int = DEFAULT_CAP
) -> list[GeodesicLoop]:
    """All based loops with l_loop <= length_bound, sorted by l_loop.

    Walks reduced words breadth first, pruning a word once its orbit point
    drifts beyond length_bound + circumradius: prefixes of the wall word of
    any qualifying chord stay inside that radius (triangle inequality
    through the touched domain copy), so the walk is complete. Elements are
    deduplicated by orbit point; both orientations of each loop appear.
    """
    if length_bound <= 0.0:
        raise hp.DomainError("length_bound must be positive")
    p0 = group.basepoint_lift
    z0 = complex(p0.x, p0.y)
    gens = [(g.a, g.b, g.c, g.d) for g in group.generators]
    inv = group.inverse_table
    circum = max(hp.distance(p0, v) for v in group.vertices)
    prune = length_bound + circum + 1e-6
    index = _OrbitIndex(z0)
    index.add(z0)
    queue: deque = deque()
    queue.append(((), (1.0, 0.0, 0.0, 1.0)))
    kept: list[tuple[tuple[int, ...], tuple, float]] = []
    nodes = 0
    while queue:
        word, m = queue.popleft()
        for i in range(len(gens)):
            if word and i == inv[word[-1]]:
                continue
            nodes += 1
            if nodes > cap:
                raise BudgetExceededError(
                    f"loop enumeration at bound {length_bound} exceeded {cap} nodes",
                    checkpoint={
                        "nodes": nodes,
                        "kept": len(kept),
                        "length_bound": length_bound,
                    },
                )
            m2 = _mul(m, gens[i])
            z2 = _mobius(m2, z0)
            d = hp.distance_complex(z0, z2)
            if d > prune:
                continue
            if not index.add(z2):
                continue
            w2 = word + (i,)
            queue.append((w2, m2))
            if d <= length_bound + 1e-12:
                kept.append((w2, m2, d))

    ranks = _label_ranks(group)
    kept.sort(key=lambda item: (item[2], tuple(ranks[i] for i in item[0])))
    loops = []
    for word, m, d in kept:
        iso = Isometry(*m)
        loops.append(
            GeodesicLoop(
                word=word,
                matrix=iso,
                l_loop=d,
                l_free=hp.translation_length(iso),
                loop_is_simple=_chord_has_no_self_crossing(group, iso, d),
                loop_meets_free=_meets_free(group, iso, d),
            )
        )
    return loops


# ---------------------------------------------------------------------------
# folded-arc intersection machinery


def _prefix_products(group: SurfaceGroup, deck_word: tuple[int, ...]) -> list[Isometry]:
    out = [Isometry.identity()]
    for idx in deck_word:
        out.append(out[-1] @ group.generators[idx])
    return out


def _unfold_prefixes(
    group: SurfaceGroup,
    direction: float,
    length: float,
    expect: Isometry | None = None,
) -> list[Isometry]:
    """Prefix products of the crossing word of the ray from p~.

    Vertex grazes retry with a jittered direction; when `expect` is given
    the final copy must match it (the chord of a loop always ends in copy
    g * domain), which guards against a jitter slipping past a corner.
    """
    failure: Exception | None = None
    for nudge in _NUDGES:
        try:
            path = unfold_ray(group, direction + nudge, length)
        except (VertexHitError, ConstructionFailedError) as exc:
            # a long trace can also stall on a near-tangency ("no exit
            # wall"); both modes are cured by the same jitter
            failure = exc
            continue
        prefixes = _prefix_products(group, path.deck_word)
        if expect is not None and not hp.proj_equal(prefixes[-1], expect, 1e-6):
            failure = ConstructionFailedError(
                "jittered unfolding ended in an unexpected domain copy"
            )
            continue
        return prefixes
    raise ConstructionFailedError(f"unfolding failed for every jitter: {failure}")


def _segment_image(iso: Isometry, seg: GeodesicSegment) -> GeodesicSegment:
    return GeodesicSegment(hp.apply(iso, seg.start), hp.apply(iso, seg.end))


def _arc_self_crossings(
    group: SurfaceGroup,
    seg: GeodesicSegment,
    prefixes: list[Isometry],
    first_only: bool,
) -> list[tuple[float, HPoint, Isometry]]:
    """Transverse self-crossings of the projected arc, as (earlier-arclength,
    point, translate) triples.

    A crossing pairs two sub-arcs living in copies H_i D and H_j D (i < j),
    so every crossing shows up as a transverse intersection of seg with
    (H_j H_i^{-1}) seg; candidates are deduplicated by translate since two
    distinct geodesic segments cross at most once.
    """
    geo = seg.geodesic()
    t0, _ = hp.axis_coordinates(geo, seg.start)
    seen = _OrbitIndex(complex(group.basepoint_lift.x, group.basepoint_lift.y))
    found: list[tuple[float, HPoint, Isometry]] = []
    for i in range(len(prefixes)):
        for j in range(i + 1, len(prefixes)):
            v = prefixes[j] @ prefixes[i].inverse()
            zb = hp.apply(v, group.basepoint_lift)
            if not seen.add(complex(zb.x, zb.y)):
                continue
            try:
                x = hp.segment_intersection(seg, _segment_image(v, seg))
            except DegenerateConfigurationError:
                raise DegeneratePositionError(
                    "marked point lies on the loop's own geodesic line"
                )
            if x is None:
                continue
            y = hp.apply(v.inverse(), x)
            tx = hp.axis_coordinates(geo, x)[0] - t0
            ty = hp.axis_coordinates(geo, y)[0] - t0
            found.append((min(tx, ty), x, v))
            if first_only:
                return found
    return found


def _chord_has_no_self_crossing(group: SurfaceGroup, matrix: Isometry, l_loop: float) -> bool:
    p0 = group.basepoint_lift
    q1 = hp.apply(matrix, p0)
    prefixes = _unfold_prefixes(group, hp.tangent_direction(p0, q1), l_loop, expect=matrix)
    seg = GeodesicSegment(p0, q1)
    return not _arc_self_crossings(group, seg, prefixes, first_only=True)


def is_simple_loop(loop: GeodesicLoop, group: SurfaceGroup) -> bool:
    """True iff the based geodesic representative never crosses itself
    transversally (the corner at p is not a crossing)."""
    return _chord_has_no_self_crossing(group, loop.matrix, loop.l_loop)


def _oriented_axis(matrix: Isometry) -> Geodesic:
    return hp.axis_of(matrix)  # axis_of orients toward the attracting point


def _axis_trace_prefixes(
    group: SurfaceGroup, axis: Geodesic, t_start: float, matrix: Isometry
) -> tuple[list[Isometry], Isometry]:
    """Prefix products for one full period of the cuff geodesic.

    Returns (prefixes, w) where w folds the trace origin into the domain;
    in the true frame of the trace, piece j sits in copy prefixes[j] D and
    the traced line is w axis.

    Closed geodesics through the vertex point defeat every trace along the
    axis itself, so the retries include perpendicular offsets: the segment
    from q to (holonomy q) at constant offset s stays within s of the axis
    and still ends in the expected copy, and its chain covers the same tube
    of domain copies up to slivers thinner than the offset.
    """
    shifts = (
        (0.0, 0.0), (1e-6, 0.0), (-1e-6, 0.0),
        (0.0, 1e-7), (0.0, -1e-7), (0.0, 1e-6), (0.0, -1e-6),
        (3e-6, 1e-7), (-3e-6, -1e-7), (0.0, 1e-5), (0.0, -1e-5),
    )
    for dt, ds in shifts:
        q0 = hp.point_from_axis(axis, t_start + dt, ds)
        q1 = hp.apply(matrix, q0)
        q_dom, w = locate(q0, group)
        direction = hp.transport_direction(w, q0, hp.tangent_direction(q0, q1))
        try:
            path = unfold_ray(group, direction, hp.distance(q0, q1), origin=q_dom)
        except (VertexHitError, ConstructionFailedError):
            continue
        prefixes = _prefix_products(group, path.deck_word)
        expect = (w @ matrix) @ w.inverse()
        if not hp.proj_equal(prefixes[-1], expect, 1e-6):
            continue
        return prefixes, w
    raise ConstructionFailedError("cuff trace kept grazing vertices")


def _meets_free(group: SurfaceGroup, matrix: Isometry, l_loop: float) -> bool:
    """Does the based representative cross the free representative?

    Chord pieces live in copies H_i D, cuff pieces in K_j D (about the
    folded trace line w A), so the complete lift candidates through a
    crossing are (H_i K_j^{-1} w) A, each tested as a full geodesic against
    the open chord segment.
    """
    p0 = group.basepoint_lift
    q1 = hp.apply(matrix, p0)
    axis = _oriented_axis(matrix)
    if abs(hp.axis_coordinates(axis, p0)[1]) < 1e-9:
        # marked point on the cuff: based and free representatives coincide,
        # so they certainly meet; classification rejects this as degenerate
        return True
    chord = GeodesicSegment(p0, q1)
    cg = chord.geodesic()
    t_lo, _ = hp.axis_coordinates(cg, p0)
    t_hi, _ = hp.axis_coordinates(cg, q1)
    hi_prefixes = _unfold_prefixes(group, hp.tangent_direction(p0, q1), l_loop, expect=matrix)
    t_foot, _ = hp.axis_coordinates(axis, p0)
    k_prefixes, w = _axis_trace_prefixes(group, axis, t_foot, matrix)
    tested = _OrbitIndex(complex(p0.x, p0.y))
    for Hi in hi_prefixes:
        for Kj in k_prefixes:
            u = (Hi @ Kj.inverse()) @ w
            zb = hp.apply(u, p0)
            if not tested.add(complex(zb.x, zb.y)):
                continue
            lift = Geodesic(u.apply_boundary(axis.u), u.apply_boundary(axis.v))
            x = hp.geodesic_crossing(cg, lift)
            if x is None:
                continue
            tx, _ = hp.axis_coordinates(cg, x)
            if t_lo + _EPS_END < tx < t_hi - _EPS_END:
                return True
    return False


# ---------------------------------------------------------------------------
# parameter extraction


def _tip_height(l_free: float, l_loop: float) -> float:
    ratio = math.sinh(0.5 * l_loop) / math.sinh(0.5 * l_free)
    if ratio <= 1.0:
        return 0.0
    return math.acosh(ratio)


def _spoke_crossings(
    group: SurfaceGroup, axis: Geodesic, t_p: float
) -> tuple[int, int]:
    """(count, handedness of the first crossing) for the projected spoke.

    The spoke is the perpendicular from p~ down to the cuff axis. Handedness
    compares, at the first crossing, the travel direction of the later
    strand against the earlier one: +1 when the later crosses counter-
    clockwise (positive sine of the direction difference).
    """
    p0 = group.basepoint_lift
    foot = hp.point_from_axis(axis, t_p, 0.0)
    length = hp.distance(p0, foot)
    prefixes = _unfold_prefixes(group, hp.tangent_direction(p0, foot), length)
    seg = GeodesicSegment(p0, foot)
    geo = seg.geodesic()
    hits = _arc_self_crossings(group, seg, prefixes, first_only=False)
    if not hits:
        return 0, 0
    hits.sort(key=lambda h: h[0])
    _, x, v = hits[0]
    y = hp.apply(v.inverse(), x)
    tx = hp.axis_coordinates(geo, x)[0]
    ty = hp.axis_coordinates(geo, y)[0]
    own = hp.direction_at(geo, x)
    other = hp.transport_direction(v, y, hp.direction_at(geo, y))
    if tx < ty:
        early, late = own, other
    else:
        early, late = other, own
    sigma = 1 if math.sin(late - early) > 0.0 else -1
    return len(hits), sigma


def extract_params(
    loop: GeodesicLoop,
    group: SurfaceGroup,
    *,
    _orbit_ball: list[complex] | None = None,
) -> tuple[float, float, int]:
    """Fermi parameters (tau, delta, n) of a non-embedded half-pants.

    tau and delta place the interior preimage of the marked point about the
    cuff axis (oriented by the loop matrix, origin at the foot of p~'s own
    perpendicular); n is the signed self-crossing count of the spoke. The
    values depend on the loop's orientation as documented for classify.
    """
    p0 = group.basepoint_lift
    g = loop.matrix
    axis = _oriented_axis(g)
    t_p, s_p = hp.axis_coordinates(axis, p0)
    if abs(s_p) < 1e-9:
        raise DegeneratePositionError("marked point lies on the cuff axis")
    z_tip = math.asinh(abs(s_p))
    l_free = loop.l_free

    orbit = _orbit_ball
    if orbit is None:
        orbit = _ball_orbit(group, l_free + 2.0 * z_tip + 0.5, DEFAULT_CAP)

    chord_geo = Geodesic.through(p0, hp.apply(g, p0))
    ref_side = chord_geo.signed_sinh_distance(
        hp.point_from_axis(axis, t_p + 0.5 * l_free, 0.0)
    )
    if abs(ref_side) < 1e-9:
        raise LookupFailedError("chord degenerately close to the cuff axis")

    std = hp.to_std(axis)
    candidates: list[tuple[float, float]] = []
    for z in orbit:
        wz = std.apply_complex(z)
        t = 0.5 * math.log(wz.real * wz.real + wz.imag * wz.imag)
        s = -wz.real / wz.imag
        if abs(s) < 1e-9:
            # some lift of the marked point sits on the axis, i.e. the cuff
            # geodesic runs through the marked point on the surface
            raise DegeneratePositionError(
                "cuff geodesic passes through the marked point"
            )
        if s * s_p <= 0.0:
            continue
        delta = math.asinh(abs(s))
        if delta >= z_tip - 1e-9:
            continue
        tau = (t - t_p) % l_free
        q = hp.point_from_axis(axis, t_p + tau, s)
        side = chord_geo.signed_sinh_distance(q)
        if side * ref_side <= 0.0 or abs(side) < 1e-9:
            continue
        candidates.append((tau, delta))

    unique: list[tuple[float, float]] = []
    for tau, delta in candidates:
        if not any(abs(tau - a) < 1e-6 and abs(delta - b) < 1e-6 for a, b in unique):
            unique.append((tau, delta))
    if len(unique) != 1:
        raise LookupFailedError(
            f"expected exactly one interior preimage, found {len(unique)}"
        )
    tau, delta = unique[0]

    count, sigma = _spoke_crossings(group, axis, t_p)
    n = SPOKE_SIGN_CONVENTION * sigma * count
    return tau, delta, n


def _reject_word_power(word: tuple[int, ...]) -> None:
    length = len(word)
    for period in range(1, length):
        if length % period:
            continue
        if word == word[:period] * (length // period):
            raise NotPrimitiveError(
                f"word of length {length} is a proper power of period {period}"
            )


def classify(
    loop: GeodesicLoop,
    group: SurfaceGroup,
    *,
    _orbit_ball: list[complex] | None = None,
) -> HalfPantsRecord:
    """Sort a primitive loop into its half-pants type and price its gap.

    Parameters are always extracted in the loop's canonical orientation
    (lexicographically least over the inversion orbit) so that records are
    reproducible however the loop was found; the two orientations describe
    one half-pants with (tau, n) mirrored, which leaves the gap unchanged.
    """
    _reject_word_power(loop.word)
    if loop.l_loop - loop.l_free < 1e-9:
        # based and free representatives coincide only when the marked
        # point sits on the axis itself
        raise DegeneratePositionError(
            "marked point lies on the loop's closed geodesic"
        )
    simple, meets = loop.loop_is_simple, loop.loop_meets_free
    if not simple and meets:
        raise NotLassoInducibleError(
            "loop is non-simple and crosses its free representative"
        )
    indices, inverted = _canonical_indices(group, loop.word)
    canon = "".join(group.labels[i] for i in indices)
    if inverted:
        loop = GeodesicLoop(
            word=indices,
            matrix=loop.matrix.inverse(),
            l_loop=loop.l_loop,
            l_free=loop.l_free,
            loop_is_simple=simple,
            loop_meets_free=meets,
        )
    if simple and not meets:
        params = HalfPantsParams(
            topo_type=TopoType.EMBEDDED, l_cuff=loop.l_free, l_loop=loop.l_loop
        )
    else:
        tau, delta, n = extract_params(loop, group, _orbit_ball=_orbit_ball)
        params = HalfPantsParams(
            topo_type=TopoType.THRICE_HOLED if not simple else TopoType.ONE_HOLED_TORUS,
            l_cuff=loop.l_free,
            l_loop=loop.l_loop,
            tau=tau,
            delta=delta,
            n=n,
        )
    return HalfPantsRecord(canonical_word=canon, params=params, gap=gap(params))


def _is_element_power(
    loop: GeodesicLoop, primitives: list[tuple[Isometry, float]], p0: HPoint
) -> bool:
    """Element-level proper-power test against already-accepted loops.

    The displacement of h^k at p~ grows strictly with k, so every root of a
    loop precedes it in l_loop order; candidates are screened by translation
    length and confirmed on orbit points (exact element identity).
    """
    target = hp.apply(loop.matrix, p0)
    zt = complex(target.x, target.y)
    for matrix, l_free in primitives:
        k = round(loop.l_free / l_free)
        if k < 2 or abs(loop.l_free - k * l_free) > 1e-6:
            continue
        power = matrix
        for _ in range(k - 1):
            power = power @ matrix
        zp = hp.apply(power, p0)
        if hp.distance_complex(zt, complex(zp.x, zp.y)) < _ELEMENT_SEP:
            return True
    return False


def enumerate_half_pants(
    group: SurfaceGroup, length_bound: float, *, cap: int = DEFAULT_CAP
) -> list[HalfPantsRecord]:
    """Complete list of lasso-induced half-pants with l_loop <= length_bound.

    Enumerates loops, drops proper powers (word-period check plus an
    element-level root search), classifies each primitive loop, and merges
    the two orientations through the canonical word. Marked-point
    coincidences (delta = 0) are excluded and logged; the identity then
    simply lacks those measure-zero terms. Sorted by descending gap, ties
    broken by canonical word.
    """
    loops = enumerate_loops(group, length_bound, cap=cap)
    p0 = group.basepoint_lift

    orbit_ball: list[complex] | None = None
    need_radius = 0.0
    for lp in loops:
        tip = _tip_height(lp.l_free, lp.l_loop)
        need_radius = max(need_radius, lp.l_free + 2.0 * tip + 0.5)

    primitives: list[tuple[Isometry, float]] = []
    by_canon: dict[str, HalfPantsRecord] = {}
    for lp in loops:
        try:
            _reject_word_power(lp.word)
        except NotPrimitiveError:
            continue
        if _is_element_power(lp, primitives, p0):
            continue
        primitives.append((lp.matrix, lp.l_free))
        canon = canonical_word(group, lp.word)
        if canon in by_canon:
            continue
        if lp.l_loop - lp.l_free < 1e-9:
            log.warning(
                "skipping %s: marked point lies on the loop's closed geodesic",
                canon,
            )
            continue
        if not lp.loop_is_simple and lp.loop_meets_free:
            # induces no half-pants: a lasso's spoke would have to cross
            # the loop at least twice
            log.debug("skipping %s: non-simple loop crossing its free representative", canon)
            continue
        needs_ball = not (lp.loop_is_simple and not lp.loop_meets_free)
        if needs_ball and orbit_ball is None:
            orbit_ball = _ball_orbit(group, need_radius, cap)
        try:
            record = classify(lp, group, _orbit_ball=orbit_ball)
        except DegeneratePositionError as exc:
            log.warning("skipping %s: %s", canon, exc)
            continue
        by_canon[canon] = record

    ranks = _label_ranks(group)

    def order(rec: HalfPantsRecord):
        word_key = tuple(ranks[group.labels.index(ch)] for ch in rec.canonical_word)
        return (-float(rec.gap.gap), word_key)

    return sorted(by_canon.values(), key=order)


# ---------------------------------------------------------------------------
# delimited export


def _fmt(x: float) -> str:
    return format(x, ".16g")


def records_to_csv(records: list[HalfPantsRecord]) -> str:
    """CSV table of half-pants records, LF line endings, stable ordering."""
    rows = ["canonical_word,topo_type,l_cuff,l_loop,tau,delta,n,gap"]
    ordered = sorted(
        records, key=lambda r: (-float(r.gap.gap), r.canonical_word)
    )
    for rec in ordered:
        p = rec.params
        rows.append(
            ",".join(
                [
                    rec.canonical_word,
                    p.topo_type.name,
                    _fmt(p.l_cuff),
                    _fmt(p.l_loop),
                    _fmt(p.tau),
                    _fmt(p.delta),
                    str(p.n),
                    _fmt(float(rec.gap.gap)),
                ]
            )
        )
    return "\n".join(rows) + "\n"
