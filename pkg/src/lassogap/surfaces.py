"""Closed hyperbolic surfaces as Fuchsian groups with a marked point.

A surface is carried by an embedded fundamental polygon, its side-pairing
generators, and a distinguished interior basepoint (the lift of the marked
point). The module builds the regular-octagon genus-2 surface, locates orbit
points, and unfolds geodesic rays across domain walls.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

from . import hyperbolic as hp
from .errors import (
    BudgetExceededError,
    ConstructionFailedError,
    InvalidParametersError,
    LookupFailedError,
    VertexHitError,
)
from .hyperbolic import Geodesic, GeodesicSegment, HPoint, Isometry

EPS_VERTEX = 1e-9
LOCATE_BUDGET = 64  # wall crossings before lookup is declared failed


@dataclass(frozen=True)
class SurfaceGroup:
    """Fuchsian group of a closed surface plus its fundamental polygon.

    generators[i] acts on the half-plane; labels[i] names it (lowercase and
    uppercase letters are mutually inverse). Side s of the polygon runs from
    vertices[s] to vertices[(s+1) % n] counterclockwise, so the interior
    lies on the left of every oriented side. pairing[s] is the index of the
    generator mapping side s onto its partner side; crossing[s] the index of
    the generator g with g * domain adjacent across side s (they are
    mutually inverse). relators are index words evaluating to +-identity.
    """

    generators: tuple[Isometry, ...]
    labels: tuple[str, ...]
    inverse_table: tuple[int, ...]
    vertices: tuple[HPoint, ...]
    pairing: tuple[int, ...]
    relators: tuple[tuple[int, ...], ...]
    basepoint_lift: HPoint
    genus: int

    # -- derived tables -----------------------------------------------------

    @property
    def n_sides(self) -> int:
        return len(self.vertices)

    @property
    def crossing(self) -> tuple[int, ...]:
        return tuple(self.inverse_table[i] for i in self.pairing)

    def side_segment(self, s: int) -> GeodesicSegment:
        return GeodesicSegment(self.vertices[s], self.vertices[(s + 1) % self.n_sides])

    def side_geodesic(self, s: int) -> Geodesic:
        return Geodesic.through(self.vertices[s], self.vertices[(s + 1) % self.n_sides])

    def generator_by_label(self, label: str) -> Isometry:
        return self.generators[self.labels.index(label)]

    def word(self, indices) -> Isometry:
        acc = Isometry.identity()
        for i in indices:
            acc = acc @ self.generators[i]
        return acc

    def word_from_labels(self, text: str) -> Isometry:
        return self.word(self.labels.index(ch) for ch in text)

    def diameter(self) -> float:
        """Diameter of the fundamental polygon (max vertex separation)."""
        best = 0.0
        for i, p in enumerate(self.vertices):
            for q in self.vertices[i + 1 :]:
                best = max(best, hp.distance(p, q))
        return best

    def contains(self, p: HPoint, eps: float = 1e-12) -> bool:
        return all(self.side_geodesic(s).signed_sinh_distance(p) >= -eps for s in range(self.n_sides))

    def check_invariants(self, tol_pairing: float = 1e-9, tol_relator: float = 1e-8) -> None:
        """Raise ConstructionFailedError when the defining data is inconsistent."""
        n = self.n_sides
        partner = self._partner_table()
        for s in range(n):
            g = self.generators[self.pairing[s]]
            a, b = self.vertices[s], self.vertices[(s + 1) % n]
            t = partner[s]
            ta, tb = self.vertices[t], self.vertices[(t + 1) % n]
            # pairing reverses the boundary orientation of the side
            ia, ib = hp.apply(g, a), hp.apply(g, b)
            err = max(
                abs(ia.x - tb.x), abs(ia.y - tb.y), abs(ib.x - ta.x), abs(ib.y - ta.y)
            )
            if err > tol_pairing:
                raise ConstructionFailedError(f"side {s} pairing misses partner by {err:.2e}")
        ident = Isometry.identity()
        for word in self.relators:
            if not hp.proj_equal(self.word(word), ident, tol_relator):
                raise ConstructionFailedError("relator does not evaluate to +-identity")
        if not self.contains(self.basepoint_lift, eps=-1e-12):
            raise ConstructionFailedError("basepoint lift not interior to the domain")

    def _partner_table(self) -> tuple[int, ...]:
        """partner[s] = side that pairing[s] maps side s onto."""
        n = self.n_sides
        out = []
        for s in range(n):
            g = self.generators[self.pairing[s]]
            mid = self.side_segment(s).midpoint()
            img = hp.apply(g, mid)
            t_best, d_best = -1, math.inf
            for t in range(n):
                d = hp.distance(img, self.side_segment(t).midpoint())
                if d < d_best:
                    t_best, d_best = t, d
            out.append(t_best)
        return tuple(out)


@dataclass(frozen=True)
class CoverPath:
    """A geodesic ray unfolded in the universal cover.

    segments chain head to tail along one complete half-plane geodesic;
    deck_word records the generator index of each wall crossing in order
    (the copy after k crossings is g_1 g_2 ... g_k * domain).
    """

    segments: tuple[GeodesicSegment, ...]
    deck_word: tuple[int, ...]
    total_length: float


# ---------------------------------------------------------------------------
# the regular octagon surface


def _disc_to_halfplane(w: complex) -> complex:
    return 1j * (1 + w) / (1 - w)


def build_genus2_octagon() -> SurfaceGroup:
    """Genus-2 surface from the regular hyperbolic octagon, vertex angle pi/4.

    Sides 0..7 carry the labels a b A B c d C D reading counterclockwise
    (uppercase = inverse), giving the single relator a b A B c d C D. The
    marked point is the octagon center, lifted to i.
    """
    # vertices: disc radius for circumradius arccosh(3 + 2 sqrt 2), rotated
    # half a step so side midpoints sit on the axes
    r_disc = math.tanh(math.acosh((1.0 + math.sqrt(2.0)) ** 2) / 2.0)
    verts = []
    for k in range(8):
        w = r_disc * cmath.exp(1j * (2 * k - 1) * math.pi / 8.0)
        z = _disc_to_halfplane(w)
        verts.append(HPoint(z.real, z.imag))

    def side(k: int) -> tuple[HPoint, HPoint]:
        return verts[k % 8], verts[(k + 1) % 8]

    # each letter maps its source side onto its target side with reversed
    # endpoint correspondence; this specific assignment makes the literal
    # relator product the identity matrix (not merely its negative)
    tgt_src = {"a": (2, 0), "b": (1, 3), "c": (6, 4), "d": (5, 7)}
    gens: dict[str, Isometry] = {}
    for letter, (src, tgt) in tgt_src.items():
        sa, sb = side(src)
        ta, tb = side(tgt)
        gens[letter] = hp.isometry_two_points(sa, sb, tb, ta)
        gens[letter.upper()] = gens[letter].inverse()

    labels = ("a", "A", "b", "B", "c", "C", "d", "D")
    generators = tuple(gens[ch] for ch in labels)
    inverse_table = (1, 0, 3, 2, 5, 4, 7, 6)

    # crossing[s]: the letter whose target side is s (neighbor copy across s)
    crossing_label = {}
    for letter, (src, tgt) in tgt_src.items():
        crossing_label[tgt] = letter
        crossing_label[src] = letter.upper()
    # pairing[s] maps side s onto its partner: the inverse of the crossing
    pairing = tuple(
        inverse_table[labels.index(crossing_label[s])] for s in range(8)
    )

    relator = tuple(labels.index(ch) for ch in "abABcdCD")

    group = SurfaceGroup(
        generators=generators,
        labels=labels,
        inverse_table=inverse_table,
        vertices=tuple(verts),
        pairing=pairing,
        relators=(relator,),
        basepoint_lift=HPoint(0.0, 1.0),
        genus=2,
    )
    group.check_invariants()
    return group


# ---------------------------------------------------------------------------
# custom surfaces from Fenchel-Nielsen gluing data


class _GenericityError(Exception):
    """Internal: the Dirichlet center landed on a degenerate locus; retry."""


def _reflection_matrix(geo: Geodesic) -> np.ndarray:
    """det = -1 matrix of the reflection across geo (acts as z -> M(conj z)).

    The product of two reflection matrices is a plain Mobius matrix, so all
    gluing algebra below stays in ordinary 2x2 arithmetic.
    """
    m = hp.to_std(geo)
    mm = np.array([[m.a, m.b], [m.c, m.d]])
    return np.linalg.inv(mm) @ np.array([[1.0, 0.0], [0.0, -1.0]]) @ mm


def _iso_matrix(iso: Isometry) -> np.ndarray:
    return np.array([[iso.a, iso.b], [iso.c, iso.d]])


def _apply_matrix(m: np.ndarray, p: HPoint) -> HPoint:
    z = complex(p.x, p.y)
    w = (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])
    return HPoint(w.real, w.imag)


def _proj_key(m: np.ndarray) -> tuple:
    flat = [float(v) for v in m.reshape(-1)]
    for v in flat:
        if abs(v) > 1e-8:
            if v < 0:
                flat = [-u for u in flat]
            break
    return tuple(round(v, 9) for v in flat)


def _is_identity(m: np.ndarray, tol: float = 1e-9) -> bool:
    return bool(
        np.abs(m - np.eye(2)).max() < tol or np.abs(m + np.eye(2)).max() < tol
    )


def _pants_skeleton(
    l1: float, l2: float, l3: float
) -> tuple[list[Geodesic], list[np.ndarray], list[HPoint]]:
    """Right-angled hexagon carrying half of the (l1, l2, l3) pair of pants.

    Side order: half-cuff 1, seam, half-cuff 2, seam, half-cuff 3, seam. The
    cuff holonomies are products of reflections in the two seams adjacent to
    each cuff, which makes X1 X2 X3 the exact identity. Returns the cuff axes
    (oriented along the holonomy translation), the holonomy matrices, and the
    hexagon vertices.
    """
    u = (0.5 * l1, 0.5 * l2, 0.5 * l3)

    def seam(a: float, b: float, c: float) -> float:
        return math.acosh(
            (math.cosh(c) + math.cosh(a) * math.cosh(b))
            / (math.sinh(a) * math.sinh(b))
        )

    s12 = seam(u[0], u[1], u[2])
    s23 = seam(u[1], u[2], u[0])
    s31 = seam(u[2], u[0], u[1])
    pts = [HPoint(0.0, 1.0)]
    direction = 0.5 * math.pi  # up the imaginary axis, hexagon on its right
    for length in (u[0], s12, u[1], s23, u[2], s31):
        step = hp.ray_from(pts[-1], direction)
        q = hp.point_along(pts[-1], direction, length)
        direction = hp.direction_at(step, q) - 0.5 * math.pi
        pts.append(q)
    if abs(pts[6].x - pts[0].x) + abs(pts[6].y - pts[0].y) > 1e-9:
        raise ConstructionFailedError("pants hexagon failed to close")
    refl12 = _reflection_matrix(Geodesic.through(pts[1], pts[2]))
    refl23 = _reflection_matrix(Geodesic.through(pts[3], pts[4]))
    refl31 = _reflection_matrix(Geodesic.through(pts[5], pts[0]))
    xs = [refl31 @ refl12, refl12 @ refl23, refl23 @ refl31]
    axes_raw = [
        Geodesic(0.0, hp.INF),
        Geodesic.through(pts[2], pts[3]),
        Geodesic.through(pts[4], pts[5]),
    ]
    axes = []
    for geo, x in zip(axes_raw, xs):
        foot = hp.point_from_axis(geo, 0.0, 0.0)
        t_img, _ = hp.axis_coordinates(geo, _apply_matrix(x, foot))
        axes.append(geo if t_img > 0 else geo.reversed())
    return axes, xs, pts[:6]


def _perp_bisector(p: HPoint, q: HPoint) -> Geodesic:
    carrier = Geodesic.through(p, q)
    mid = GeodesicSegment(p, q).midpoint()
    t_mid, _ = hp.axis_coordinates(carrier, mid)
    minv = hp.to_std(carrier).inverse()
    r = math.exp(t_mid)
    return Geodesic(minv.apply_boundary(-r), minv.apply_boundary(r))


# -- Klein disc helpers: hyperbolic convexity turns into Euclidean convexity,
#    so the Dirichlet cell is cut out by straight-line half-plane clipping


def _klein_point(p: HPoint) -> tuple[float, float]:
    z = complex(p.x, p.y)
    w = (z - 1j) / (z + 1j)
    den = 1.0 + w.real * w.real + w.imag * w.imag
    return 2.0 * w.real / den, 2.0 * w.imag / den


def _klein_ideal(x: float) -> tuple[float, float]:
    if math.isinf(x):
        return 1.0, 0.0
    w = (x - 1j) / (x + 1j)
    n = abs(w)
    return w.real / n, w.imag / n


def _klein_to_hpoint(k: tuple[float, float]) -> HPoint:
    rr = k[0] * k[0] + k[1] * k[1]
    scale = 1.0 + math.sqrt(max(0.0, 1.0 - rr))
    z = _disc_to_halfplane(complex(k[0] / scale, k[1] / scale))
    return HPoint(z.real, z.imag)


def _chord_line(
    geo: Geodesic, inside: tuple[float, float]
) -> tuple[float, float, float, float]:
    """Klein chord of geo as (nx, ny, c, sgn) with sgn*(n.x - c) >= 0 inside."""
    e1 = _klein_ideal(geo.u)
    e2 = _klein_ideal(geo.v)
    dx, dy = e2[0] - e1[0], e2[1] - e1[1]
    nrm = math.hypot(dx, dy)
    nx, ny = -dy / nrm, dx / nrm
    c = nx * e1[0] + ny * e1[1]
    margin = nx * inside[0] + ny * inside[1] - c
    return nx, ny, c, (1.0 if margin > 0 else -1.0)


def _clip_halfplane(
    pts: list, tags: list, line: tuple, new_tag: int
) -> tuple[list, list]:
    nx, ny, c, sgn = line
    dvals = [sgn * (nx * p[0] + ny * p[1] - c) for p in pts]
    if min(dvals) >= 0.0:
        return pts, tags
    out_p: list = []
    out_t: list = []
    m = len(pts)
    for i in range(m):
        p, dp, tag = pts[i], dvals[i], tags[i]
        q, dq = pts[(i + 1) % m], dvals[(i + 1) % m]
        if dp >= 0.0:
            out_p.append(p)
            out_t.append(tag)
            if dq < 0.0:
                s = dp / (dp - dq)
                out_p.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
                out_t.append(new_tag)
        elif dq >= 0.0:
            s = dp / (dp - dq)
            out_p.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
            out_t.append(tag)
    return out_p, out_t


class _PoolInsufficient(Exception):
    """Internal: candidate set too small to close a compact cell."""


def _dirichlet_cell(
    center: HPoint, cands: list[tuple[np.ndarray, Geodesic, float]]
) -> tuple[list[tuple[float, float]], list[int]]:
    """Clip the Dirichlet cell of the candidate bisectors about center.

    Returns the counterclockwise Klein-model polygon and the candidate index
    carried by each side. Coordinates here are combinatorial scaffolding;
    exact vertices are recomputed afterwards by _refine_cell.
    """
    k0 = _klein_point(center)
    pts: list = [(-2.0, -2.0), (2.0, -2.0), (2.0, 2.0), (-2.0, 2.0)]
    tags: list = [-1, -1, -1, -1]
    for idx in sorted(range(len(cands)), key=lambda i: cands[i][2]):
        pts, tags = _clip_halfplane(pts, tags, _chord_line(cands[idx][1], k0), idx)
        if len(pts) < 3:
            raise ConstructionFailedError("Dirichlet cell collapsed")
    if any(t < 0 for t in tags):
        raise _PoolInsufficient(f"open cell with {len(cands)} candidates")
    # corners on or beyond the ideal boundary mean the hyperbolic cell is
    # still unbounded even though the scaffolding square got clipped away
    if any(p[0] * p[0] + p[1] * p[1] >= 1.0 - 1e-10 for p in pts):
        raise _PoolInsufficient("cell still reaches the ideal boundary")

    # drop zero-length edges produced by clipping exactly through a vertex:
    # a vertex whose outgoing edge vanished reappears as the next edge's start
    m = len(pts)
    kept_p: list = []
    kept_t: list = []
    for i in range(m):
        q = pts[(i + 1) % m]
        if math.hypot(q[0] - pts[i][0], q[1] - pts[i][1]) >= 1e-13:
            kept_p.append(pts[i])
            kept_t.append(tags[i])
    if len(kept_p) < 3:
        raise _GenericityError("cell degenerated to a sliver")
    # merge consecutive edges carrying the same wall (collinear splits):
    # rotate so a run never wraps the list seam, then drop interior vertices
    m = len(kept_p)
    start = next((i for i in range(m) if kept_t[i - 1] != kept_t[i]), -1)
    if start < 0:
        raise _GenericityError("cell bounded by a single wall")
    kept_p = kept_p[start:] + kept_p[:start]
    kept_t = kept_t[start:] + kept_t[:start]
    pts2: list = []
    tags2: list = []
    for i in range(m):
        if i > 0 and kept_t[i] == tags2[-1]:
            continue
        pts2.append(kept_p[i])
        tags2.append(kept_t[i])
    if len(pts2) < 3:
        raise _GenericityError("cell degenerated to a sliver")
    if len(set(tags2)) != len(tags2):
        raise _GenericityError("wall contributes two separated sides")

    # counterclockwise orientation (reversal re-associates edge tags)
    area2 = 0.0
    m = len(pts2)
    for i in range(m):
        p, q = pts2[i], pts2[(i + 1) % m]
        area2 += p[0] * q[1] - q[0] * p[1]
    if area2 < 0.0:
        pts2 = pts2[::-1]
        tags2 = [tags2[(m - 2 - j) % m] for j in range(m)]

    return pts2, tags2


def _refine_cell(
    kpts: list[tuple[float, float]],
    tags: list[int],
    cands: list[tuple[np.ndarray, Geodesic, float]],
) -> list[HPoint]:
    """Exact half-plane vertices of a stable cell: corner j is the crossing
    of the walls carried by its incoming and outgoing sides."""
    m = len(kpts)
    verts: list[HPoint] = []
    for j in range(m):
        v = hp.geodesic_crossing(cands[tags[j - 1]][1], cands[tags[j]][1])
        if v is None:
            raise _GenericityError("adjacent walls fail to cross")
        # the clipped corner's float error blows up with the Klein metric
        # distortion near the boundary; the test only guards combinatorics
        rr = kpts[j][0] * kpts[j][0] + kpts[j][1] * kpts[j][1]
        allowed = max(1e-6, 1e-8 / max(1e-12, 1.0 - rr))
        if hp.distance(v, _klein_to_hpoint(kpts[j])) > allowed:
            raise _GenericityError("refined vertex drifted from clipped cell")
        verts.append(v)
    for j in range(m):
        if hp.distance(verts[j], verts[(j + 1) % m]) < 1e-7:
            raise _GenericityError("near-degenerate cell side")
    return verts


def _interior_angle(prev_v: HPoint, v: HPoint, next_v: HPoint) -> float:
    return hp.angle_between(
        hp.tangent_direction(v, prev_v), hp.tangent_direction(v, next_v)
    )


def _assemble_group(
    gen_mats: list[np.ndarray], center: HPoint, systole_hint: float
) -> SurfaceGroup:
    """Dirichlet cell of the group generated by gen_mats, as a SurfaceGroup.

    Candidate walls start from the generators and short products and grow
    until no short product of the cell's own face elements cuts the cell.
    Correctness is enforced afterwards: exact side pairings, vertex cycles
    with angle sum 2 pi, genus-2 Euler characteristic, and recovery of every
    input generator by point location.

    systole_hint separates honest short elements from words that are the
    identity up to float error in the generators themselves: the generators
    satisfy the gluing relations only to machine precision, so long relator
    words evaluate to tiny near-identity elements whose bisectors would
    otherwise shred the cell. All group arithmetic runs in extended
    precision so such words keep their true (tiny) displacement instead of
    being amplified across rounds of repeated products.
    """
    pool: dict[tuple, np.ndarray] = {}
    noise_floor = max(1e-6, 0.02 * min(systole_hint, 2.0))

    def normalize(m: np.ndarray) -> np.ndarray:
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        return m / np.sqrt(abs(det))

    def displacement(m: np.ndarray) -> float:
        m64 = np.asarray(m, dtype=np.float64)
        return hp.distance(center, _apply_matrix(m64, center))

    def admit(m: np.ndarray, max_disp: float = math.inf) -> bool:
        m = normalize(m)
        if _is_identity(m, 1e-7):
            return False
        key = _proj_key(np.asarray(m, dtype=np.float64))
        if key in pool:
            return False
        d = displacement(m)
        if d < noise_floor:
            # identity up to generator round-off: no wall to contribute
            return False
        if d > max_disp:
            return False  # wall too far to matter at the current radius
        if abs(float(m[0, 0] + m[1, 1])) < 2.0 - 1e-9:
            raise ConstructionFailedError(
                "holonomy contains an elliptic element (|trace| = "
                f"{abs(float(m[0, 0] + m[1, 1])):.6g}, displacement "
                f"{d:.3g}); group is not a torsion-free discrete group"
            )
        pool[key] = m
        return True

    base = [np.asarray(g, dtype=np.longdouble) for g in gen_mats]
    for g in list(base[:4]):
        det = g[0, 0] * g[1, 1] - g[0, 1] * g[1, 0]
        base.append(np.array([[g[1, 1], -g[0, 1]], [-g[1, 0], g[0, 0]]]) / det)
    for g in base:
        admit(g)
    for g in base:
        for h in base:
            admit(g @ h)
    radius = 2.0 * max(displacement(g) for g in base) + 2.0

    kpts: list[tuple[float, float]] = []
    tags: list[int] = []
    cands: list[tuple[np.ndarray, Geodesic, float]] = []
    rejected: set = set()
    for _ in range(16):
        cands = []
        for m in pool.values():
            m64 = np.asarray(m, dtype=np.float64)
            image = _apply_matrix(m64, center)
            cands.append(
                (m64, _perp_bisector(center, image), hp.distance(center, image))
            )
        try:
            kpts, tags = _dirichlet_cell(center, cands)
        except _PoolInsufficient:
            radius += 2.0
            grew = False
            for m in list(pool.values()):
                for h in base:
                    grew = admit(m @ h, radius) or grew
                if len(pool) > 4000:
                    raise ConstructionFailedError(
                        "candidate pool exploded before the cell closed; "
                        "group looks non-discrete or badly conditioned"
                    )
            if not grew:
                raise ConstructionFailedError("cell never closed to a compact polygon")
            continue
        face_keys = [_proj_key(cands[t][0]) for t in tags]
        faces = [pool[k] for k in face_keys]
        rho_max = max(hp.distance(center, _klein_to_hpoint(p)) for p in kpts)
        k0 = _klein_point(center)
        products: list[np.ndarray] = [a @ b for a in faces for b in faces]
        products += [a @ b @ c for a in faces for b in faces for c in faces]
        found_cut = False
        for m_hi in products:
            m_hi = normalize(m_hi)
            m = np.asarray(m_hi, dtype=np.float64)
            if _is_identity(m):
                continue
            key = _proj_key(m)
            if key in pool or key in rejected:
                continue
            image = _apply_matrix(m, center)
            d = hp.distance(center, image)
            if d < noise_floor:
                rejected.add(key)  # relator word: identity up to round-off
                continue
            if 0.5 * d > rho_max + 1e-9:
                rejected.add(key)  # its wall cannot reach the cell, now or later
                continue
            nx, ny, c, sgn = _chord_line(_perp_bisector(center, image), k0)
            margin = min(sgn * (nx * p[0] + ny * p[1] - c) for p in kpts)
            if margin < -1e-11 and admit(m_hi):
                found_cut = True
            else:
                rejected.add(key)
        if len(pool) > 20000:
            raise ConstructionFailedError(
                "walls keep accumulating; generators do not close a "
                "finite-sided cell"
            )
        if not found_cut:
            break
    else:
        raise ConstructionFailedError("Dirichlet cell failed to stabilise")

    verts = _refine_cell(kpts, tags, cands)
    n = len(verts)
    faces64 = [np.asarray(f, dtype=np.float64) for f in faces]
    key_to_side = {_proj_key(faces64[s]): s for s in range(n)}
    partner = []
    for s in range(n):
        t = key_to_side.get(_proj_key(np.linalg.inv(faces64[s])))
        if t is None or t == s:
            raise _GenericityError("a face misses its inverse face")
        partner.append(t)
    if any(partner[partner[s]] != s for s in range(n)):
        raise _GenericityError("side pairing is not an involution")

    labels: list = [""] * n
    alphabet = iter("abcdefghijklm")
    for s in range(n):
        if not labels[s]:
            ch = next(alphabet)
            labels[s] = ch
            labels[partner[s]] = ch.upper()

    visited = [False] * n
    relators = []
    for s0 in range(n):
        if visited[s0]:
            continue
        word_applied: list[int] = []
        angle_sum = 0.0
        s = s0
        while True:
            visited[s] = True
            angle_sum += _interior_angle(verts[s - 1], verts[s], verts[(s + 1) % n])
            word_applied.append(partner[s])
            s = (partner[s] + 1) % n
            if s == s0:
                break
        if abs(angle_sum - 2.0 * math.pi) > 1e-8:
            raise _GenericityError(f"vertex cycle angle sum off by {angle_sum - 2.0 * math.pi:.2e}")
        relators.append(tuple(reversed(word_applied)))
    # Euler characteristic: V - E + F = (cycles) - n/2 + 1 must equal -2
    if len(relators) - n // 2 + 1 != -2:
        raise ConstructionFailedError("cell does not close up to a genus-2 surface")
    for word in relators:
        prod = np.eye(2)
        for k in word:
            prod = prod @ faces64[k]
        prod = prod / math.sqrt(abs(float(np.linalg.det(prod))))
        residual = min(np.abs(prod - np.eye(2)).max(), np.abs(prod + np.eye(2)).max())
        if residual > 1e-6:
            raise ConstructionFailedError(f"relator residual {residual:.2e} exceeds 1e-6")

    group = SurfaceGroup(
        generators=tuple(
            Isometry(float(f[0, 0]), float(f[0, 1]), float(f[1, 0]), float(f[1, 1]))
            for f in faces64
        ),
        labels=tuple(labels),
        inverse_table=tuple(partner),
        vertices=tuple(verts),
        pairing=tuple(partner),
        relators=tuple(relators),
        basepoint_lift=center,
        genus=2,
    )
    group.check_invariants()
    ident = Isometry.identity()
    for gm in gen_mats:
        giso = Isometry(float(gm[0, 0]), float(gm[0, 1]), float(gm[1, 0]), float(gm[1, 1]))
        rep, h = locate(hp.apply(giso, center), group)
        if hp.distance(rep, center) > 1e-8 or not hp.proj_equal(h @ giso, ident, 1e-7):
            raise ConstructionFailedError(
                "an input holonomy generator is not recovered by the cell pairings"
            )
    return group


def _check_gluing_data(
    fenchel_nielsen: "list[tuple[float, float]]",
) -> tuple[list[float], list[float]]:
    if len(fenchel_nielsen) != 3:
        raise InvalidParametersError(
            "genus-2 gluing takes exactly three (length, twist) pairs"
        )
    lengths = [float(l) for l, _ in fenchel_nielsen]
    twists = [float(t) for _, t in fenchel_nielsen]
    if any(not math.isfinite(v) or v <= 0.0 for v in lengths):
        raise ConstructionFailedError("pants-curve lengths must be positive")
    if max(lengths) > 80.0 or any(not math.isfinite(v) for v in twists):
        raise ConstructionFailedError("gluing data out of numerical range")
    return lengths, twists


def pants_curve_holonomies(
    fenchel_nielsen: "list[tuple[float, float]]",
) -> tuple[Isometry, Isometry, Isometry]:
    """Holonomies of the three pants curves of the glued genus-2 surface.

    These are the cuff holonomies of the base pair of pants in the same
    normalization build_custom uses, so their translation lengths are the
    requested pants-curve lengths. Twists do not affect them.
    """
    lengths, _ = _check_gluing_data(fenchel_nielsen)
    _, xs, _ = _pants_skeleton(*lengths)
    x3 = np.linalg.inv(xs[0] @ xs[1])
    out = []
    for m in (xs[0], xs[1], x3):
        out.append(Isometry(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1])))
    return tuple(out)


def build_custom(fenchel_nielsen: "list[tuple[float, float]]") -> SurfaceGroup:
    """Genus-2 surface from three pants-curve (length, twist) pairs.

    Two isometric pairs of pants are glued along their three cuffs. Twist 0
    gives the reflection double; a positive twist slides the far copy along
    the cuff in the direction of that cuff's holonomy, in length units. The
    fundamental polygon is a Dirichlet cell about an interior basepoint,
    which becomes the marked point of the surface.
    """
    lengths, twists = _check_gluing_data(fenchel_nielsen)
    axes, xs, hexpts = _pants_skeleton(*lengths)
    x3 = np.linalg.inv(xs[0] @ xs[1])
    for m, want in zip((xs[0], xs[1], x3), lengths):
        iso = Isometry(float(m[0, 0]), float(m[0, 1]), float(m[1, 0]), float(m[1, 1]))
        if abs(hp.translation_length(iso) - want) > 1e-6:
            raise ConstructionFailedError(
                "pants-curve holonomy misses its requested length"
            )
    rhos = []
    for geo, t in zip(axes, twists):
        refl = _reflection_matrix(geo)
        if t != 0.0:
            refl = _iso_matrix(hp.translation_along(geo, t)) @ refl
        rhos.append(refl)
    gen_mats = [xs[0], xs[1], rhos[0] @ rhos[1], rhos[0] @ rhos[2]]

    # deterministic generic seed inside the base hexagon, then deterministic
    # nudges if a degenerate Dirichlet configuration is hit
    u1 = 0.5 * lengths[0]
    s31 = hp.distance(hexpts[5], hexpts[0])
    seed = hp.point_from_axis(
        Geodesic(0.0, hp.INF), 0.4321 * u1, -math.sinh(0.37 * min(s31, 2.0))
    )
    failure = "?"
    for attempt in range(6):
        center = (
            seed
            if attempt == 0
            else hp.point_along(seed, 0.9 + 2.399 * attempt, 0.031 * attempt)
        )
        try:
            return _assemble_group(gen_mats, center, min(lengths))
        except _GenericityError as exc:
            failure = str(exc)
    raise ConstructionFailedError(f"no generic Dirichlet center found: {failure}")


# ---------------------------------------------------------------------------
# point location


def locate(point: HPoint, group: SurfaceGroup) -> tuple[HPoint, Isometry]:
    """Orbit representative of `point` inside the fundamental domain.

    Returns (representative, g) with representative = g * point. Walks the
    most-violated wall first; for a Dirichlet-style domain every crossing
    strictly shrinks the distance to the basepoint, so the walk terminates.
    """
    z = point
    acc = Isometry.identity()
    n = group.n_sides
    for _ in range(LOCATE_BUDGET + 1):
        worst_s, worst_val = -1, -1e-12
        for s in range(n):
            val = group.side_geodesic(s).signed_sinh_distance(z)
            if val < worst_val:
                worst_s, worst_val = s, val
        if worst_s < 0:
            return z, acc
        g = group.generators[group.pairing[worst_s]]  # inverse of the crossing
        z = hp.apply(g, z)
        acc = g @ acc
    raise LookupFailedError(
        f"no domain representative within {LOCATE_BUDGET} wall crossings"
    )


# ---------------------------------------------------------------------------
# ray unfolding


def unfold_ray(
    group: SurfaceGroup,
    direction: hp.Angle | float,
    max_length: float,
    origin: HPoint | None = None,
) -> CoverPath:
    """Trace the ray from the basepoint lift, recording every wall crossing.

    The walk is carried out in the domain frame (the ray is pulled back to
    the fundamental polygon step by step, keeping all coordinates at unit
    scale); segments are emitted in the true half-plane frame, so they chain
    along the single straight geodesic of the ray.

    Raises VertexHitError when a crossing lands within EPS_VERTEX of a
    polygon vertex; callers retry with a jittered direction.
    """
    if max_length <= 0.0:
        raise hp.DomainError("max_length must be positive")
    theta = float(direction)
    z = origin if origin is not None else group.basepoint_lift
    n = group.n_sides
    sides = [group.side_geodesic(s) for s in range(n)]
    side_spans = []
    for s in range(n):
        ta, _ = hp.axis_coordinates(sides[s], group.vertices[s])
        tb, _ = hp.axis_coordinates(sides[s], group.vertices[(s + 1) % n])
        side_spans.append((min(ta, tb), max(ta, tb)))

    h = Isometry.identity()  # current copy is h * domain
    remaining = max_length
    segments: list[GeodesicSegment] = []
    deck_word: list[int] = []
    # crossings can cluster near a vertex fan; the cap is far beyond any
    # legitimate trajectory and only guards against cycling on degeneracies
    budget = 64 + int(16.0 * max_length)

    for _ in range(budget):
        ray = hp.ray_from(z, theta)
        t0, _ = hp.axis_coordinates(ray, z)
        best_t, best_s, best_x = math.inf, -1, None
        for s in range(n):
            x = hp.geodesic_crossing(ray, sides[s])
            if x is None:
                continue
            tx, _ = hp.axis_coordinates(ray, x)
            if tx <= t0 + 1e-12:
                continue
            u, _ = hp.axis_coordinates(sides[s], x)
            lo, hi = side_spans[s]
            if u < lo - EPS_VERTEX or u > hi + EPS_VERTEX:
                continue
            if u < lo + EPS_VERTEX or u > hi - EPS_VERTEX:
                raise VertexHitError(
                    f"ray exits within {EPS_VERTEX} of a vertex of side {s}"
                )
            if tx < best_t:
                best_t, best_s, best_x = tx, s, x
        if best_s < 0:
            raise ConstructionFailedError("ray found no exit wall from the domain")
        step = best_t - t0
        if step >= remaining:
            end_local = hp.point_along(z, theta, remaining)
            segments.append(GeodesicSegment(hp.apply(h, z), hp.apply(h, end_local)))
            return CoverPath(tuple(segments), tuple(deck_word), max_length)
        segments.append(GeodesicSegment(hp.apply(h, z), hp.apply(h, best_x)))
        remaining -= step
        g = group.generators[group.crossing[best_s]]
        deck_word.append(group.crossing[best_s])
        h = h @ g
        ginv = g.inverse()
        # the tangent angle varies along the ray: transport the direction
        # the ray has AT the crossing point, not the one it had at z
        theta = hp.transport_direction(ginv, best_x, hp.direction_at(ray, best_x))
        z = hp.apply(ginv, best_x)
    raise BudgetExceededError(
        f"wall-crossing budget {budget} exhausted before arclength {max_length}",
        checkpoint={"crossings": len(deck_word), "remaining": remaining},
    )


# ---------------------------------------------------------------------------
# serialization


def _fmt(x: float) -> str:
    return format(x, ".16g")


def to_json_dict(group: SurfaceGroup) -> dict:
    return {
        "basepoint": [_fmt(group.basepoint_lift.x), _fmt(group.basepoint_lift.y)],
        "generators": [
            {"label": lab, "matrix": [_fmt(g.a), _fmt(g.b), _fmt(g.c), _fmt(g.d)]}
            for lab, g in zip(group.labels, group.generators)
        ],
        "genus": group.genus,
        "inverse_table": list(group.inverse_table),
        "pairing": list(group.pairing),
        "relators": [list(w) for w in group.relators],
        "vertices": [[_fmt(p.x), _fmt(p.y)] for p in group.vertices],
    }


def from_json_dict(data: dict) -> SurfaceGroup:
    group = SurfaceGroup(
        generators=tuple(
            Isometry(*(float(v) for v in entry["matrix"])) for entry in data["generators"]
        ),
        labels=tuple(entry["label"] for entry in data["generators"]),
        inverse_table=tuple(data["inverse_table"]),
        vertices=tuple(HPoint(float(x), float(y)) for x, y in data["vertices"]),
        pairing=tuple(data["pairing"]),
        relators=tuple(tuple(w) for w in data["relators"]),
        basepoint_lift=HPoint(float(data["basepoint"][0]), float(data["basepoint"][1])),
        genus=int(data["genus"]),
    )
    group.check_invariants()
    return group


def save_json(group: SurfaceGroup, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(to_json_dict(group), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_json(path: str) -> SurfaceGroup:
    with open(path, encoding="utf-8") as fh:
        return from_json_dict(json.load(fh))
