"""Octagon surface group: construction, location, unfolding, round-trip."""

import json
import math
import random

import pytest

from lassogap import hyperbolic as hp
from lassogap import surfaces as sf
from lassogap.errors import (
    ConstructionFailedError,
    InvalidParametersError,
    VertexHitError,
)

OCT = sf.build_genus2_octagon()

CIRCUMRADIUS = 2.448452447678076  # arccosh(3 + 2 sqrt 2)
SIDE_LENGTH = 3.057141838961996  # 2 arccosh(1 + sqrt 2)
GEN_TRACE = 3.4142135623730954  # 2 + sqrt 2
GEN_LENGTH = 2.256767929932602  # 2 arccosh((2 + sqrt 2)/2)
GEN_AXIS_DIST = 1.0374699003650392  # basepoint to axis of any generator


def test_relator_is_identity():
    rel = OCT.word(OCT.relators[0])
    assert hp.proj_equal(rel, hp.Isometry.identity(), 1e-8)


def test_interior_angle_sum():
    total = 0.0
    for k in range(8):
        v = OCT.vertices[k]
        prv = OCT.vertices[(k - 1) % 8]
        nxt = OCT.vertices[(k + 1) % 8]
        total += hp.angle_between(
            hp.tangent_direction(v, prv), hp.tangent_direction(v, nxt)
        )
    assert total == pytest.approx(2.0 * math.pi, abs=1e-9)


def test_area_gauss_bonnet():
    total = 0.0
    for k in range(8):
        v = OCT.vertices[k]
        prv = OCT.vertices[(k - 1) % 8]
        nxt = OCT.vertices[(k + 1) % 8]
        total += hp.angle_between(
            hp.tangent_direction(v, prv), hp.tangent_direction(v, nxt)
        )
    area = 6.0 * math.pi - total
    assert area == pytest.approx(4.0 * math.pi, abs=1e-8)


def test_side_pairings_map_endpoints():
    partner = OCT._partner_table()
    for s in range(8):
        g = OCT.generators[OCT.pairing[s]]
        a, b = OCT.vertices[s], OCT.vertices[(s + 1) % 8]
        t = partner[s]
        ta, tb = OCT.vertices[t], OCT.vertices[(t + 1) % 8]
        ia, ib = hp.apply(g, a), hp.apply(g, b)
        assert max(abs(ia.x - tb.x), abs(ia.y - tb.y)) < 1e-9
        assert max(abs(ib.x - ta.x), abs(ib.y - ta.y)) < 1e-9


def test_octagon_metric_constants():
    base = OCT.basepoint_lift
    assert hp.distance(base, OCT.vertices[0]) == pytest.approx(CIRCUMRADIUS, abs=1e-12)
    assert OCT.side_segment(0).length == pytest.approx(SIDE_LENGTH, abs=1e-12)
    assert OCT.diameter() == pytest.approx(2 * CIRCUMRADIUS, abs=1e-12)
    for i in range(8):
        g = OCT.generators[i]
        assert abs(g.trace()) == pytest.approx(GEN_TRACE, abs=1e-12)
        assert hp.translation_length(g) == pytest.approx(GEN_LENGTH, abs=1e-12)
        assert hp.axis_of(g).distance_to(base) == pytest.approx(GEN_AXIS_DIST, abs=1e-11)


def test_generator_loop_relation():
    # the based loop of a generator decomposes over its axis:
    # sinh(loop/2) = cosh(dist to axis) sinh(free length / 2)
    base = OCT.basepoint_lift
    for i in range(8):
        g = OCT.generators[i]
        loop = hp.distance(base, hp.apply(g, base))
        free = hp.translation_length(g)
        d = hp.axis_of(g).distance_to(base)
        assert math.sinh(loop / 2) == pytest.approx(
            math.cosh(d) * math.sinh(free / 2), rel=1e-12
        )


def test_neighbor_copies_are_reflections():
    # the crossing generator puts the neighbor copy exactly across each wall
    base = OCT.basepoint_lift
    for s in range(8):
        img = hp.apply(OCT.generators[OCT.crossing[s]], base)
        refl = OCT.side_geodesic(s).reflect(base)
        assert max(abs(img.x - refl.x), abs(img.y - refl.y)) < 1e-12


def test_klein_four_symmetry():
    """The marked surface admits exactly the Klein four-group of symmetries
    fixing the basepoint: pi-rotation swaps a<->c, b<->d; the two normalizing
    reflections swap a<->b, c<->d and a<->d, b<->c."""

    def rot(phi):
        c, s = math.cos(phi / 2), math.sin(phi / 2)
        return hp.Isometry(c, s, -s, c)

    def conj_perm(m, antiholomorphic):
        perm = {}
        for i in range(8):
            gi = OCT.generators[i]
            if antiholomorphic:
                gi = hp.Isometry(gi.a, -gi.b, -gi.c, gi.d)
            conj = m @ gi @ m.inverse()
            for j in range(8):
                if hp.proj_equal(conj, OCT.generators[j], 1e-8):
                    perm[OCT.labels[i]] = OCT.labels[j]
        return perm if len(perm) == 8 else None

    assert conj_perm(rot(math.pi), False) == {
        "a": "c", "A": "C", "b": "d", "B": "D", "c": "a", "C": "A", "d": "b", "D": "B"
    }
    assert conj_perm(rot(3 * math.pi / 4), True) == {
        "a": "b", "A": "B", "b": "a", "B": "A", "c": "d", "C": "D", "d": "c", "D": "C"
    }
    assert conj_perm(rot(7 * math.pi / 4), True) == {
        "a": "d", "A": "D", "b": "c", "B": "C", "c": "b", "C": "B", "d": "a", "D": "A"
    }
    # the quarter turn does not normalize the group: a conjugates outside
    # the generator set (this surface is not the opposite-side pairing one)
    assert conj_perm(rot(math.pi / 4), False) is None


# ---------------------------------------------------------------------------
# locate


def test_locate_basepoint_identity():
    rep, w = sf.locate(OCT.basepoint_lift, OCT)
    assert rep == OCT.basepoint_lift
    assert hp.proj_equal(w, hp.Isometry.identity())


def test_locate_generator_translates():
    base = OCT.basepoint_lift
    for i in range(8):
        z = hp.apply(OCT.generators[i], base)
        rep, w = sf.locate(z, OCT)
        assert abs(rep.x - base.x) < 1e-9 and abs(rep.y - base.y) < 1e-9
        assert hp.proj_equal(w, OCT.generators[OCT.inverse_table[i]], 1e-9)


def test_locate_idempotent_on_random_points():
    rnd = random.Random(2026)
    for _ in range(10_000):
        p = hp.HPoint(rnd.uniform(-6, 6), math.exp(rnd.uniform(-2, 1.6)))
        rep, _ = sf.locate(p, OCT)
        rep2, w2 = sf.locate(rep, OCT)
        assert rep2 == rep
        assert hp.proj_equal(w2, hp.Isometry.identity())


def test_locate_orbit_well_defined():
    rnd = random.Random(7)
    base = OCT.basepoint_lift
    for _ in range(300):
        p = hp.HPoint(rnd.uniform(-2, 2), math.exp(rnd.uniform(-0.5, 0.8)))
        rep, _ = sf.locate(p, OCT)
        word = [rnd.randrange(8) for _ in range(rnd.randint(1, 6))]
        q = p
        for i in word:
            q = hp.apply(OCT.generators[i], q)
        rep2, _ = sf.locate(q, OCT)
        assert abs(rep.x - rep2.x) < 1e-8
        assert abs(rep.y - rep2.y) < 1e-8
    assert hp.distance(base, base) == 0.0  # keep base in scope for clarity


# ---------------------------------------------------------------------------
# unfolding


def test_unfold_short_ray_no_crossings():
    # inradius is half the side length; stay well below it
    cp = sf.unfold_ray(OCT, 0.3, 1.0)
    assert cp.deck_word == ()
    assert len(cp.segments) == 1
    assert cp.total_length == 1.0
    assert cp.segments[0].length == pytest.approx(1.0, abs=1e-12)


def test_unfold_bookkeeping_and_foldback():
    rnd = random.Random(99)
    count = 0
    for _ in range(40):
        theta = rnd.uniform(0, 2 * math.pi)
        try:
            cp = sf.unfold_ray(OCT, theta, 9.0)
        except VertexHitError:
            continue
        count += 1
        assert cp.total_length == 9.0
        total = 0.0
        h = hp.Isometry.identity()
        for k, seg in enumerate(cp.segments):
            total += seg.length
            if k > 0:
                prev = cp.segments[k - 1].end
                assert abs(prev.x - seg.start.x) < 1e-9
                assert abs(prev.y - seg.start.y) < 1e-9
            back = h.inverse()
            for p in (hp.apply(back, seg.start), hp.apply(back, seg.end)):
                m = min(
                    OCT.side_geodesic(s).signed_sinh_distance(p) for s in range(8)
                )
                assert m > -1e-8  # folded segment stays in the closed domain
            if k < len(cp.deck_word):
                h = h @ OCT.generators[cp.deck_word[k]]
        assert total == pytest.approx(9.0, abs=1e-8)
    assert count > 30


def test_unfold_rotation_symmetry():
    # deck words of theta and theta+pi are related by the a<->c b<->d relabel
    perm = {0: 4, 1: 5, 2: 6, 3: 7, 4: 0, 5: 1, 6: 2, 7: 3}
    rnd = random.Random(5)
    checked = 0
    for _ in range(25):
        theta = rnd.uniform(0, 2 * math.pi)
        try:
            w1 = sf.unfold_ray(OCT, theta, 8.0).deck_word
            w2 = sf.unfold_ray(OCT, theta + math.pi, 8.0).deck_word
        except VertexHitError:
            continue
        assert tuple(perm[i] for i in w1) == w2
        checked += 1
    assert checked > 15


def test_unfold_reflection_symmetry():
    # the normalizing reflection (axis at disc angle 3pi/8) swaps a<->b and
    # c<->d and sends the direction theta to pi - theta + 3pi/4
    perm = {0: 2, 1: 3, 2: 0, 3: 1, 4: 6, 5: 7, 6: 4, 7: 5}
    rnd = random.Random(6)
    checked = 0
    for _ in range(25):
        theta = rnd.uniform(0, 2 * math.pi)
        try:
            w1 = sf.unfold_ray(OCT, theta, 8.0).deck_word
            w2 = sf.unfold_ray(OCT, math.pi - theta + 0.75 * math.pi, 8.0).deck_word
        except VertexHitError:
            continue
        assert tuple(perm[i] for i in w1) == w2
        checked += 1
    assert checked > 15


def test_unfold_vertex_hit_raises_and_jitter_recovers():
    # aim straight at vertex 0 from the center
    theta = hp.tangent_direction(OCT.basepoint_lift, OCT.vertices[0])
    with pytest.raises(VertexHitError):
        sf.unfold_ray(OCT, theta, 6.0)
    cp = sf.unfold_ray(OCT, theta + 1e-7, 6.0)
    assert cp.total_length == 6.0


def test_unfold_rejects_nonpositive_length():
    with pytest.raises(hp.DomainError):
        sf.unfold_ray(OCT, 0.1, 0.0)


# ---------------------------------------------------------------------------
# serialization


def test_json_roundtrip(tmp_path):
    path = tmp_path / "octagon.json"
    sf.save_json(OCT, str(path))
    loaded = sf.load_json(str(path))
    for g1, g2 in zip(OCT.generators, loaded.generators):
        assert hp.proj_equal(g1, g2, 1e-14)
    for v1, v2 in zip(OCT.vertices, loaded.vertices):
        assert abs(v1.x - v2.x) < 1e-14 and abs(v1.y - v2.y) < 1e-14
    assert loaded.labels == OCT.labels
    assert loaded.pairing == OCT.pairing
    assert loaded.relators == OCT.relators
    assert loaded.genus == 2
    # the file is valid sorted-key JSON
    text = path.read_text(encoding="utf-8")
    data = json.loads(text)
    assert list(data.keys()) == sorted(data.keys())


def test_from_json_validates():
    data = sf.to_json_dict(OCT)
    data["vertices"][0][0] = "99.0"  # break a vertex
    with pytest.raises(ConstructionFailedError):
        sf.from_json_dict(data)


# ---------------------------------------------------------------------------
# glued surfaces from pants-curve data


def polygon_area(group):
    verts = group.vertices
    n = len(verts)
    total = 0.0
    for k in range(n):
        v = verts[k]
        prv = verts[(k - 1) % n]
        nxt = verts[(k + 1) % n]
        total += hp.angle_between(
            hp.tangent_direction(v, prv), hp.tangent_direction(v, nxt)
        )
    return (n - 2) * math.pi - total


def test_custom_symmetric_lengths_match():
    length = 2.0
    fn = [(length, 0.0), (length, 0.0), (length, 0.0)]
    group = sf.build_custom(fn)
    assert group.genus == 2
    for iso in sf.pants_curve_holonomies(fn):
        assert hp.translation_length(iso) == pytest.approx(length, abs=1e-6)
    # the cuff holonomies really belong to the built group: locate folds
    # their basepoint translates back to the basepoint
    for iso in sf.pants_curve_holonomies(fn):
        rep, _ = sf.locate(hp.apply(iso, group.basepoint_lift), group)
        assert hp.distance(rep, group.basepoint_lift) < 1e-8


def test_custom_requested_lengths_recovered_asymmetric():
    fn = [(2.1, 0.3), (2.6, -0.7), (3.2, 1.1)]
    for iso, (length, _) in zip(sf.pants_curve_holonomies(fn), fn):
        assert hp.translation_length(iso) == pytest.approx(length, abs=1e-6)


def test_custom_group_satisfies_invariants():
    group = sf.build_custom([(2.1, 0.3), (2.6, -0.7), (3.2, 1.1)])
    group.check_invariants()
    assert group.n_sides % 2 == 0
    assert polygon_area(group) == pytest.approx(4.0 * math.pi, abs=1e-8)
    # Euler characteristic of the identification complex
    assert len(group.relators) - group.n_sides // 2 + 1 == -2


def test_custom_locate_idempotent():
    group = sf.build_custom([(1.2, 0.0), (3.4, 0.5), (2.2, 0.0)])
    rnd = random.Random(11)
    for _ in range(50):
        p = hp.HPoint(rnd.uniform(-4, 4), math.exp(rnd.uniform(-2, 2)))
        rep, g = sf.locate(p, group)
        rep2, g2 = sf.locate(rep, group)
        assert hp.distance(rep, rep2) < 1e-10
        assert hp.proj_equal(g2, hp.Isometry.identity(), 1e-9)


def test_custom_thin_cuffs_build():
    group = sf.build_custom([(0.8, 0.0), (0.8, 0.4), (0.8, -0.4)])
    assert polygon_area(group) == pytest.approx(4.0 * math.pi, abs=1e-8)


def test_custom_json_roundtrip(tmp_path):
    group = sf.build_custom([(2.0, 0.0), (2.0, 0.0), (2.0, 0.0)])
    path = tmp_path / "custom.json"
    sf.save_json(group, str(path))
    loaded = sf.load_json(str(path))
    loaded.check_invariants()
    assert loaded.n_sides == group.n_sides


def test_custom_rejects_nonpositive_length():
    with pytest.raises(ConstructionFailedError):
        sf.build_custom([(2.0, 0.0), (-1.0, 0.0), (2.0, 0.0)])
    with pytest.raises(ConstructionFailedError):
        sf.build_custom([(2.0, 0.0), (0.0, 0.0), (2.0, 0.0)])


def test_custom_rejects_wrong_count():
    with pytest.raises(InvalidParametersError):
        sf.build_custom([(2.0, 0.0), (2.0, 0.0)])
