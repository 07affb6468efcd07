"""Gap-formula tests: spiral angle, the three cases, zipper, summands."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lassogap import extended as ext
from lassogap import halfpants as G
from lassogap.errors import (
    InvalidHalfPantsError,
    InvalidPantsError,
    InvalidParametersError,
)
from lassogap.halfpants import GapBreakdown, HalfPantsParams, TopoType

PI = math.pi


def _th(l_cuff, l_loop, tau, delta, n=0):
    return HalfPantsParams(TopoType.THRICE_HOLED, l_cuff, l_loop, tau, delta, n)


def _tor(l_cuff, l_loop, tau, delta):
    return HalfPantsParams(TopoType.ONE_HOLED_TORUS, l_cuff, l_loop, tau, delta)


# ---------------------------------------------------------------------------
# spiral angle and the embedded case


def test_spiral_frozen_value():
    # frozen: direct evaluation, confirmed by the two-quadrilateral
    # construction oracle and the 50-digit mirror
    assert float(G.spiral_angle(2.0, 4.0)) == pytest.approx(
        0.09264000854888221, abs=1e-13
    )


def test_spiral_matches_high_precision_mirror():
    for lc, lz in [(0.3, 0.9), (2.0, 4.0), (5.0, 5.5), (1.0, 30.0)]:
        assert float(G.spiral_angle(lc, lz)) == pytest.approx(
            ext.spiral_angle(lc, lz), abs=1e-13
        )


def test_spiral_degenerate_limit():
    # both arcsin terms approach pi/2 together
    a = float(G.spiral_angle(2.0, 2.0 + 1e-6))
    assert 0.0 < a < 1e-2


def test_spiral_long_zipper_limit():
    assert 0.0 < float(G.spiral_angle(2.0, 60.0)) < 1e-12


def test_spiral_rejects_bad_ordering():
    with pytest.raises(InvalidHalfPantsError):
        G.spiral_angle(2.0, 2.0)
    with pytest.raises(InvalidHalfPantsError):
        G.spiral_angle(2.0, 1.5)
    with pytest.raises(InvalidHalfPantsError):
        G.spiral_angle(0.0, 1.0)
    with pytest.raises(InvalidHalfPantsError):
        G.spiral_angle(1.0, math.inf)


@given(
    st.floats(min_value=0.05, max_value=6.0),
    st.floats(min_value=1e-3, max_value=6.0),
)
def test_spiral_range(l_cuff, excess):
    a = float(G.spiral_angle(l_cuff, l_cuff + excess))
    assert 0.0 < a < PI / 2


def test_spiral_unimodal_decreasing_past_peak():
    # zero at both ends of (l_cuff, inf), single interior max where
    # sinh(l_zip/2) = sqrt(sinh(l_cuff/2) * exp(l_cuff/2)); longer loops
    # subtend thinner gaps from there on
    peak = 2.0 * math.asinh(math.sqrt(math.sinh(1.0) * math.e))
    assert float(G.spiral_angle(2.0, 2.2)) < float(G.spiral_angle(2.0, peak))
    values = [float(G.spiral_angle(2.0, peak + 0.05 + 0.15 * k)) for k in range(40)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_gap_embedded_frozen_value():
    # frozen: 2x the spiral-angle oracle value
    b = G.gap_embedded(2.0, 4.0)
    assert float(b.gap) == pytest.approx(0.18528001709776443, abs=1e-13)


def test_gap_embedded_is_double_spiral():
    for lc, lz in [(0.5, 1.0), (2.0, 4.0), (3.3, 3.4)]:
        assert float(G.gap_embedded(lc, lz).gap) == 2.0 * float(
            G.spiral_angle(lc, lz)
        )


def test_gap_embedded_terms_reproduce():
    b = G.gap_embedded(1.7, 3.9)
    rebuilt = 2.0 * (b.term("arcsin_cosh_ratio") - b.term("arcsin_sinh_ratio"))
    assert float(b.gap) == pytest.approx(rebuilt, abs=1e-12)


def test_breakdown_term_lookup():
    b = G.gap_embedded(2.0, 4.0)
    assert b.term("arcsin_cosh_ratio") > b.term("arcsin_sinh_ratio")
    with pytest.raises(KeyError):
        b.term("no_such_label")
    assert isinstance(b, GapBreakdown)


# ---------------------------------------------------------------------------
# parameter validation


def test_params_reject_bad_tau():
    with pytest.raises(InvalidParametersError):
        _th(2.0, 4.0, tau=2.0, delta=0.1)
    with pytest.raises(InvalidParametersError):
        _th(2.0, 4.0, tau=-0.1, delta=0.1)


def test_params_reject_bad_lengths_and_delta():
    with pytest.raises(InvalidParametersError):
        _th(0.0, 4.0, tau=0.0, delta=0.0)
    with pytest.raises(InvalidParametersError):
        _th(2.0, -4.0, tau=0.0, delta=0.0)
    with pytest.raises(InvalidParametersError):
        _th(2.0, math.nan, tau=0.0, delta=0.0)
    with pytest.raises(InvalidParametersError):
        _th(2.0, 4.0, tau=0.0, delta=-1e-9)


def test_params_reject_decorated_embedded():
    with pytest.raises(InvalidParametersError):
        HalfPantsParams(TopoType.EMBEDDED, 2.0, 4.0, tau=0.5)
    with pytest.raises(InvalidParametersError):
        HalfPantsParams(TopoType.EMBEDDED, 2.0, 4.0, n=1)
    HalfPantsParams(TopoType.EMBEDDED, 2.0, 4.0)  # clean embedded is fine


def test_params_reject_fractional_n_and_bad_type():
    with pytest.raises(InvalidParametersError):
        _th(2.0, 4.0, tau=0.5, delta=0.5, n=0.5)
    with pytest.raises(InvalidParametersError):
        HalfPantsParams("embedded", 2.0, 4.0)


# ---------------------------------------------------------------------------
# thrice-holed sphere, n = 0


def test_n0_frozen_value():
    # frozen: double evaluation, agrees with the 50-digit mirror below
    b = G.gap_three_holed_n0(_th(2.0, 4.0, tau=0.7, delta=0.8))
    assert float(b.gap) == pytest.approx(0.20889047623542822, abs=1e-12)


def test_n0_matches_high_precision_mirror():
    for tau, delta in [(0.0, 0.0), (0.3, 0.1), (0.7, 0.8), (1.9, 2.5)]:
        p = _th(2.0, 4.0, tau=tau, delta=delta)
        assert float(G.gap_three_holed_n0(p).gap) == pytest.approx(
            ext.gap(p), abs=1e-12
        )


def test_n0_swap_symmetry():
    for tau in (0.1, 0.45, 0.7, 1.0, 1.33):
        a = float(G.gap_three_holed_n0(_th(2.0, 4.0, tau=tau, delta=0.6)).gap)
        b = float(G.gap_three_holed_n0(_th(2.0, 4.0, tau=2.0 - tau, delta=0.6)).gap)
        assert a == pytest.approx(b, abs=1e-12)


def test_n0_blocked_configuration_gives_zero():
    # at tau = l_cuff/2, delta = 0 both theta wings sit below the arcsin
    b = G.gap_three_holed_n0(_th(2.0, 4.0, tau=1.0, delta=0.0))
    assert float(b.gap) == 0.0
    assert b.term("theta_tau") < b.term("blocked_arcsin")


def test_n0_terms_reproduce_gap():
    b = G.gap_three_holed_n0(_th(2.0, 4.0, tau=0.7, delta=0.8))
    a = b.term("blocked_arcsin")
    rebuilt = max(b.term("theta_tau") - a, 0.0) + max(
        b.term("theta_cuff_minus_tau") - a, 0.0
    )
    assert float(b.gap) == pytest.approx(rebuilt, abs=1e-12)


def test_n0_rejects_wrong_inputs():
    with pytest.raises(InvalidParametersError):
        G.gap_three_holed_n0(_th(2.0, 4.0, tau=0.7, delta=0.8, n=1))
    with pytest.raises(InvalidParametersError):
        G.gap_three_holed_n0(_tor(2.0, 4.0, tau=0.7, delta=0.8))


def test_n0_orientation_domains_are_complementary():
    # printed ratio has arccosh argument < 1 whenever l_loop > l_cuff, so
    # it rejects every tuple the corrected orientation accepts
    p = _th(2.0, 4.0, tau=0.7, delta=0.8)
    G.gap_three_holed_n0(p)
    with pytest.raises(InvalidParametersError):
        G.gap_three_holed_n0(p, ratio_orientation="printed")
    with pytest.raises(InvalidParametersError):
        G.gap_three_holed_n0(
            _th(4.0, 2.0, tau=0.7, delta=0.8)  # corrected needs l_loop > l_cuff
        )
    with pytest.raises(InvalidParametersError):
        G.gap_three_holed_n0(p, ratio_orientation="sideways")


# ---------------------------------------------------------------------------
# thrice-holed sphere, n != 0


def test_nonzero_frozen_value():
    # frozen: double evaluation, agrees with the 50-digit mirror below
    b = G.gap_three_holed_nonzero(_th(2.0, 4.0, tau=0.7, delta=0.8, n=1))
    assert float(b.gap) == pytest.approx(0.09982963939110223, abs=1e-12)


def test_nonzero_matches_high_precision_mirror():
    for tau, delta, n in [(0.7, 0.8, 1), (0.2, 0.05, 2), (1.9, 1.4, -1), (0.9, 0.0, -3)]:
        p = _th(2.0, 4.0, tau=tau, delta=delta, n=n)
        assert float(G.gap_three_holed_nonzero(p).gap) == pytest.approx(
            ext.gap(p), abs=1e-12
        )


def test_nonzero_mirror_symmetry():
    # n -> -n with tau -> l_cuff - tau is the same half-pants seen from the
    # re-oriented cuff; the locked wrap coordinate makes this exact
    for tau, n in [(0.7, 1), (0.2, 2), (1.1, 3), (1.9, 1)]:
        a = float(G.gap_three_holed_nonzero(_th(2.0, 4.0, tau=tau, delta=0.8, n=n)).gap)
        b = float(
            G.gap_three_holed_nonzero(_th(2.0, 4.0, tau=2.0 - tau, delta=0.8, n=-n)).gap
        )
        assert a == b


def test_nonzero_vacuous_inner_branch():
    # |n| = 1 leaves the inner theta argument negative: blocked by the
    # arcsin alone, and the breakdown says so
    b1 = G.gap_three_holed_nonzero(_th(2.0, 4.0, tau=0.7, delta=0.8, n=1))
    assert b1.term("inner_theta_vacuous") == 1.0
    assert float(b1.gap) == pytest.approx(
        max(b1.term("theta_wrapped") - b1.term("blocked_arcsin"), 0.0), abs=1e-12
    )
    b2 = G.gap_three_holed_nonzero(_th(2.0, 4.0, tau=0.7, delta=0.8, n=2))
    assert b2.term("inner_theta_vacuous") == 0.0


def test_nonzero_terms_reproduce_gap():
    b = G.gap_three_holed_nonzero(_th(2.0, 4.0, tau=0.3, delta=1.1, n=2))
    blocker = (
        b.term("blocked_arcsin")
        if b.term("inner_theta_vacuous")
        else max(b.term("blocked_arcsin"), b.term("theta_wrapped_minus_cuff"))
    )
    rebuilt = min(max(b.term("theta_wrapped") - blocker, 0.0), PI)
    assert float(b.gap) == pytest.approx(rebuilt, abs=1e-12)


def test_nonzero_wrap_conventions():
    # for n > 0 the conventions coincide; for n < 0 they differ by one wrap
    p_pos = _th(2.0, 4.0, tau=0.7, delta=0.8, n=1)
    a = G.gap_three_holed_nonzero(p_pos, wrap_convention="locked")
    b = G.gap_three_holed_nonzero(p_pos, wrap_convention="printed")
    assert float(a.gap) == float(b.gap)
    p_neg = _th(2.0, 4.0, tau=0.7, delta=0.8, n=-1)
    a = G.gap_three_holed_nonzero(p_neg, wrap_convention="locked")
    b = G.gap_three_holed_nonzero(p_neg, wrap_convention="printed")
    assert a.term("wrapped_coordinate") == pytest.approx(0.7, abs=1e-15)
    assert b.term("wrapped_coordinate") == pytest.approx(2.7, abs=1e-15)
    with pytest.raises(InvalidParametersError):
        G.gap_three_holed_nonzero(p_neg, wrap_convention="diagonal")


def test_nonzero_rejects_n0():
    with pytest.raises(InvalidParametersError):
        G.gap_three_holed_nonzero(_th(2.0, 4.0, tau=0.7, delta=0.8, n=0))


# ---------------------------------------------------------------------------
# psi and the one-holed torus


def test_psi_frozen_and_high_precision():
    # frozen: double evaluation; mirror agreement is the contract
    v = G.psi(2.0, 4.0, 1.0)
    assert v == pytest.approx(0.216879272118809, abs=1e-13)
    assert v == pytest.approx(ext.psi(2.0, 4.0, 1.0), abs=1e-12)


def test_psi_long_loop_limit():
    v = G.psi(2.0, 80.0, 0.7)
    assert v == pytest.approx(math.log(math.cosh(0.7) / math.sinh(1.0)), abs=1e-12)


def test_psi_can_be_negative():
    assert G.psi(2.0, 2.05, 0.0) < 0.0


def test_psi_domain_errors():
    with pytest.raises(InvalidParametersError):
        G.psi(2.0, 2.0, 1.0)  # argument exactly 0
    with pytest.raises(InvalidParametersError):
        G.psi(4.0, 2.0, 1.0)  # argument negative
    with pytest.raises(InvalidParametersError):
        G.psi(2.0, math.inf, 1.0)
    with pytest.raises(InvalidParametersError):
        G.psi(2.0, 4.0, -0.5)


def test_torus_matches_high_precision_mirror():
    for tau, delta in [(0.7, 0.8), (0.2, 1.6), (1.5, 0.05), (1.0, 0.0)]:
        p = _tor(2.0, 4.0, tau, delta)
        assert float(G.gap_one_holed_torus(p).gap) == pytest.approx(
            ext.gap(p), abs=1e-12
        )


def test_torus_gap_below_leading_term():
    for tau in (0.1, 0.7, 1.3, 1.9):
        for delta in (0.0, 0.4, 1.2):
            b = G.gap_one_holed_torus(_tor(2.0, 4.0, tau, delta))
            assert float(b.gap) <= b.term("lead_arcsin") + 1e-15


def test_torus_ceiling_index_jump():
    # psi(2, 4, 0.8) ~ 0.07385; crossing tau over it drops the first
    # ceiling index by exactly 1
    ps = G.psi(2.0, 4.0, 0.8)
    lo = G.gap_one_holed_torus(_tor(2.0, 4.0, ps - 1e-6, 0.8))
    hi = G.gap_one_holed_torus(_tor(2.0, 4.0, ps + 1e-6, 0.8))
    assert lo.term("ceil_index_tau") - hi.term("ceil_index_tau") == 1.0
    assert lo.term("psi") == pytest.approx(ps, abs=1e-15)


def test_torus_terms_reproduce_gap():
    b = G.gap_one_holed_torus(_tor(2.0, 4.0, 0.6, 1.3))
    rebuilt = min(
        max(
            b.term("lead_arcsin") - b.term("theta_tau_side") - b.term("theta_far_side"),
            0.0,
        ),
        PI,
    )
    assert float(b.gap) == pytest.approx(rebuilt, abs=1e-12)


def test_torus_rejects_wrong_type_and_domain():
    with pytest.raises(InvalidParametersError):
        G.gap_one_holed_torus(_th(2.0, 4.0, tau=0.7, delta=0.8))
    with pytest.raises(InvalidParametersError):
        G.gap_one_holed_torus(_tor(4.0, 2.0, 0.7, 0.8))


# ---------------------------------------------------------------------------
# dispatch and range sweep


def test_gap_dispatches_by_type():
    pe = HalfPantsParams(TopoType.EMBEDDED, 2.0, 4.0)
    assert float(G.gap(pe).gap) == float(G.gap_embedded(2.0, 4.0).gap)
    p0 = _th(2.0, 4.0, tau=0.7, delta=0.8)
    assert float(G.gap(p0).gap) == float(G.gap_three_holed_n0(p0).gap)
    p1 = _th(2.0, 4.0, tau=0.7, delta=0.8, n=-2)
    assert float(G.gap(p1).gap) == float(G.gap_three_holed_nonzero(p1).gap)
    pt = _tor(2.0, 4.0, 0.7, 0.8)
    assert float(G.gap(pt).gap) == float(G.gap_one_holed_torus(pt).gap)


def test_gap_range_random_sweep():
    import random

    rng = random.Random(1138)
    for _ in range(10_000):
        l_cuff = rng.uniform(0.1, 5.0)
        l_loop = l_cuff + rng.uniform(0.01, 5.0)
        tau = rng.uniform(0.0, l_cuff * 0.999)
        delta = rng.uniform(0.0, 3.0)
        case = rng.randrange(4)
        if case == 0:
            p = HalfPantsParams(TopoType.EMBEDDED, l_cuff, l_loop)
        elif case == 1:
            p = _th(l_cuff, l_loop, tau, delta)
        elif case == 2:
            n = rng.choice([-3, -2, -1, 1, 2, 3])
            p = _th(l_cuff, l_loop, tau, delta, n)
        else:
            p = _tor(l_cuff, l_loop, tau, delta)
        v = float(G.gap(p).gap)
        assert 0.0 <= v <= PI


# ---------------------------------------------------------------------------
# zipper length and the cone-surface summands


def test_zipper_cusp_frozen_value():
    # theta_p = pi with two cusps: cosh^2(lz/2) = 2
    v = G.zipper_length(0.0, 0.0, PI)
    assert v == pytest.approx(2.0 * math.acosh(math.sqrt(2.0)), abs=1e-15)
    assert v == pytest.approx(1.7627471740390861, abs=1e-12)


def test_zipper_frozen_value_and_mirror():
    v = G.zipper_length(1.0, 2.0, PI / 2)
    assert v == pytest.approx(3.847715518081598, abs=1e-12)
    assert v == pytest.approx(ext.zipper_length(1.0, 2.0, PI / 2), abs=1e-12)


def test_zipper_symmetric():
    for l1, l2, th in [(0.5, 2.5, 1.0), (1.0, 2.0, PI / 2), (0.0, 3.0, 2.0)]:
        assert G.zipper_length(l1, l2, th) == G.zipper_length(l2, l1, th)


def test_zipper_domain_errors():
    with pytest.raises(InvalidPantsError):
        G.zipper_length(-1.0, 2.0, PI / 2)
    with pytest.raises(InvalidPantsError):
        G.zipper_length(1.0, 2.0, 0.0)
    with pytest.raises(InvalidPantsError):
        G.zipper_length(1.0, 2.0, 2.0 * PI)
    with pytest.raises(InvalidPantsError):
        G.zipper_length(1.0, 2.0, math.nan)


def test_twz_interior_dual_forms_agree():
    # the derivation chain evaluated both ways
    a = float(G.twz_interior_summand(1.0, 1.0, PI / 2))
    b = float(G.twz_interior_summand(1.0, 1.0, PI / 2, form="zipper"))
    assert a == pytest.approx(0.4071432098748534, abs=1e-13)
    assert a == pytest.approx(b, abs=1e-12)
    assert a == pytest.approx(ext.twz_interior_summand(1.0, 1.0, PI / 2), abs=1e-12)


def test_twz_interior_cusp_value():
    assert float(G.twz_interior_summand(0.0, 0.0, PI)) == pytest.approx(
        PI / 2, abs=1e-15
    )


def test_twz_interior_small_angle_limit():
    assert 0.0 < float(G.twz_interior_summand(1.0, 2.0, 1e-8)) < 1e-8


def test_twz_exterior_dual_forms_agree():
    a = float(G.twz_exterior_summand(1.0, 2.0, PI / 2))
    b = float(G.twz_exterior_summand(1.0, 2.0, PI / 2, form="arcsin"))
    assert a == pytest.approx(0.6292431971444782, abs=1e-13)
    assert a == pytest.approx(b, abs=1e-12)
    assert a == pytest.approx(ext.twz_exterior_summand(1.0, 2.0, PI / 2), abs=1e-12)


def test_twz_exterior_interior_cuff_zero():
    # sinh(0) kills the arctan: the summand is the full half cone angle
    assert float(G.twz_exterior_summand(0.0, 1.5, 1.1)) == 1.1 / 2


def test_twz_dual_forms_random_grid():
    import random

    rng = random.Random(7)
    for _ in range(1000):
        l1 = rng.uniform(0.0, 5.0)
        l2 = rng.uniform(0.0, 5.0)
        th = rng.uniform(1e-3, PI)
        i1 = float(G.twz_interior_summand(l1, l2, th))
        i2 = float(G.twz_interior_summand(l1, l2, th, form="zipper"))
        assert abs(i1 - i2) <= 1e-12
        assert 0.0 < i1 < PI
        e1 = float(G.twz_exterior_summand(l1, l2, th))
        e2 = float(G.twz_exterior_summand(l1, l2, th, form="arcsin"))
        assert abs(e1 - e2) <= 1e-12
        assert 0.0 < e1 <= th / 2 + 1e-15


def test_twz_domain_errors():
    with pytest.raises(InvalidPantsError):
        G.twz_interior_summand(1.0, 1.0, PI + 0.1)
    with pytest.raises(InvalidPantsError):
        G.twz_exterior_summand(1.0, 1.0, 0.0)
    with pytest.raises(InvalidPantsError):
        G.twz_exterior_summand(-1.0, 1.0, 1.0)
    with pytest.raises(InvalidParametersError):
        G.twz_interior_summand(1.0, 1.0, 1.0, form="wrong")
    with pytest.raises(InvalidParametersError):
        G.twz_exterior_summand(1.0, 1.0, 1.0, form="wrong")


# ---------------------------------------------------------------------------
# high-precision kernel mirror


def test_extended_theta_matches_double():
    from lassogap import hyperbolic as H

    assert float(H.theta(2.0, 4.0, 1.0)) == pytest.approx(
        ext.theta(2.0, 4.0, 1.0), abs=1e-13
    )
