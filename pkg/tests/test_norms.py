"""Exact squared-norm series and their floating-point evaluation."""

import math

import pytest

from reynex.data import bnw_datum
from reynex.expansion import differential_error_closed, expand_terms
from reynex.fields import VectorExpField
from reynex.norms import (
    NormSeries,
    build_estimator_bundle,
    error_series,
    growth_series,
    mode_bound,
    norm_bracket,
    rough_error_estimator,
    sobolev_pairing,
)
from reynex.rational import Rational, RationalComplex, rational

from reference_data import (
    N1_ERROR3_SQ,
    N1_GROWTH3_SQ,
    N1_GROWTH4_SQ,
    n2_growth3_sq,
)

TWO_PI_CUBED = (2 * math.pi) ** 3


def rc(re, im=0):
    return RationalComplex(Rational(re), Rational(im))


def freeze(table):
    return {key: rational(value) for key, value in table.items()}


# ---------------------------------------------------------------------------
# pairings


def test_pairing_of_datum_with_itself():
    u = bnw_datum()
    pairing = sobolev_pairing(u, u, 3)
    # six modes, |k|^2 = 2 so |k|^6 = 8, |c|^2 = 2 each: 6 * 8 * 2 = 96
    assert pairing == {(0, 0): Rational(96)}


def test_pairing_heat_flow():
    u0 = expand_terms(bnw_datum(), 0).coefficient(0)
    pairing = sobolev_pairing(u0, u0, 3)
    assert pairing == {(0, 4): Rational(96)}


def test_pairing_disjoint_supports_vanishes():
    f = VectorExpField(3, {((1, 1, 0), 0, 2): (rc(1), rc(-1), rc(0))})
    g = VectorExpField(3, {((2, 1, 1), 0, 2): (rc(1), rc(0), rc(-2))})
    assert sobolev_pairing(f, g, 3) == {}


def test_pairing_symmetry_for_real_fields():
    fam = expand_terms(bnw_datum(), 1)
    u0, u1 = fam.coefficient(0), fam.coefficient(1)
    assert sobolev_pairing(u0, u1, 3) == sobolev_pairing(u1, u0, 3)


# ---------------------------------------------------------------------------
# growth and error series


def test_growth_series_order1_closed_forms():
    fam = expand_terms(bnw_datum(), 1)
    assert growth_series(fam, 3).terms == freeze(N1_GROWTH3_SQ)
    assert growth_series(fam, 4).terms == freeze(N1_GROWTH4_SQ)


def test_error_series_order1_closed_form():
    fam = expand_terms(bnw_datum(), 1)
    graded = differential_error_closed(fam)
    assert error_series(graded, 3).terms == freeze(N1_ERROR3_SQ)


def test_growth_series_order2_closed_form():
    fam = expand_terms(bnw_datum(), 2)
    assert growth_series(fam, 3).terms == n2_growth3_sq()


def test_error_series_order2_shape():
    fam = expand_terms(bnw_datum(), 2)
    series = error_series(differential_error_closed(fam), 3)
    assert len(series.terms) == 48
    assert {j for (j, _, _) in series.terms} == {6, 8, 10}
    assert all(a == 0 for (_, a, _) in series.terms)


def test_initial_growth_value():
    # ||datum||_3 = sqrt(96) * (2 pi)^{3/2} = 4 sqrt(6) (2 pi)^{3/2}
    fam = expand_terms(bnw_datum(), 1)
    series = growth_series(fam, 3)
    want = math.sqrt(96 * TWO_PI_CUBED)
    assert abs(series.value(0.1, 0.0) - want) < 1e-12 * want
    assert abs(series.at_reynolds(0.1).value(0.0) - want) < 1e-12 * want


def test_series_value_matches_direct_sum():
    fam = expand_terms(bnw_datum(), 1)
    series = growth_series(fam, 3)
    R, t = 0.08, 0.7
    direct = sum(
        float(c) * R**j * t**a * math.exp(-b * t)
        for (j, a, b), c in series.terms.items()
    )
    want = math.sqrt(direct * TWO_PI_CUBED)
    assert abs(series.value(R, t) - want) < 1e-13 * want


def test_collapse_then_shift_consistency():
    fam = expand_terms(bnw_datum(), 1)
    graded = differential_error_closed(fam)
    series = error_series(graded, 3)
    R, t = 0.08, 0.8
    shifted = series.shifted(2 * (fam.order + 1))
    direct = series.value(R, t) / R ** (fam.order + 1)
    assert abs(shifted.value(R, t) - direct) < 1e-12 * abs(direct)


def test_value_sq_nonnegative_despite_cancellation():
    # (e^{-4t} - e^{-6t})^2 as a series: B_{0,8} - 2 B_{0,10} + B_{0,12}
    series = NormSeries(
        3,
        3,
        {
            (0, 0, 8): Rational(1),
            (0, 0, 10): Rational(-2),
            (0, 0, 12): Rational(1),
        },
    )
    for t in [0.0, 1e-8, 1e-6, 1e-4, 0.01, 0.1, 1.0, 10.0]:
        assert series.value(1.0, t) >= 0.0


def test_value_sq_raises_on_genuinely_negative_series():
    series = NormSeries(3, 3, {(0, 0, 4): Rational(-1)})
    with pytest.raises(ArithmeticError):
        series.value(1.0, 0.5)


# ---------------------------------------------------------------------------
# estimator bundles


def test_tautological_below_rough_on_grid():
    fam = expand_terms(bnw_datum(), 1)
    graded = differential_error_closed(fam)
    bundle = build_estimator_bundle(fam, graded=graded)
    rough = rough_error_estimator(fam, 3, 0.323)
    for R in (0.05, 0.08, 0.12):
        for t in (0.1, 0.5, 1.0, 2.0, 5.0):
            assert bundle.error_value(R, t) <= rough.value(R, t) * (1 + 1e-12)


def test_bundle_modes_and_frozen_consistency():
    fam = expand_terms(bnw_datum(), 1)
    taut = build_estimator_bundle(fam)
    rough = build_estimator_bundle(fam, mode="rough")
    R = 0.08
    frozen_t = taut.frozen(R)
    frozen_r = rough.frozen(R)
    for t in (0.2, 1.0, 3.0):
        assert abs(frozen_t.norm_n(t) - taut.norm_value(R, t)) < 1e-12
        assert abs(frozen_r.norm_n(t) - frozen_t.norm_n(t)) < 1e-12
        assert frozen_t.error(t) <= frozen_r.error(t) * (1 + 1e-12)
        # scaled error is error / R^{N+1}
        scale = R ** (fam.order + 1)
        assert abs(frozen_t.error_scaled(t) * scale - frozen_t.error(t)) < 1e-12 * max(
            frozen_t.error(t), 1e-300
        )


def test_bundle_rejects_unknown_mode():
    fam = expand_terms(bnw_datum(), 0)
    with pytest.raises(ValueError):
        build_estimator_bundle(fam, mode="sharp")


# ---------------------------------------------------------------------------
# bound utilities


def test_mode_bound_decays_with_order():
    radius = 2.0
    k = (2, 1, 1)
    assert mode_bound(radius, k, 3) == pytest.approx(radius / 6**1.5)
    assert mode_bound(radius, k, 4) < mode_bound(radius, k, 3)


def test_norm_bracket():
    lo, hi = norm_bracket(10.0, 1.5)
    assert (lo, hi) == (8.5, 11.5)
    lo, hi = norm_bracket(1.0, 3.0)
    assert lo == 0.0 and hi == 4.0
