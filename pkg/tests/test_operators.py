"""Mode-wise operators: projection, advection, heat flow, and sources."""

import math

import pytest
from scipy.integrate import quad

from reynex.data import bnw_datum
from reynex.fields import VectorExpField, validate, wave_norm_sq
from reynex.operators import (
    LerayCache,
    advect,
    duhamel,
    heat_propagate,
    laplacian,
    leray_project,
    ns_bilinear,
)
from reynex.rational import RC_ZERO, Rational, RationalComplex


def rc(re, im=0):
    return RationalComplex(Rational(re), Rational(im))


# ---------------------------------------------------------------------------
# Leray projection


def test_leray_projection_worked_example():
    # project (1,0,0) orthogonally to k=(2,1,1): subtract (k.c/|k|^2) k = (2/6)k
    f = VectorExpField(3, {((2, 1, 1), 0, 1): (rc(1), rc(0), rc(0))})
    p = leray_project(f)
    vec = p.terms[((2, 1, 1), 0, 1)]
    third = Rational(1, 3)
    assert vec == (rc(1) * third, rc(-1) * third, rc(-1) * third)


def test_leray_idempotent_and_solenoidal():
    f = VectorExpField(
        3,
        {
            ((2, 1, 1), 0, 1): (rc(1), rc(2), rc(-1)),
            ((-2, -1, -1), 0, 1): (rc(1), rc(2), rc(-1)),
        },
    )
    once = leray_project(f)
    twice = leray_project(once)
    assert once == twice
    assert validate(once).solenoidal
    assert once.solenoidal  # flag set, not just derivable


def test_leray_preserves_reality():
    f = VectorExpField(
        3,
        {
            ((1, 2, 0), 0, 2): (rc(0, 1), rc(1), rc(0)),
            ((-1, -2, 0), 0, 2): (rc(0, -1), rc(1), rc(0)),
        },
        real=True,
    )
    assert validate(f).real
    p = leray_project(f)
    assert validate(p).real and p.real


def test_leray_fixes_divergence_free_input():
    u = bnw_datum()
    assert leray_project(u) == u


def test_leray_rejects_zero_mode():
    cache = LerayCache()
    with pytest.raises(ValueError):
        cache.inverse_norm_sq((0, 0, 0))


# ---------------------------------------------------------------------------
# advection and the bilinear map


def test_advect_single_mode_pair():
    # v = e_1 e^{i x.k1}, w = e_2 e^{i x.k2}: (v . grad) w = i (v.k2) w-vector
    v = VectorExpField(3, {((1, 0, 0), 0, 1): (rc(1), rc(0), rc(0))})
    w = VectorExpField(3, {((0, 1, 0), 1, 2): (rc(0), rc(1), rc(0))})
    a = advect(v, w)
    # v.k2 = (1,0,0in).(0,1,0) = 0: advection vanishes
    assert not a.terms

    w2 = VectorExpField(3, {((1, 1, 0), 1, 2): (rc(1), rc(-1), rc(0))})
    a2 = advect(v, w2)
    vec = a2.terms[((2, 1, 0), 1, 3)]
    # i * (v.k2) * c_w with v.k2 = 1
    assert vec == (rc(0, 1), rc(0, -1), RC_ZERO)


def test_bilinear_is_projected_negated_advection():
    u = bnw_datum()
    b = ns_bilinear(u, u)
    manual = leray_project(advect(u, u))
    for key, vec in b.terms.items():
        assert vec == tuple(-c for c in manual.terms[key])
    assert b.solenoidal
    assert validate(b).ok()


def test_bilinear_bnw_self_interaction_profile():
    u0 = heat_propagate(bnw_datum())
    b = ns_bilinear(u0, u0)
    # products of b=2 profiles live at b=4; all wave vectors are pair sums
    assert {key[2] for key in b.terms} == {4}
    assert all(wave_norm_sq(key[0]) in (4, 6) for key in b.terms)


# ---------------------------------------------------------------------------
# heat flow


def test_heat_propagate_adds_decay_rates():
    u = bnw_datum()
    flowed = heat_propagate(u)
    assert {key[2] for key in flowed.terms} == {2}
    assert all(key[1] == 0 for key in flowed.terms)
    # coefficients unchanged
    for (k, a, b), vec in flowed.terms.items():
        assert vec == u.terms[(k, 0, 0)]


def test_heat_propagate_requires_static_input():
    moving = VectorExpField(3, {((1, 1, 0), 0, 3): (rc(1), rc(-1), rc(0))})
    with pytest.raises(ValueError):
        heat_propagate(moving)


def test_laplacian_multiplies_by_minus_norm_sq():
    u = bnw_datum()
    lap = laplacian(u)
    for (k, a, b), vec in lap.terms.items():
        expected = tuple(c * Rational(-wave_norm_sq(k)) for c in u.terms[(k, a, b)])
        assert vec == expected


# ---------------------------------------------------------------------------
# Duhamel source integrals, checked against numeric quadrature


@pytest.mark.parametrize("a", [0, 1, 2])
@pytest.mark.parametrize("b", [2, 4, 6])
@pytest.mark.parametrize("m", [2, 6])
def test_duhamel_against_quadrature(a, b, m):
    # field concentrated on one mode with |k|^2 = m, profile t^a e^{-bt}
    k = (1, 1, 0) if m == 2 else (2, 1, 1)
    f = VectorExpField(3, {(k, a, b): (rc(1), rc(-1), rc(0)) if m == 2 else (rc(1), rc(0), rc(-2))})
    g = duhamel(f)

    def closed(t):
        total = 0.0
        for (kk, aa, bb), vec in g.terms.items():
            total += float(vec[0].re) * t**aa * math.exp(-bb * t)
        return total

    for t in (0.5, 1.0, 2.0):
        target, _ = quad(
            lambda s: math.exp(-m * (t - s)) * s**a * math.exp(-b * s), 0.0, t,
            epsabs=1e-14, epsrel=1e-14,
        )
        assert abs(closed(t) - target) < 1e-10


def test_duhamel_resonant_branch_exact_shape():
    # source rate equal to |k|^2: the integral brings down one power of t
    k = (1, 1, 0)
    f = VectorExpField(3, {(k, 0, 2): (rc(3), rc(-3), rc(0))})
    g = duhamel(f)
    assert g.terms == {(k, 1, 2): (rc(3), rc(-3), rc(0))}


def test_duhamel_solves_inhomogeneous_heat_equation():
    # check d/dt K f = Lap K f + f termwise, exactly
    from reynex.fields import linear_combination, time_derivative

    f = VectorExpField(
        3,
        {
            ((1, 1, 0), 1, 2): (rc(1), rc(-1), rc(0)),   # resonant
            ((2, 1, 1), 0, 2): (rc(1), rc(0), rc(-2)),   # non-resonant
        },
    )
    g = duhamel(f)
    residual = linear_combination(
        [
            (Rational(1), time_derivative(g)),
            (Rational(-1), laplacian(g)),
            (Rational(-1), f),
        ]
    )
    assert not residual.terms


def test_duhamel_vanishes_at_zero():
    from reynex.fields import value_at_zero

    f = VectorExpField(3, {((2, 1, 1), 0, 3): (rc(1), rc(0), rc(-2)), ((1, 1, 0), 2, 5): (rc(1), rc(-1), rc(0))})
    g = duhamel(f)
    assert not value_at_zero(g).terms


def test_duhamel_rejects_zero_mode():
    f = VectorExpField(3, {((0, 0, 0), 0, 1): (rc(1), rc(0), rc(0))})
    with pytest.raises(ValueError):
        duhamel(f)
