"""Recursive construction of the expansion coefficients."""

import random

import pytest

from reynex.data import bnw_datum
from reynex.expansion import (
    ExpansionFamily,
    convolution_grade,
    datum_error,
    differential_error_closed,
    differential_error_direct,
    expand_terms,
    extend_family,
)
from reynex.fields import (
    VectorExpField,
    linear_combination,
    validate,
    value_at_zero,
)
from reynex.operators import heat_propagate, leray_project
from reynex.rational import Rational, RationalComplex

from reference_data import (
    expected_order0,
    expected_order1,
    expected_order2_first_component,
    random_datum,
)


# ---------------------------------------------------------------------------
# low-order closed forms


def test_order0_matches_reference():
    fam = expand_terms(bnw_datum(), 0)
    assert fam.coefficient(0) == expected_order0()


def test_order1_matches_reference():
    fam = expand_terms(bnw_datum(), 1)
    assert fam.coefficient(1) == expected_order1()


def test_order2_first_component_matches_reference():
    fam = expand_terms(bnw_datum(), 2)
    u2 = fam.coefficient(2)
    expected = expected_order2_first_component()
    got = {
        key: vec[0] for key, vec in u2.terms.items() if not vec[0].is_zero()
    }
    assert set(got) == set(expected)
    for key, want in expected.items():
        assert got[key] == RationalComplex(want, Rational(0)), key


# ---------------------------------------------------------------------------
# structural properties


def test_datum_validation_rejects_bad_inputs():
    not_solenoidal = VectorExpField(
        3, {((1, 0, 0), 0, 0): (RationalComplex(Rational(1), Rational(0)),) * 3}
    )
    with pytest.raises(ValueError):
        expand_terms(not_solenoidal, 1)

    moving = heat_propagate(bnw_datum())
    with pytest.raises(ValueError):
        expand_terms(moving, 1)


def test_family_truncate_and_order():
    fam = expand_terms(bnw_datum(), 3)
    assert fam.order == 3
    short = fam.truncate(1)
    assert short.order == 1
    assert short.coefficient(0) is fam.coefficient(0)
    assert short.coefficient(1) is fam.coefficient(1)


def test_extend_family_reuses_prefix():
    fam1 = expand_terms(bnw_datum(), 1)
    fam3 = extend_family(fam1, 3)
    assert fam3.order == 3
    assert fam3.coefficient(0) is fam1.coefficient(0)
    assert fam3.coefficient(1) is fam1.coefficient(1)
    fresh = expand_terms(bnw_datum(), 3)
    for j in range(4):
        assert fam3.coefficient(j) == fresh.coefficient(j)


def test_all_coefficients_validate():
    fam = expand_terms(bnw_datum(), 3)
    for j in range(4):
        report = validate(fam.coefficient(j))
        assert report.ok(), f"grade {j}: {report}"


def test_mode_support_bound():
    datum = bnw_datum()
    max_k = max(abs(c) for (k, _, _) in datum.terms for c in k)
    fam = expand_terms(datum, 4)
    for j in range(5):
        for k, _, _ in fam.coefficient(j).terms:
            assert max(abs(c) for c in k) <= (j + 1) * max_k


def test_assemble_is_exact_linear_combination():
    fam = expand_terms(bnw_datum(), 2)
    r = Rational(1, 2)
    assembled = fam.assemble(r)
    manual = linear_combination(
        [(r**j, fam.coefficient(j)) for j in range(3)]
    )
    assert assembled == manual


# ---------------------------------------------------------------------------
# residual structure


def test_datum_error_empty_for_recursive_families():
    datum = bnw_datum()
    for order in (0, 1, 2):
        fam = expand_terms(datum, order)
        assert not datum_error(fam).terms


@pytest.mark.parametrize("seed", range(20))
def test_datum_error_empty_random_data(seed):
    rng = random.Random(1000 + seed)
    datum = random_datum(rng)
    if not datum.terms:
        pytest.skip("projection annihilated the sample")
    fam = expand_terms(datum, rng.choice([0, 1, 2]))
    assert not datum_error(fam).terms


def test_datum_error_sees_perturbation():
    fam = expand_terms(bnw_datum(), 1)
    bad0 = linear_combination(
        [(Rational(2), fam.coefficient(0))]
    )
    bad = ExpansionFamily(datum=fam.datum, coefficients=[bad0, fam.coefficient(1)])
    err = datum_error(bad)
    assert err.terms  # the doubled order-0 part shows up at t=0
    assert err == value_at_zero(fam.coefficient(0))


@pytest.mark.parametrize("order", [0, 1, 2, 3])
def test_direct_grades_vanish_and_tail_matches_closed(order):
    fam = expand_terms(bnw_datum(), order)
    direct = differential_error_direct(fam)
    closed = differential_error_closed(fam)
    for j in range(order + 1):
        assert not direct[j].terms, f"grade {j} must vanish exactly"
    for j in range(order + 1, 2 * order + 2):
        assert direct[j] == closed.grades[j]


@pytest.mark.parametrize("seed", [7, 8, 9])
def test_direct_vs_closed_random_data(seed):
    rng = random.Random(seed)
    datum = random_datum(rng)
    if not datum.terms:
        pytest.skip("projection annihilated the sample")
    order = rng.choice([1, 2, 3])
    fam = expand_terms(datum, order)
    direct = differential_error_direct(fam)
    closed = differential_error_closed(fam)
    for j in range(order + 1):
        assert not direct[j].terms
    for j in range(order + 1, 2 * order + 2):
        assert direct[j] == closed.grades[j]


def test_convolution_grade_bnw_order0():
    from reynex.operators import ns_bilinear

    fam = expand_terms(bnw_datum(), 0)
    u0 = fam.coefficient(0)
    grade1 = convolution_grade(fam, 1)
    assert grade1 == ns_bilinear(u0, u0)
