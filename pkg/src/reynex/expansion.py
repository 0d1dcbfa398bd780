"""Reynolds-number power expansion of the viscous flow and its residual.

The expansion coefficients are built by the integral recursion

    u_0 = heat flow of the datum,
    u_j = sum_{l=0}^{j-1} duhamel(ns_bilinear(u_l, u_{j-1-l})),

so every u_j is an exact exponential-polynomial field.  Truncating at
order N leaves a residual supported on grades N+1 .. 2N+1; those grades
are pure convolution tails and are computed here in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, List

from .fields import (
    VectorExpField,
    linear_combination,
    time_derivative,
    validate,
    value_at_zero,
    zero_field,
)
from .operators import LerayCache, duhamel, heat_propagate, laplacian, ns_bilinear
from .rational import Rational


@dataclass
class ExpansionFamily:
    """Datum plus the expansion coefficients u_0 .. u_N."""

    datum: VectorExpField
    coefficients: List[VectorExpField]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, j: int) -> VectorExpField:
        return self.coefficients[j]

    def truncate(self, order: int) -> "ExpansionFamily":
        """Prefix family of lower order; coefficients are shared, not copied."""
        if order > self.order:
            raise ValueError(f"cannot truncate order {self.order} to {order}")
        return ExpansionFamily(self.datum, self.coefficients[: order + 1])

    def assemble(self, reynolds) -> VectorExpField:
        """Exact sum over grades of reynolds**j * u_j (rational reynolds)."""
        r = Rational(reynolds) if not isinstance(reynolds, type(Rational(0))) else reynolds
        pairs = []
        power = Rational(1)
        for u in self.coefficients:
            pairs.append((power, u))
            power = power * r
        return linear_combination(pairs)


@dataclass
class GradedError:
    """Residual of the truncated expansion, split by power of the
    Reynolds number.

    grades[j] for j in {N+1, .., 2N+1} is the convolution tail
    sum_l ns_bilinear(u_l, u_{j-1-l}); the residual itself is
    -(sum_j R**j * grades[j]), i.e. the leading minus sign is folded
    into the sign convention, not into the stored fields.
    """

    expansion_order: int
    grades: Dict[int, VectorExpField]


def _check_datum(datum: VectorExpField) -> None:
    for (k, a, b) in datum.terms:
        if (a, b) != (0, 0):
            raise ValueError("datum must be static (all time profiles (0, 0))")
    report = validate(datum)
    if not report.zero_mean:
        raise ValueError("datum must have zero mean (no k = 0 term)")
    if not report.real:
        raise ValueError("datum must be a real field (hermitian coefficients)")
    if not report.solenoidal:
        raise ValueError("datum must be divergence free")


def expand_terms(datum: VectorExpField, order: int) -> ExpansionFamily:
    """Build the expansion family for the given datum up to `order`."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    _check_datum(datum)
    family = ExpansionFamily(datum, [heat_propagate(datum)])
    return extend_family(family, order)


def extend_family(family: ExpansionFamily, order: int) -> ExpansionFamily:
    """Extend an existing family to a higher order, reusing its prefix.

    The recursion is deterministic, so extending and rebuilding from
    scratch produce identical term maps.
    """
    if order <= family.order:
        return family.truncate(order)
    cache = LerayCache()
    coeffs = list(family.coefficients)
    for j in range(len(coeffs), order + 1):
        pairs = [
            (1, ns_bilinear(coeffs[l], coeffs[j - 1 - l], cache))
            for l in range(j)
        ]
        coeffs.append(duhamel(linear_combination(pairs)))
    return ExpansionFamily(family.datum, coeffs)


def convolution_grade(family: ExpansionFamily, j: int, cache: LerayCache | None = None) -> VectorExpField:
    """sum_l ns_bilinear(u_l, u_{j-1-l}) over in-range pairs for grade j >= 1."""
    n = family.order
    lo = max(0, j - n - 1)
    hi = min(n, j - 1)
    if lo > hi:
        return zero_field(family.datum.dim)
    pairs = [
        (1, ns_bilinear(family.coefficients[l], family.coefficients[j - 1 - l], cache))
        for l in range(lo, hi + 1)
    ]
    return linear_combination(pairs)


def differential_error_closed(family: ExpansionFamily) -> GradedError:
    """Residual grades N+1 .. 2N+1 via the closed convolution-tail form."""
    n = family.order
    cache = LerayCache()
    grades = {
        j: convolution_grade(family, j, cache) for j in range(n + 1, 2 * n + 2)
    }
    return GradedError(n, grades)


def differential_error_direct(family: ExpansionFamily) -> Dict[int, VectorExpField]:
    """Residual grades from the defining equations, over all grades 0 .. 2N+1.

    Grades 0 .. N are d/dt u_j - laplacian(u_j) - (convolution of lower
    grades); they vanish exactly for a family built by the recursion.
    Grades N+1 .. 2N+1 are the same convolution tails as the closed
    form.  Useful as a cross-check, quadratic cost in the term counts.
    """
    n = family.order
    cache = LerayCache()
    out: Dict[int, VectorExpField] = {}
    for j in range(0, n + 1):
        u_j = family.coefficients[j]
        pairs = [(1, time_derivative(u_j)), (-1, laplacian(u_j))]
        if j >= 1:
            pairs.append((-1, convolution_grade(family, j, cache)))
        out[j] = linear_combination(pairs)
    for j in range(n + 1, 2 * n + 2):
        out[j] = convolution_grade(family, j, cache)
    return out


def datum_error(family: ExpansionFamily) -> VectorExpField:
    """Initial-time mismatch of the assembled expansion.

    For a family built by expand_terms this is exactly the empty field:
    u_0(0) equals the datum and every Duhamel output vanishes at t = 0.
    Each grade must vanish separately for the mismatch to vanish at all
    Reynolds numbers; the returned field is the grade-wise sum, which
    exposes any hand-built perturbation.
    """
    pairs = [(1, value_at_zero(u)) for u in family.coefficients]
    pairs.append((-1, family.datum))
    return linear_combination(pairs)
