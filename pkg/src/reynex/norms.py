"""Sobolev growth and truncation-error estimators as exact series.

Squared norms of expansion quantities are bivariate series in the
Reynolds number R and the time profiles t**a e^{-bt}, with exact
rational coefficients and an implied (2*pi)**dim prefactor.  Floats
appear only at evaluation time, where compensated summation and a
clamp-to-zero guard keep the square roots well defined: differences of
nearby exponentials cancel catastrophically near t = 0, so a squared
norm may evaluate to a tiny negative number in floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Tuple

from .expansion import ExpansionFamily, GradedError, differential_error_closed
from .fields import ProfileKey, VectorExpField, wave_norm_sq
from .rational import RC_ZERO, Rational

SeriesKey = Tuple[int, int, int]  # (j, a, b): R**j * t**a * exp(-b*t)

# relative tolerance for the clamp guard: a squared norm may not be
# more negative than this times the sum of term magnitudes
_CLAMP_GUARD = 1e-12


def _neumaier(values: List[float]) -> float:
    """Compensated (Neumaier) summation of a float list."""
    total = 0.0
    comp = 0.0
    for x in values:
        s = total + x
        if abs(total) >= abs(x):
            comp += (total - s) + x
        else:
            comp += (x - s) + total
        total = s
    return total + comp


def sobolev_pairing(
    f: VectorExpField, g: VectorExpField, order: int
) -> Dict[ProfileKey, Rational]:
    """Exact H^order pairing of two real fields as a profile polynomial.

    Returns the map (a, b) -> rational coefficient of t**a e^{-bt} in
    sum_k |k|^(2*order) conj(f_k(t)) . g_k(t), with the (2*pi)**dim
    volume factor left implied.  Real inputs give a real result; a
    nonzero imaginary residue means a non-real input and is an error.
    """
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    f_by_k: Dict = {}
    for (k, a, b), vec in f.terms.items():
        f_by_k.setdefault(k, []).append((a, b, vec))
    g_by_k: Dict = {}
    for (k, a, b), vec in g.terms.items():
        g_by_k.setdefault(k, []).append((a, b, vec))

    out_re: Dict[ProfileKey, Rational] = {}
    out_im: Dict[ProfileKey, Rational] = {}
    zero = Rational(0)
    self_pairing = f is g
    for k, f_profiles in f_by_k.items():
        g_profiles = g_by_k.get(k)
        if g_profiles is None:
            continue
        weight = wave_norm_sq(k) ** order
        if self_pairing:
            # conj symmetry: the (i, i') and (i', i) profile pairs carry
            # equal real parts and opposite imaginary parts
            for i, (a1, b1, vec1) in enumerate(f_profiles):
                for a2, b2, vec2 in f_profiles[i:]:
                    re = zero
                    for c1, c2 in zip(vec1, vec2):
                        re += c1.re * c2.re + c1.im * c2.im
                    if not re:
                        continue
                    if (a1, b1) != (a2, b2):
                        re += re
                    key = (a1 + a2, b1 + b2)
                    out_re[key] = out_re.get(key, zero) + re * weight
            continue
        for a1, b1, vec1 in f_profiles:
            for a2, b2, vec2 in g_profiles:
                # conj(vec1) . vec2, times the |k|^(2n) weight
                re = zero
                im = zero
                for c1, c2 in zip(vec1, vec2):
                    re += c1.re * c2.re + c1.im * c2.im
                    im += c1.re * c2.im - c1.im * c2.re
                key = (a1 + a2, b1 + b2)
                if re:
                    out_re[key] = out_re.get(key, zero) + re * weight
                if im:
                    out_im[key] = out_im.get(key, zero) + im * weight
    for key, val in out_im.items():
        if val:
            raise ValueError(
                "pairing has a complex value; inputs must be real fields"
            )
    return {key: val for key, val in out_re.items() if val}


@dataclass
class CollapsedNormSeries:
    """A squared-norm series frozen at a fixed Reynolds number.

    Entries hold exact-collapsed float coefficients per profile plus the
    magnitude sums used by the clamp guard.  Evaluation is cheap enough
    for an ODE right-hand side.
    """

    dim: int
    entries: List[Tuple[int, int, float, float]]  # (a, b, coeff, magnitude)

    def value_sq(self, t: float) -> float:
        total = 0.0
        comp = 0.0
        for a, b, cf, _ in self.entries:
            x = cf * (t ** a) * math.exp(-b * t)
            s = total + x
            if abs(total) >= abs(x):
                comp += (total - s) + x
            else:
                comp += (x - s) + total
            total = s
        total += comp
        if total < 0.0:
            mag = sum(mg * (t ** a) * math.exp(-b * t) for a, b, _, mg in self.entries)
            if -total > _CLAMP_GUARD * mag + 1e-300:
                raise ArithmeticError(
                    f"squared norm {total} is negative beyond cancellation noise"
                )
            total = 0.0
        return (2.0 * math.pi) ** self.dim * total

    def value(self, t: float) -> float:
        return math.sqrt(self.value_sq(t))


@dataclass
class NormSeries:
    """Exact squared-norm series: map (j, a, b) -> rational coefficient.

    Represents (2*pi)**dim * sum coeff * R**j * t**a * exp(-b*t); the
    volume prefactor is implied by `dim` and applied at evaluation.
    """

    sobolev_order: int
    dim: int
    terms: Dict[SeriesKey, Rational] = field(default_factory=dict)

    def reynolds_powers(self) -> List[int]:
        return sorted({j for (j, _, _) in self.terms})

    def at_reynolds(self, reynolds: float) -> CollapsedNormSeries:
        """Collapse the R dependence exactly (binary float R is a rational)."""
        r = Rational(reynolds)
        coeffs: Dict[ProfileKey, Rational] = {}
        mags: Dict[ProfileKey, Rational] = {}
        zero = Rational(0)
        for (j, a, b), c in self.terms.items():
            cr = c * r ** j
            key = (a, b)
            coeffs[key] = coeffs.get(key, zero) + cr
            mags[key] = mags.get(key, zero) + abs(cr)
        entries = [
            (a, b, float(coeffs[(a, b)]), float(mags[(a, b)]))
            for (a, b) in sorted(coeffs)
        ]
        return CollapsedNormSeries(self.dim, entries)

    def value_sq(self, reynolds: float, t: float) -> float:
        return self.at_reynolds(reynolds).value_sq(t)

    def value(self, reynolds: float, t: float) -> float:
        return math.sqrt(self.value_sq(reynolds, t))

    def shifted(self, down: int) -> "NormSeries":
        """Divide by R**down exactly (shift every power; must stay >= 0)."""
        shifted: Dict[SeriesKey, Rational] = {}
        for (j, a, b), c in self.terms.items():
            if j - down < 0:
                raise ValueError(f"shift by {down} makes power {j} negative")
            shifted[(j - down, a, b)] = c
        return NormSeries(self.sobolev_order, self.dim, shifted)


def _accumulate_pairings(
    fields_by_grade: Dict[int, VectorExpField], order: int, dim: int
) -> NormSeries:
    """sum over grade pairs of R**(j+j') <f_j | f_j'>, using symmetry."""
    series: Dict[SeriesKey, Rational] = {}
    zero = Rational(0)
    grades = sorted(fields_by_grade)
    for i, j1 in enumerate(grades):
        for j2 in grades[i:]:
            factor = 1 if j1 == j2 else 2
            pairing = sobolev_pairing(
                fields_by_grade[j1], fields_by_grade[j2], order
            )
            jpow = j1 + j2
            for (a, b), c in pairing.items():
                key = (jpow, a, b)
                acc = series.get(key, zero) + factor * c
                if acc:
                    series[key] = acc
                elif key in series:
                    del series[key]
    return NormSeries(order, dim, series)


def growth_series(family: ExpansionFamily, order: int) -> NormSeries:
    """Exact squared H^order norm of the assembled expansion as a series in R."""
    by_grade = {j: u for j, u in enumerate(family.coefficients)}
    return _accumulate_pairings(by_grade, order, family.datum.dim)


def error_series(graded: GradedError, order: int) -> NormSeries:
    """Exact squared H^order norm of the residual as a series in R.

    The residual is -(sum_j R**j grade_j); signs cancel in the square,
    so the series is the double sum of pairings of the stored grades.
    """
    if not graded.grades:
        return NormSeries(order, 3, {})
    dim = next(iter(graded.grades.values())).dim
    return _accumulate_pairings(graded.grades, order, dim)


@dataclass
class _ProfileEvaluator:
    """sqrt of (2*pi)**dim times an exact profile polynomial, at float t."""

    dim: int
    entries: List[Tuple[int, int, float, float]]

    def value(self, t: float) -> float:
        vals = [cf * (t ** a) * math.exp(-b * t) for a, b, cf, _ in self.entries]
        mags = [mg * (t ** a) * math.exp(-b * t) for a, b, _, mg in self.entries]
        total = _neumaier(vals)
        if total < 0.0:
            if -total > _CLAMP_GUARD * sum(mags) + 1e-300:
                raise ArithmeticError("squared norm negative beyond noise")
            total = 0.0
        return math.sqrt((2.0 * math.pi) ** self.dim * total)


def _profile_evaluator(profile: Dict[ProfileKey, Rational], dim: int) -> _ProfileEvaluator:
    entries = [
        (a, b, float(profile[(a, b)]), abs(float(profile[(a, b)])))
        for (a, b) in sorted(profile)
    ]
    return _ProfileEvaluator(dim, entries)


@dataclass
class RoughErrorEstimator:
    """Product-of-norms bound on the residual.

    eps(R, t) = constant * sum_{j=N+1}^{2N+1} R**j *
                sum_l ||u_l(t)||_n * ||u_{j-1-l}(t)||_{n+1}

    over the in-range tail pairs.  Tracks the tautological series from
    above by the bilinear estimate, at far lower symbolic cost.
    """

    expansion_order: int
    sobolev_order: int
    constant: float
    norms_n: List[_ProfileEvaluator]
    norms_next: List[_ProfileEvaluator]

    def value(self, reynolds: float, t: float) -> float:
        return self._value(reynolds, t, shift=0)

    def value_scaled(self, reynolds: float, t: float) -> float:
        """The estimator divided by R**(N+1), evaluated stably."""
        return self._value(reynolds, t, shift=self.expansion_order + 1)

    def _value(self, reynolds: float, t: float, shift: int) -> float:
        n = self.expansion_order
        vals_n = [ev.value(t) for ev in self.norms_n]
        vals_next = [ev.value(t) for ev in self.norms_next]
        total = 0.0
        for j in range(n + 1, 2 * n + 2):
            inner = 0.0
            for l in range(max(0, j - n - 1), min(n, j - 1) + 1):
                inner += vals_n[l] * vals_next[j - 1 - l]
            total += (reynolds ** (j - shift)) * inner
        return self.constant * total


def rough_error_estimator(
    family: ExpansionFamily, order: int, constant: float
) -> RoughErrorEstimator:
    dim = family.datum.dim
    norms_n = [
        _profile_evaluator(sobolev_pairing(u, u, order), dim)
        for u in family.coefficients
    ]
    norms_next = [
        _profile_evaluator(sobolev_pairing(u, u, order + 1), dim)
        for u in family.coefficients
    ]
    return RoughErrorEstimator(
        family.order, order, constant, norms_n, norms_next
    )


# ---------------------------------------------------------------------------
# estimator bundle
# ---------------------------------------------------------------------------


@dataclass
class FrozenBundle:
    """Estimator callables at a fixed Reynolds number (ODE-ready)."""

    reynolds: float
    expansion_order: int
    norm_n: Callable[[float], float]
    norm_next: Callable[[float], float]
    error: Callable[[float], float]
    error_scaled: Callable[[float], float]


@dataclass
class EstimatorBundle:
    """Growth and error estimators for one expansion family.

    mode 'tautological' evaluates the exact residual norm series; mode
    'rough' evaluates the product-of-norms bound instead.  Both expose
    the same callables, plus the R**-(N+1)-scaled error used by the
    scaled control equation.
    """

    sobolev_order: int
    dim: int
    expansion_order: int
    growth_sq: NormSeries
    growth_next_sq: NormSeries
    mode: str
    error_sq: Optional[NormSeries] = None
    rough: Optional[RoughErrorEstimator] = None

    def norm_value(self, reynolds: float, t: float) -> float:
        return self.growth_sq.value(reynolds, t)

    def norm_next_value(self, reynolds: float, t: float) -> float:
        return self.growth_next_sq.value(reynolds, t)

    def error_value(self, reynolds: float, t: float) -> float:
        if self.mode == "tautological":
            return self.error_sq.value(reynolds, t)
        return self.rough.value(reynolds, t)

    def frozen(self, reynolds: float) -> FrozenBundle:
        growth = self.growth_sq.at_reynolds(reynolds)
        growth_next = self.growth_next_sq.at_reynolds(reynolds)
        shift = 2 * (self.expansion_order + 1)
        if self.mode == "tautological":
            err = self.error_sq.at_reynolds(reynolds)
            err_scaled = self.error_sq.shifted(shift).at_reynolds(reynolds)
            error = err.value
            error_scaled = err_scaled.value
        else:
            error = lambda t: self.rough.value(reynolds, t)
            error_scaled = lambda t: self.rough.value_scaled(reynolds, t)
        return FrozenBundle(
            reynolds,
            self.expansion_order,
            growth.value,
            growth_next.value,
            error,
            error_scaled,
        )


def build_estimator_bundle(
    family: ExpansionFamily,
    sobolev_order: int = 3,
    mode: str = "tautological",
    bilinear_constant: float = 0.323,
    graded: Optional[GradedError] = None,
) -> EstimatorBundle:
    """Assemble the estimator bundle for a family.

    The tautological mode needs the residual grades; they are computed
    here unless passed in (they are the expensive part at high order).
    """
    if mode not in ("tautological", "rough"):
        raise ValueError(f"unknown estimator mode {mode!r}")
    dim = family.datum.dim
    growth = growth_series(family, sobolev_order)
    growth_next = growth_series(family, sobolev_order + 1)
    error_sq = None
    rough = None
    if mode == "tautological":
        if graded is None:
            graded = differential_error_closed(family)
        error_sq = error_series(graded, sobolev_order)
    else:
        rough = rough_error_estimator(family, sobolev_order, bilinear_constant)
    return EstimatorBundle(
        sobolev_order,
        dim,
        family.order,
        growth,
        growth_next,
        mode,
        error_sq=error_sq,
        rough=rough,
    )


# ---------------------------------------------------------------------------
# pointwise consequences of a certified radius
# ---------------------------------------------------------------------------


def mode_bound(radius: float, k: Tuple[int, ...], order: int) -> float:
    """Bound on (2*pi)**(d/2)|mode k| of the discrepancy, given the
    H^order radius: radius / |k|**order."""
    n2 = wave_norm_sq(tuple(k))
    if n2 == 0:
        raise ValueError("mode bound undefined at k = 0")
    return radius / (n2 ** (order / 2.0))


def norm_bracket(center: float, radius: float) -> Tuple[float, float]:
    """Two-sided bracket on the true solution norm: center +- radius,
    floored at zero."""
    return (max(center - radius, 0.0), center + radius)
