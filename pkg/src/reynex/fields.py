"""Exact exponential-polynomial Fourier fields on the d-torus.

A field is a finite sum of separable terms

    c * t**a * exp(-b*t) * exp(i k.x),

with k an integer wave vector, (a, b) a pair of nonnegative integers
called the time profile, and c an exact rational-complex coefficient
(one per component for vector fields).  Term maps are kept in canonical
form: no stored zero coefficients, one entry per (k, a, b) key.
Canonical ordering is lexicographic on k, then on (a, b).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .rational import RC_ZERO, Rational, RationalComplex

WaveVector = Tuple[int, ...]
ProfileKey = Tuple[int, int]
TermKey = Tuple[WaveVector, int, int]  # (k, a, b)


def wave_norm_sq(k: WaveVector) -> int:
    """Squared Euclidean length of an integer wave vector."""
    return sum(c * c for c in k)


def _as_rc(value) -> RationalComplex:
    if isinstance(value, RationalComplex):
        return value
    return RationalComplex(value)


# ---------------------------------------------------------------------------
# scalar fields
# ---------------------------------------------------------------------------


class ScalarExpField:
    """One component of a vector field: term map (k, a, b) -> coefficient."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[TermKey, RationalComplex] | None = None):
        self.dim = dim
        self.terms: Dict[TermKey, RationalComplex] = {}
        if terms:
            for key, val in terms.items():
                val = _as_rc(val)
                if not val.is_zero():
                    self.terms[key] = val

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarExpField):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        raise TypeError("ScalarExpField is not hashable")

    def sorted_keys(self) -> List[TermKey]:
        return sorted(self.terms)

    def __repr__(self) -> str:
        return f"ScalarExpField(dim={self.dim}, nterms={len(self.terms)})"


def pointwise_product(f: ScalarExpField, g: ScalarExpField) -> ScalarExpField:
    """Pointwise product of two scalar fields.

    Wave vectors add, time profiles add componentwise:
    (t**a e^{-bt} e_k) * (t**a' e^{-b't} e_k') = t**(a+a') e^{-(b+b')t} e_{k+k'}.
    """
    if f.dim != g.dim:
        raise ValueError("dimension mismatch")
    out: Dict[TermKey, RationalComplex] = {}
    for (k1, a1, b1), c1 in f.terms.items():
        for (k2, a2, b2), c2 in g.terms.items():
            key = (tuple(x + y for x, y in zip(k1, k2)), a1 + a2, b1 + b2)
            prod = c1 * c2
            acc = out.get(key)
            out[key] = prod if acc is None else acc + prod
    return ScalarExpField(f.dim, out)


# ---------------------------------------------------------------------------
# vector fields
# ---------------------------------------------------------------------------


@dataclass
class FieldReport:
    """Result of validate(): which structural invariants hold exactly."""

    zero_mean: bool
    real: bool
    solenoidal: bool
    offending_keys: List[TermKey] = field(default_factory=list)

    def ok(self) -> bool:
        return self.zero_mean and self.real and self.solenoidal


class VectorExpField:
    """Vector-valued exponential-polynomial field with exact coefficients.

    `terms` maps (k, a, b) to a tuple of `dim` rational-complex
    coefficients.  Keys whose coefficient vector is entirely zero are
    never stored.  The `real` / `solenoidal` attributes are claims
    carried through operations; validate() re-derives them exactly.
    """

    __slots__ = ("dim", "terms", "real", "solenoidal")

    def __init__(
        self,
        dim: int,
        terms: Mapping[TermKey, Sequence[RationalComplex]] | None = None,
        *,
        real: bool = False,
        solenoidal: bool = False,
    ):
        self.dim = dim
        self.real = real
        self.solenoidal = solenoidal
        self.terms: Dict[TermKey, Tuple[RationalComplex, ...]] = {}
        if terms:
            for key, vec in terms.items():
                vec = tuple(_as_rc(c) for c in vec)
                if len(vec) != dim:
                    raise ValueError(f"coefficient vector at {key} has wrong length")
                if any(not c.is_zero() for c in vec):
                    self.terms[key] = vec

    # -- basic queries -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        # flags are claims, not content; equality compares content only
        if not isinstance(other, VectorExpField):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def __hash__(self):
        raise TypeError("VectorExpField is not hashable")

    def __repr__(self) -> str:
        return (
            f"VectorExpField(dim={self.dim}, nterms={len(self.terms)}, "
            f"real={self.real}, solenoidal={self.solenoidal})"
        )

    def sorted_keys(self) -> List[TermKey]:
        return sorted(self.terms)

    def component(self, axis: int) -> ScalarExpField:
        """Component along `axis` (1-based) as a scalar field."""
        if not 1 <= axis <= self.dim:
            raise ValueError(f"axis {axis} out of range 1..{self.dim}")
        i = axis - 1
        return ScalarExpField(
            self.dim, {key: vec[i] for key, vec in self.terms.items() if not vec[i].is_zero()}
        )

    def term_count(self, axis: int | None = None) -> int:
        """Number of stored terms; per component when `axis` is given."""
        if axis is None:
            return len(self.terms)
        i = axis - 1
        return sum(1 for vec in self.terms.values() if not vec[i].is_zero())

    def wave_vectors(self) -> set:
        return {key[0] for key in self.terms}

    def profiles(self) -> set:
        return {(key[1], key[2]) for key in self.terms}

    def max_wave_index(self) -> int:
        """Largest sup-norm |k|_inf over the support; 0 for the zero field."""
        if not self.terms:
            return 0
        return max(max(abs(c) for c in key[0]) for key in self.terms)

    # -- numeric evaluation ---------------------------------------------

    def evaluate_at(self, t: float) -> Dict[WaveVector, Tuple[complex, ...]]:
        """Collapse time profiles at time t; mode -> complex coefficient vector."""
        out: Dict[WaveVector, List[complex]] = {}
        for (k, a, b), vec in sorted(self.terms.items()):
            w = (t ** a) * math.exp(-b * t)
            acc = out.get(k)
            if acc is None:
                acc = [0j] * self.dim
                out[k] = acc
            for i, c in enumerate(vec):
                acc[i] += complex(c) * w
        return {k: tuple(v) for k, v in out.items()}

    def mode_amplitude(self, t: float, k: WaveVector) -> float:
        """(2*pi)**(d/2) times the Euclidean magnitude of mode k at time t."""
        modes = self.evaluate_at(t)
        vec = modes.get(tuple(k))
        if vec is None:
            return 0.0
        mag = math.sqrt(sum(abs(c) ** 2 for c in vec))
        return (2.0 * math.pi) ** (self.dim / 2.0) * mag


def zero_field(dim: int) -> VectorExpField:
    return VectorExpField(dim, {}, real=True, solenoidal=True)


def linear_combination(
    pairs: Iterable[Tuple[object, VectorExpField]],
) -> VectorExpField:
    """Exact sum of scalar multiples of fields.

    Scalars may be ints, Rationals, or RationalComplex.  The reality
    flag survives only when every field is flagged real and every
    scalar is real; the solenoidal flag is the conjunction of the
    inputs' flags (termwise scaling preserves the divergence constraint).
    """
    pairs = [( _as_rc(s), f) for s, f in pairs]
    if not pairs:
        raise ValueError("empty linear combination (dimension unknown)")
    dim = pairs[0][1].dim
    out: Dict[TermKey, List[RationalComplex]] = {}
    real = True
    solenoidal = True
    for scalar, f in pairs:
        if f.dim != dim:
            raise ValueError("dimension mismatch in linear combination")
        real = real and f.real and scalar.is_real()
        solenoidal = solenoidal and f.solenoidal
        if scalar.is_zero():
            continue
        for key, vec in f.terms.items():
            acc = out.get(key)
            if acc is None:
                out[key] = [scalar * c for c in vec]
            else:
                for i, c in enumerate(vec):
                    acc[i] = acc[i] + scalar * c
    return VectorExpField(dim, out, real=real, solenoidal=solenoidal)


def partial_derivative(f: VectorExpField, axis: int) -> VectorExpField:
    """Spatial derivative along `axis` (1-based): coefficient gains i*k[axis]."""
    if not 1 <= axis <= f.dim:
        raise ValueError(f"axis {axis} out of range 1..{f.dim}")
    i = axis - 1
    out: Dict[TermKey, Tuple[RationalComplex, ...]] = {}
    for key, vec in f.terms.items():
        ks = key[0][i]
        if ks == 0:
            continue
        out[key] = tuple((c * ks).times_i() for c in vec)
    # conservative: the derivative of a claimed-solenoidal field stays
    # divergence free, but downstream code treats the flag as untrusted
    return VectorExpField(f.dim, out, real=f.real, solenoidal=False)


def time_derivative(f: VectorExpField) -> VectorExpField:
    """Exact d/dt: t**a e^{-bt} -> a t**(a-1) e^{-bt} - b t**a e^{-bt}."""
    out: Dict[TermKey, List[RationalComplex]] = {}

    def _add(key, vec):
        acc = out.get(key)
        if acc is None:
            out[key] = list(vec)
        else:
            for i, c in enumerate(vec):
                acc[i] = acc[i] + c

    for (k, a, b), vec in f.terms.items():
        if a > 0:
            _add((k, a - 1, b), [c * a for c in vec])
        if b != 0:
            _add((k, a, b), [c * (-b) for c in vec])
    return VectorExpField(f.dim, out, real=f.real, solenoidal=f.solenoidal)


def value_at_zero(f: VectorExpField) -> VectorExpField:
    """The field at t = 0 as a static field (all profiles collapse to (0, 0))."""
    out: Dict[TermKey, List[RationalComplex]] = {}
    for (k, a, b), vec in f.terms.items():
        if a != 0:
            continue  # t**a vanishes at t = 0
        key = (k, 0, 0)
        acc = out.get(key)
        if acc is None:
            out[key] = list(vec)
        else:
            for i, c in enumerate(vec):
                acc[i] = acc[i] + c
    return VectorExpField(f.dim, out, real=f.real, solenoidal=f.solenoidal)


def validate(f: VectorExpField) -> FieldReport:
    """Exact structural check: zero mean, reality, divergence-free.

    Reality means the coefficient at -k (same profile) is the complex
    conjugate of the coefficient at k.  Divergence-free means k.c = 0
    for every stored term.  Offending keys are collected for reporting.
    """
    zero_k = (0,) * f.dim
    offenders: List[TermKey] = []
    zero_mean = True
    real = True
    solenoidal = True
    for (k, a, b), vec in f.terms.items():
        if k == zero_k:
            zero_mean = False
            offenders.append((k, a, b))
        dot = RC_ZERO
        for ks, c in zip(k, vec):
            if ks:
                dot = dot + c * ks
        if not dot.is_zero():
            solenoidal = False
            offenders.append((k, a, b))
        mirror = f.terms.get((tuple(-c for c in k), a, b))
        if mirror is None or any(
            m != c.conjugate() for m, c in zip(mirror, vec)
        ):
            real = False
            offenders.append((k, a, b))
    return FieldReport(zero_mean, real, solenoidal, offenders)
