"""Navier-Stokes building blocks on exponential-polynomial fields.

Everything here is exact: the Leray projection and advection are
rational-linear in the coefficients, and the heat semigroup and its
Duhamel integral act termwise through closed forms that stay inside the
exponential-polynomial class.
"""

from __future__ import annotations

import math
from typing import Dict, List, Tuple

from .fields import (
    ScalarExpField,
    TermKey,
    VectorExpField,
    WaveVector,
    wave_norm_sq,
)
from .rational import RC_ZERO, Rational, RationalComplex


class LerayCache:
    """Per-wave-vector data for the Leray projection, memoized.

    The projection of a coefficient vector c at wave vector k is
    c - (k.c / |k|^2) k; the only reusable piece is the exact 1/|k|^2.
    """

    __slots__ = ("_inv",)

    def __init__(self):
        self._inv: Dict[WaveVector, Rational] = {}

    def inverse_norm_sq(self, k: WaveVector) -> Rational:
        inv = self._inv.get(k)
        if inv is None:
            n2 = wave_norm_sq(k)
            if n2 == 0:
                raise ValueError("Leray projection undefined at k = 0")
            inv = Rational(1, n2)
            self._inv[k] = inv
        return inv


def leray_project(f: VectorExpField, cache: LerayCache | None = None) -> VectorExpField:
    """Project every coefficient vector onto the plane orthogonal to its k.

    Exact and idempotent.  Terms at k = 0 are rejected (the projection
    is undefined there; mean-free inputs are the operator's domain).
    """
    if cache is None:
        cache = LerayCache()
    out: Dict[TermKey, Tuple[RationalComplex, ...]] = {}
    for key, vec in f.terms.items():
        k = key[0]
        dot = RC_ZERO
        for ks, c in zip(k, vec):
            if ks:
                dot = dot + c * ks
        if dot.is_zero():
            out[key] = vec
            continue
        scale = dot * cache.inverse_norm_sq(k)
        out[key] = tuple(c - scale * ks for ks, c in zip(k, vec))
    return VectorExpField(f.dim, out, real=f.real, solenoidal=True)


def advect(v: VectorExpField, w: VectorExpField) -> VectorExpField:
    """Advection (v . grad) w, exact.

    In Fourier space a term c at (k, a, b) of v paired with a term c'
    at (k', a', b') of w contributes i (c . k') c' at (k + k', a + a',
    b + b').  The output is generally not divergence free.
    """
    if v.dim != w.dim:
        raise ValueError("dimension mismatch")
    dim = v.dim
    # group w's terms by wave vector so the dot product c.k' is computed
    # once per (v-term, k') rather than once per profile pair
    w_by_k: Dict[WaveVector, List[Tuple[int, int, Tuple[RationalComplex, ...]]]] = {}
    for (k2, a2, b2), c2 in w.terms.items():
        w_by_k.setdefault(k2, []).append((a2, b2, c2))

    out: Dict[TermKey, List[RationalComplex]] = {}
    for (k1, a1, b1), c1 in v.terms.items():
        for k2, profiles in w_by_k.items():
            # z = i * (c1 . k2)
            zr = 0
            zi = 0
            for ks, c in zip(k2, c1):
                if ks:
                    zr = zr - c.im * ks
                    zi = zi + c.re * ks
            if not zr and not zi:
                continue
            ksum = tuple(x + y for x, y in zip(k1, k2))
            for a2, b2, c2 in profiles:
                key = (ksum, a1 + a2, b1 + b2)
                acc = out.get(key)
                if acc is None:
                    acc = [RC_ZERO] * dim
                    out[key] = acc
                for i, c in enumerate(c2):
                    acc[i] = acc[i] + RationalComplex(
                        zr * c.re - zi * c.im, zr * c.im + zi * c.re
                    )
    return VectorExpField(dim, out, real=v.real and w.real, solenoidal=False)


def ns_bilinear(
    v: VectorExpField, w: VectorExpField, cache: LerayCache | None = None
) -> VectorExpField:
    """Projected Navier-Stokes nonlinearity: -Leray((v . grad) w)."""
    projected = leray_project(advect(v, w), cache)
    out = {key: tuple(-c for c in vec) for key, vec in projected.terms.items()}
    return VectorExpField(v.dim, out, real=projected.real, solenoidal=True)


def laplacian(f: VectorExpField) -> VectorExpField:
    """Termwise Laplacian: mode k is scaled by -|k|^2."""
    out: Dict[TermKey, Tuple[RationalComplex, ...]] = {}
    for key, vec in f.terms.items():
        n2 = wave_norm_sq(key[0])
        if n2 == 0:
            continue
        out[key] = tuple(c * (-n2) for c in vec)
    return VectorExpField(f.dim, out, real=f.real, solenoidal=f.solenoidal)


def heat_propagate(z: VectorExpField) -> VectorExpField:
    """Heat flow of a static field: mode k gains the profile (0, |k|^2).

    The input must be static (every profile (0, 0)); anything else is
    outside the semigroup's intended domain here and is rejected.
    """
    out: Dict[TermKey, Tuple[RationalComplex, ...]] = {}
    for (k, a, b), vec in z.terms.items():
        if (a, b) != (0, 0):
            raise ValueError(
                f"heat_propagate requires a static input; found profile {(a, b)} at {k}"
            )
        out[(k, 0, wave_norm_sq(k))] = vec
    return VectorExpField(z.dim, out, real=z.real, solenoidal=z.solenoidal)


def duhamel(f: VectorExpField) -> VectorExpField:
    """Time integral against the heat kernel, termwise and in closed form.

    For a term with profile (a, b) at wave vector k (|k|^2 = m), the
    integral int_0^t e^{-m(t-s)} s^a e^{-bs} ds is again exponential
    polynomial:

      b == m (resonant):   t^(a+1) e^{-mt} / (a+1)
      b != m:              a! [ e^{-mt} / (b-m)^(a+1)
                               - sum_{l=0..a} t^l e^{-bt} / ((b-m)^(a+1-l) l!) ]

    Both branches vanish at t = 0.
    """
    out: Dict[TermKey, List[RationalComplex]] = {}

    def _add(key: TermKey, vec) -> None:
        acc = out.get(key)
        if acc is None:
            out[key] = list(vec)
        else:
            for i, c in enumerate(vec):
                acc[i] = acc[i] + c

    for (k, a, b), vec in f.terms.items():
        m = wave_norm_sq(k)
        if m == 0:
            raise ValueError("Duhamel integral undefined at k = 0")
        if b == m:
            scale = Rational(1, a + 1)
            _add((k, a + 1, m), [c * scale for c in vec])
            continue
        delta = b - m
        a_fact = math.factorial(a)
        _add((k, 0, m), [c * Rational(a_fact, delta ** (a + 1)) for c in vec])
        l_fact = 1
        for l in range(a + 1):
            if l:
                l_fact *= l
            scale = -Rational(a_fact, delta ** (a + 1 - l) * l_fact)
            _add((k, l, b), [c * scale for c in vec])
    return VectorExpField(f.dim, out, real=f.real, solenoidal=f.solenoidal)
