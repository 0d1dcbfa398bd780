"""Built-in initial data and the JSON datum format."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Dict

from .fields import VectorExpField, validate
from .rational import Rational, RationalComplex


def _static_datum(dim, mode_table) -> VectorExpField:
    terms = {
        (tuple(k), 0, 0): tuple(RationalComplex(c) for c in vec)
        for k, vec in mode_table
    }
    return VectorExpField(dim, terms, real=True, solenoidal=True)


def bnw_datum() -> VectorExpField:
    """The six-mode divergence-free datum used throughout the examples.

    Three wave vectors (1,1,0), (1,0,1), (0,1,1) and their negatives,
    each carrying a real coefficient orthogonal to it; |k|^2 = 2 for
    every mode.
    """
    table = [
        ((1, 1, 0), (1, -1, 0)),
        ((-1, -1, 0), (1, -1, 0)),
        ((1, 0, 1), (1, 0, -1)),
        ((-1, 0, -1), (1, 0, -1)),
        ((0, 1, 1), (0, 1, -1)),
        ((0, -1, -1), (0, 1, -1)),
    ]
    return _static_datum(3, table)


BUILTIN_DATA = {"bnw": bnw_datum}


def parse_datum_spec(spec: Dict) -> VectorExpField:
    """Build a static datum from its JSON description.

    Schema: {"dim": d, "hermitian_closure": bool, "modes": [
    {"k": [ints], "re": ["p/q", ...], "im": ["p/q", ...]}]} with "im"
    optional.  With hermitian_closure set, each listed mode also
    inserts the conjugate coefficient at -k, and listing both k and -k
    explicitly is rejected as ambiguous.  The result must be zero-mean,
    real, and divergence free.
    """
    dim = int(spec["dim"])
    closure = bool(spec.get("hermitian_closure", False))
    terms = {}
    for mode in spec["modes"]:
        k = tuple(int(c) for c in mode["k"])
        if len(k) != dim:
            raise ValueError(f"wave vector {k} has wrong dimension")
        re = [Rational(s) for s in mode["re"]]
        im = [Rational(s) for s in mode.get("im", ["0"] * dim)]
        if len(re) != dim or len(im) != dim:
            raise ValueError(f"coefficient vectors at {k} have wrong length")
        vec = tuple(RationalComplex(r, i) for r, i in zip(re, im))
        key = (k, 0, 0)
        if key in terms:
            raise ValueError(f"mode {k} listed twice")
        terms[key] = vec
        if closure:
            neg = (tuple(-c for c in k), 0, 0)
            if neg in terms:
                raise ValueError(
                    f"mode {neg[0]} listed explicitly while hermitian_closure is set"
                )
            terms[neg] = tuple(c.conjugate() for c in vec)
    datum = VectorExpField(dim, terms, real=True, solenoidal=True)
    report = validate(datum)
    if not report.ok():
        problems = []
        if not report.zero_mean:
            problems.append("k = 0 term present")
        if not report.real:
            problems.append("not hermitian (field is not real)")
        if not report.solenoidal:
            problems.append("not divergence free")
        raise ValueError("invalid datum: " + "; ".join(problems))
    return datum


def load_datum(name_or_path: str) -> VectorExpField:
    """Resolve a datum: a built-in name or a path to a datum JSON file."""
    builder = BUILTIN_DATA.get(name_or_path)
    if builder is not None:
        return builder()
    path = Path(name_or_path)
    if not path.exists():
        known = ", ".join(sorted(BUILTIN_DATA))
        raise ValueError(
            f"unknown datum {name_or_path!r}: not a built-in ({known}) and not a file"
        )
    with open(path) as fh:
        return parse_datum_spec(json.load(fh))
