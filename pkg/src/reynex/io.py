"""Serialization of fields, series, families, and trajectories.

Exact objects (fields, norm series) are written with reduced fraction
strings so that a serialize/parse round trip reproduces every rational
coefficient bit for bit.  Floating-point artifacts (trajectory tables)
use a fixed 6-significant-digit format so identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import json
from typing import Any

from .fields import VectorExpField, validate
from .norms import NormSeries
from .rational import Rational, RationalComplex, rational, rational_to_str

__all__ = [
    "classification_record",
    "family_from_json",
    "family_manifest",
    "family_to_json",
    "field_from_records",
    "field_records",
    "format_float",
    "load_json",
    "norm_series_from_dict",
    "norm_series_to_dict",
    "write_json",
    "write_trajectory_csv",
]


def format_float(x: float) -> str:
    """Render ``x`` with 6 significant digits, scientific below 1e-3."""
    if x == 0:
        return "0"
    if abs(x) < 1e-3:
        return f"{x:.5e}"
    return f"{x:.6g}"


# ---------------------------------------------------------------------------
# vector fields


def field_records(field: VectorExpField) -> list[dict[str, Any]]:
    """Dump a field as one record per nonzero component of each term.

    Records are ordered by wave vector (lexicographic), then profile
    exponents ``(a, b)``, then component index (1-based), matching the
    canonical term ordering.
    """
    records = []
    for k, a, b in sorted(field.terms):
        vec = field.terms[(k, a, b)]
        for axis, c in enumerate(vec, start=1):
            if c.is_zero():
                continue
            records.append(
                {
                    "component": axis,
                    "k": list(k),
                    "a": a,
                    "b": b,
                    "re": rational_to_str(c.re),
                    "im": rational_to_str(c.im),
                }
            )
    return records


def field_from_records(dim: int, records: list[dict[str, Any]]) -> VectorExpField:
    """Rebuild a field from :func:`field_records` output.

    Reality and solenoidality are re-derived from the parsed
    coefficients rather than trusted from the file.
    """
    terms: dict[tuple, list[RationalComplex]] = {}
    for rec in records:
        k = tuple(int(x) for x in rec["k"])
        key = (k, int(rec["a"]), int(rec["b"]))
        vec = terms.setdefault(key, [RationalComplex(Rational(0), Rational(0))] * dim)
        axis = int(rec["component"]) - 1
        if not 0 <= axis < dim:
            raise ValueError(f"component index {axis + 1} outside 1..{dim}")
        coeff = RationalComplex(rational(rec["re"]), rational(rec.get("im", "0")))
        vec = list(vec)
        vec[axis] = vec[axis] + coeff
        terms[key] = vec
    field = VectorExpField(dim, {key: tuple(vec) for key, vec in terms.items()})
    report = validate(field)
    field.real = report.real
    field.solenoidal = report.solenoidal
    return field


# ---------------------------------------------------------------------------
# norm series


def norm_series_to_dict(series: NormSeries) -> dict[str, Any]:
    """Serialize a squared-norm series; the (2pi)^d prefactor is implied."""
    return {
        "n": series.sobolev_order,
        "d": series.dim,
        "terms": [
            {"j": j, "a": a, "b": b, "coeff": rational_to_str(series.terms[(j, a, b)])}
            for j, a, b in sorted(series.terms)
        ],
    }


def norm_series_from_dict(data: dict[str, Any]) -> NormSeries:
    terms = {}
    for rec in data["terms"]:
        key = (int(rec["j"]), int(rec["a"]), int(rec["b"]))
        if key in terms:
            raise ValueError(f"duplicate series term {key}")
        terms[key] = rational(rec["coeff"])
    return NormSeries(int(data["n"]), int(data["d"]), terms)


# ---------------------------------------------------------------------------
# expansion families


def family_manifest(family, datum_id: str) -> dict[str, Any]:
    """Summary of a family: per-grade term and wave-vector counts."""
    grades = []
    for j, field in enumerate(family.coefficients):
        grades.append(
            {
                "order": j,
                "component_terms": [
                    field.term_count(axis) for axis in range(1, field.dim + 1)
                ],
                "wave_vectors": len(field.wave_vectors()),
            }
        )
    return {
        "datum_id": datum_id,
        "N": family.order,
        "dim": family.datum.dim,
        "grades": grades,
    }


def family_to_json(family, datum_id: str) -> dict[str, Any]:
    return {
        "datum_id": datum_id,
        "N": family.order,
        "dim": family.datum.dim,
        "datum": field_records(family.datum),
        "coefficients": [field_records(u) for u in family.coefficients],
    }


def family_from_json(data: dict[str, Any]):
    from .expansion import ExpansionFamily

    dim = int(data["dim"])
    datum = field_from_records(dim, data["datum"])
    coefficients = [field_from_records(dim, recs) for recs in data["coefficients"]]
    return ExpansionFamily(datum=datum, coefficients=coefficients)


# ---------------------------------------------------------------------------
# run artifacts


def write_json(obj: Any, path: str) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(obj, handle, indent=2, sort_keys=True)
        handle.write("\n")


def load_json(path: str) -> Any:
    with open(path, encoding="utf-8") as handle:
        return json.load(handle)


def write_trajectory_csv(path: str, solution, frozen) -> None:
    """Write trajectory samples with the estimator values alongside.

    Columns: t, Rr_n, D_n, D_np1, eps_n.
    """
    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(["t", "Rr_n", "D_n", "D_np1", "eps_n"])
        for t, y in zip(solution.times, solution.values):
            writer.writerow(
                [
                    format_float(float(t)),
                    format_float(float(y)),
                    format_float(frozen.norm_n(t)),
                    format_float(frozen.norm_next(t)),
                    format_float(frozen.error(t)),
                ]
            )


def classification_record(solution) -> dict[str, Any]:
    """JSON-ready record of a control run's outcome."""
    from .control import classify

    outcome = classify(solution)
    params = solution.params
    record: dict[str, Any] = {
        "classification": outcome.value,
        "Tc": None if solution.blowup_time is None else float(solution.blowup_time),
        "Tc_uncertainty": (
            None
            if solution.blowup_uncertainty is None
            else float(solution.blowup_uncertainty)
        ),
        "params": {
            "reynolds": params.reynolds,
            "expansion_order": params.bundle.expansion_order,
            "sobolev_order": params.bundle.sobolev_order,
            "estimator_mode": params.bundle.mode,
            "pairing_constant": params.pairing_constant,
            "bilinear_constant": params.bilinear_constant,
            "t_max": params.t_max,
            "blowup_cap": params.blowup_cap,
            "rel_tol": params.rel_tol,
            "abs_tol": params.abs_tol,
        },
    }
    return record
