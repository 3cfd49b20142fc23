"""Canonical JSON serialization of polynomials, systems and reports.

System files: {"version": 1, "nvars": n, "degree_bound": d, "components":
[polynomial...], "provenance": {...}?}.  A polynomial is {"nvars": n,
"terms": [{"exp": [e1..en], "re": "p/q", "im": "p/q"}]} with terms in
descending graded-lex order and rationals rendered by Fraction's string form
("3", "-1/2").  Emission is canonical, so parse followed by emit reproduces a
canonical file byte for byte.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .gaussian import Gaussian
from .poly import Polynomial, PolySystem

SCHEMA_VERSION = 1


class SchemaError(ValueError):
    """Input file violates the schema; the message names the offending field."""


def _fraction_from_string(s, path: str) -> Fraction:
    if not isinstance(s, str):
        raise SchemaError(f"{path}: expected a rational string, got {type(s).__name__}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{path}: cannot parse rational {s!r}: {exc}") from None


def polynomial_to_dict(p: Polynomial) -> dict:
    return {
        "nvars": p.nvars,
        "terms": [
            {"exp": list(exps), "re": str(c.re), "im": str(c.im)}
            for exps, c in p.sorted_terms()
        ],
    }


def polynomial_from_dict(obj, path: str = "polynomial") -> Polynomial:
    if not isinstance(obj, dict):
        raise SchemaError(f"{path}: expected an object")
    if not isinstance(obj.get("nvars"), int) or obj["nvars"] < 0:
        raise SchemaError(f"{path}.nvars: expected a non-negative integer")
    nvars = obj["nvars"]
    terms_obj = obj.get("terms")
    if not isinstance(terms_obj, list):
        raise SchemaError(f"{path}.terms: expected a list")
    terms: dict[tuple, Gaussian] = {}
    for idx, t in enumerate(terms_obj):
        tpath = f"{path}.terms[{idx}]"
        if not isinstance(t, dict):
            raise SchemaError(f"{tpath}: expected an object")
        exp = t.get("exp")
        if (not isinstance(exp, list) or len(exp) != nvars
                or any(not isinstance(e, int) or e < 0 for e in exp)):
            raise SchemaError(
                f"{tpath}.exp: expected {nvars} non-negative integers")
        c = Gaussian(_fraction_from_string(t.get("re", "0"), f"{tpath}.re"),
                     _fraction_from_string(t.get("im", "0"), f"{tpath}.im"))
        key = tuple(exp)
        if key in terms:
            raise SchemaError(f"{tpath}.exp: duplicate exponent vector {exp}")
        terms[key] = c
    return Polynomial(nvars, terms)


def system_to_dict(F: PolySystem, provenance: dict | None = None) -> dict:
    out = {
        "version": SCHEMA_VERSION,
        "nvars": F.nvars,
        "degree_bound": F.degree_bound,
        "components": [polynomial_to_dict(p) for p in F.components],
    }
    if provenance is not None:
        out["provenance"] = provenance
    return out


def system_from_dict(obj) -> tuple[PolySystem, dict | None]:
    if not isinstance(obj, dict):
        raise SchemaError("top level: expected an object")
    if obj.get("version") != SCHEMA_VERSION:
        raise SchemaError(f"version: expected {SCHEMA_VERSION}, got {obj.get('version')!r}")
    nvars = obj.get("nvars")
    if not isinstance(nvars, int) or nvars < 0:
        raise SchemaError("nvars: expected a non-negative integer")
    comps_obj = obj.get("components")
    if not isinstance(comps_obj, list):
        raise SchemaError("components: expected a list")
    comps = []
    for i, c in enumerate(comps_obj):
        p = polynomial_from_dict(c, f"components[{i}]")
        if p.nvars != nvars:
            raise SchemaError(f"components[{i}].nvars: {p.nvars} != system nvars {nvars}")
        comps.append(p)
    bound = obj.get("degree_bound")
    if bound is not None and (not isinstance(bound, int) or bound < 0):
        raise SchemaError("degree_bound: expected a non-negative integer")
    try:
        F = PolySystem(comps, nvars=nvars, degree_bound=bound)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None
    prov = obj.get("provenance")
    if prov is not None and not isinstance(prov, dict):
        raise SchemaError("provenance: expected an object")
    return F, prov


def dumps_canonical(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def read_system(path: str) -> tuple[PolySystem, dict | None]:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON: {exc}") from None
    return system_from_dict(obj)


def write_system(path: str, F: PolySystem, provenance: dict | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_canonical(system_to_dict(F, provenance)))
