"""JSON encodings of rationals, polynomials, surfaces and CM records.

Rationals are strings "num/den" (integers without a slash), polynomials are
coefficient arrays lowest degree first, rational functions are
{"num": [...], "den": [...]}.  Documents are validated against the schemas
shipped in ``k3shim/schemas``.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from .cases.common import CMRecord, Witness
from .ellsurf import INF, SurfaceModel
from .exactalg import Mod, Poly, RatFunc

COEFF_NAMES = {"short": ("A", "B"), "extended": ("a2", "a4", "a6"), "long": ("a1", "a2", "a3", "a4", "a6")}


class FormatError(ValueError):
    """A document that does not parse or does not match its schema."""


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files("k3shim").joinpath("schemas", f"{name}.schema.json").read_text()
    return json.loads(text)


def validate(doc: Any, name: str) -> None:
    try:
        jsonschema.validate(doc, load_schema(name))
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "(root)"
        raise FormatError(f"{name} schema violation at {where}: {e.message}") from e


def parse_json(text: str, name: str) -> Any:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    validate(doc, name)
    return doc


# ---------------------------------------------------------------------------
# scalars and polynomials


def rat(x) -> str:
    if isinstance(x, Mod):
        return str(x.v)
    return str(Fraction(x))


def parse_rat(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as e:
        raise FormatError(f"not a rational number: {s!r}") from e


def poly_json(f) -> Any:
    if isinstance(f, RatFunc):
        return {"num": [rat(c) for c in f.num.c], "den": [rat(c) for c in f.den.c]}
    return [rat(c) for c in Poly(f).c] if not isinstance(f, (int, Fraction)) else [rat(f)]


def parse_poly(doc, p: int | None = None):
    conv = (lambda s: Mod(int(parse_rat(s)), p)) if p else parse_rat
    if isinstance(doc, dict):
        return RatFunc(Poly(tuple(conv(c) for c in doc["num"])), Poly(tuple(conv(c) for c in doc["den"])))
    return Poly(tuple(conv(c) for c in doc))


def param_json(x) -> Any:
    if isinstance(x, Poly):
        return {"poly": poly_json(x)}
    return "inf" if x == INF else rat(x)


def parse_param(doc):
    if isinstance(doc, dict):
        return parse_poly(doc["poly"])
    return INF if doc == "inf" else parse_rat(doc)


# ---------------------------------------------------------------------------
# surfaces


def surface_json(S: SurfaceModel, p: int | None = None) -> dict:
    doc = {"form": S.form, "coeffs": {n: poly_json(c) for n, c in zip(COEFF_NAMES[S.form], S.coeffs)},
           "field": "Fp" if p else "Q"}
    if p:
        doc["p"] = p
    return doc


def surface_from_json(doc: dict) -> SurfaceModel:
    validate(doc, "surface")
    form = doc["form"]
    p = doc.get("p") if doc.get("field") == "Fp" else None
    if doc.get("field") == "Fp" and not p:
        raise FormatError("field Fp needs a prime p")
    names = COEFF_NAMES[form]
    missing = [n for n in names if n not in doc["coeffs"]]
    if missing:
        raise FormatError(f"{form} model needs coefficients {', '.join(missing)}")
    coeffs = [parse_poly(doc["coeffs"][n], p) for n in names]
    return SurfaceModel(form, tuple(coeffs))


# ---------------------------------------------------------------------------
# CM records


def _surface_ref_json(ref: tuple) -> dict:
    kind = ref[0]
    if kind == "family":
        return {"type": "family", "N": ref[1], "value": param_json(ref[2])}
    if kind in ("chart", "orbit"):
        return {"type": kind, "name": ref[1]}
    if kind == "branch":
        return {"type": "branch", "value": param_json(ref[1])}
    return {"type": kind}


def _surface_ref(doc: dict) -> tuple:
    kind = doc["type"]
    if kind == "family":
        return ("family", doc["N"], parse_param(doc["value"]))
    if kind in ("chart", "orbit"):
        return (kind, doc["name"])
    if kind == "branch":
        return ("branch", parse_param(doc["value"]))
    return (kind,)


def record_json(rec: CMRecord) -> dict:
    w = rec.witness
    return {
        "N": rec.N,
        "parameter": param_json(rec.parameter),
        "D": rec.D,
        "witness": {
            "kind": w.kind,
            "surface": _surface_ref_json(w.surface),
            "root_lattice": w.root_lattice,
            "sections": [poly_json(x) for x in w.sections],
            "torsion": [poly_json(x) for x in w.torsion],
            "field_poly": None if w.field_poly is None else poly_json(w.field_poly),
            "note": w.note,
        },
        "cross_reference": rec.cross_reference,
    }


def record_from_json(doc: dict) -> CMRecord:
    validate(doc, "cm_record")
    w = doc["witness"]
    witness = Witness(w["kind"], _surface_ref(w["surface"]), w.get("root_lattice"),
                      tuple(parse_poly(x) for x in w.get("sections", [])),
                      tuple(parse_poly(x) for x in w.get("torsion", [])),
                      None if w.get("field_poly") is None else parse_poly(w["field_poly"]),
                      w.get("note", ""))
    return CMRecord(doc["N"], parse_param(doc["parameter"]), doc["D"], witness, doc.get("cross_reference", ""))


def catalog_json(N: int, records: list[CMRecord]) -> dict:
    return {"N": N, "records": [record_json(r) for r in records]}


def catalog_from_json(doc: dict) -> list[CMRecord]:
    validate(doc, "catalog")
    return [record_from_json(r) for r in doc["records"]]


def data_text(name: str) -> str:
    """Contents of a JSON file shipped in ``k3shim/data``."""
    return resources.files("k3shim").joinpath("data", name).read_text()


def load_surface(name: str) -> SurfaceModel:
    return surface_from_json(json.loads(data_text(f"{name}.json")))


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False)


__all__ = [
    "FormatError", "catalog_from_json", "catalog_json", "data_text", "dumps", "load_surface", "load_schema", "param_json",
    "parse_json", "parse_param", "parse_poly", "parse_rat", "poly_json", "rat", "record_from_json",
    "record_json", "surface_from_json", "surface_json", "validate",
]
