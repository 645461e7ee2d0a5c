"""Canonical JSON encoding/decoding for every wire type, plus schema checks.

Output is byte-deterministic: sorted keys, tight separators, rationals as
"p/q" strings. Request documents are validated against the shipped JSON
Schemas before any computation touches them.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib import resources

import jsonschema

from .errors import InvalidArgumentError
from .polar import PolarDatum, classify
from .rootdata import RootDatum, WeylElement, build
from .tails import tail_from_json, tail_to_json
from .tori import TorusClass


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def parse_fraction(s) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidArgumentError(f"malformed rational {s!r}") from exc


_SCHEMAS = None


def schemas() -> dict:
    global _SCHEMAS
    if _SCHEMAS is None:
        text = resources.files("polarium.schemas").joinpath("schemas.json").read_text()
        _SCHEMAS = json.loads(text)
    return _SCHEMAS


def _validate_against(section: str, command: str, doc) -> None:
    store = schemas()
    key = command.replace("-", "_")
    if key not in store[section]:
        raise InvalidArgumentError(f"no {section} schema for command {command}")
    schema = dict(store[section][key])
    schema["$defs"] = store["$defs"]
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise InvalidArgumentError(f"{section} rejected by schema: {exc.message}") from exc


def validate_request(command: str, doc) -> None:
    _validate_against("requests", command, doc)


def validate_response(command: str, doc) -> None:
    _validate_against("responses", command, doc)


# -- torus / datum codecs -------------------------------------------------


def torus_to_json(tc: TorusClass) -> dict:
    return {"m": tc.m, "w": [list(row) for row in tc.w.matrix],
            "eigendims": [len(tc.eigenspaces[i]) for i in range(tc.m)]}


def torus_from_json(rd: RootDatum, doc: dict) -> TorusClass:
    w = WeylElement(rd, tuple(tuple(int(v) for v in row) for row in doc["w"]))
    w.root_permutation()  # validates that the matrix permutes the roots
    return TorusClass(rd, w, int(doc["m"]))


def datum_to_json(d: PolarDatum) -> dict:
    from .rootdata import rootdatum_to_json

    return {
        "type": rootdatum_to_json(d.rd)["type"],
        "torus": {"m": d.torus.m, "w": [list(row) for row in d.torus.w.matrix]},
        "levi": sorted(d.levi),
        "lambda": tail_to_json(d.lam),
    }


def datum_from_json(doc: dict, validate: bool = True) -> PolarDatum:
    rd = build(doc["type"])
    torus_doc = doc.get("torus")
    if torus_doc is None:
        tc = TorusClass(rd, rd.identity_element(), 1)
    else:
        tc = torus_from_json(rd, torus_doc)
    lam = tail_from_json(rd, doc["lambda"])
    if "levi" in doc:
        return PolarDatum(tc, frozenset(int(i) for i in doc["levi"]), lam,
                          validate=validate and doc.get("validate", True))
    return classify(tc, lam)


def parse_coweight(rd: RootDatum, value) -> tuple[Fraction, ...] | None:
    """Apartment point: explicit coordinates, a named preset, or None."""
    if value is None:
        return None
    if isinstance(value, str):
        if value == "zero":
            return tuple(Fraction(0) for _ in range(rd.dim))
        if value.startswith("rho/"):
            m = int(value.split("/", 1)[1])
            return tuple(v / m for v in rd.rho_coweight())
        raise InvalidArgumentError(f"unknown apartment preset {value!r}")
    coords = tuple(parse_fraction(v) for v in value)
    if len(coords) != rd.dim:
        raise InvalidArgumentError(
            f"apartment point has {len(coords)} coordinates, expected {rd.dim}"
        )
    return coords
