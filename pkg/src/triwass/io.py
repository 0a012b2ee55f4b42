"""JSON encoding of quivers, representations, complexes, barcodes and results.

Rationals are written as ``"p/q"`` strings; matrices as flat row-major integer
lists whose shape follows from the dimension vector and the orientation.
Every document is validated against the schemas below before decoding.
"""
from __future__ import annotations

import json
import os
import tempfile
from collections import Counter
from fractions import Fraction
from pathlib import Path
from typing import Any

import jsonschema

from . import linalg as la
from .complex import ChainMorphism, DerivedBarcode, RepComplex
from .matching import INF, MatchingResult
from .quiver import AnQuiver, Interval, Rep, RepMorphism

RATIONAL = {"type": "string", "pattern": r"^\s*-?\d+(/\d+|\.\d+)?\s*$"}
EXTENDED = {"anyOf": [RATIONAL, {"type": "string", "enum": ["inf"]}, {"type": "integer", "minimum": 0}]}
MATRIX = {"type": "array", "items": {"type": "integer"}}

QUIVER_SCHEMA = {
    "type": "object",
    "required": ["n", "orientation"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "orientation": {"type": "array", "items": {"enum": ["F", "B"]}},
        "positions": {"type": "array", "items": RATIONAL},
        "measure": {"type": "array", "items": RATIONAL},
    },
    "additionalProperties": False,
}

REP_SCHEMA = {
    "type": "object",
    "required": ["dims", "maps"],
    "properties": {
        "quiver": QUIVER_SCHEMA,
        "dims": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "maps": {"type": "array", "items": MATRIX},
    },
    "additionalProperties": False,
}

COMPLEX_SCHEMA = {
    "type": "object",
    "required": ["lo", "terms", "diffs"],
    "properties": {
        "quiver": QUIVER_SCHEMA,
        "lo": {"type": "integer"},
        "hi": {"type": "integer"},
        "terms": {"type": "array", "items": REP_SCHEMA},
        "diffs": {"type": "array", "items": {"type": "array", "items": MATRIX}},
    },
    "additionalProperties": False,
}

MORPHISM_SCHEMA = {
    "type": "object",
    "required": ["source", "target", "components"],
    "properties": {
        "source": COMPLEX_SCHEMA,
        "target": COMPLEX_SCHEMA,
        "components": {
            "type": "object",
            "patternProperties": {r"^-?\d+$": {"type": "array", "items": MATRIX}},
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

BARCODE_SCHEMA = {
    "type": "object",
    "required": ["bars"],
    "properties": {
        "quiver": QUIVER_SCHEMA,
        "bars": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["interval"],
                "properties": {
                    "interval": {"type": "array", "items": {"type": "integer", "minimum": 1},
                                 "minItems": 2, "maxItems": 2},
                    "degree": {"type": "integer"},
                    "mult": {"type": "integer", "minimum": 1},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

POOL_SCHEMA = {
    "type": "object",
    "required": ["complexes"],
    "properties": {"quiver": QUIVER_SCHEMA, "complexes": {"type": "array", "items": COMPLEX_SCHEMA}},
    "additionalProperties": False,
}

COST_TABLE_SCHEMA = {
    "type": "object",
    "required": ["a_to_b", "a_to_zero", "zero_to_b"],
    "properties": {
        "a_to_b": {"type": "array", "items": {"type": "array", "items": EXTENDED}},
        "a_to_zero": {"type": "array", "items": EXTENDED},
        "zero_to_b": {"type": "array", "items": EXTENDED},
    },
    "additionalProperties": False,
}


class InputError(ValueError):
    """A document that does not parse or does not match its schema."""


def load_json(path: str | Path, schema: dict | None = None) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if schema is not None:
        validate(doc, schema, str(path))
    return doc


def validate(doc: Any, schema: dict, where: str = "document") -> None:
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        loc = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise InputError(f"{where}: schema violation at {loc}: {exc.message}") from exc


def dumps(doc: Any) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str | Path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def rational(x) -> str:
    return la.fraction_str(Fraction(x))


def extended(x) -> str:
    return "inf" if x == INF else rational(x)


def parse_extended(x):
    if x == "inf":
        return INF
    return la.to_fraction(x)


def quiver_to_json(q: AnQuiver) -> dict:
    return {
        "n": q.n,
        "orientation": list(q.orientation),
        "positions": [rational(x) for x in q.positions],
        "measure": [rational(x) for x in q.measure],
    }


def quiver_from_json(doc: dict) -> AnQuiver:
    validate(doc, QUIVER_SCHEMA, "quiver")
    return AnQuiver(doc["n"], tuple(doc["orientation"]), tuple(doc.get("positions", ())),
                    tuple(doc.get("measure", ())))


def _flat(m) -> list[int]:
    return [int(x) for x in m.ravel()]


def rep_to_json(m: Rep, with_quiver: bool = True) -> dict:
    doc = {"dims": list(m.dims), "maps": [_flat(x) for x in m.maps]}
    if with_quiver:
        doc["quiver"] = quiver_to_json(m.quiver)
    return doc


def rep_from_json(doc: dict, quiver: AnQuiver | None = None) -> Rep:
    validate(doc, REP_SCHEMA, "rep")
    if "quiver" in doc:
        quiver = quiver_from_json(doc["quiver"])
    if quiver is None:
        raise InputError("rep document needs a quiver")
    dims = doc["dims"]
    if len(dims) != quiver.n or len(doc["maps"]) != quiver.n - 1:
        raise InputError(f"rep: expected {quiver.n} dims and {quiver.n - 1} maps")
    maps = []
    for e, flat in enumerate(doc["maps"]):
        s, t = quiver.edge_ends(e)
        if len(flat) != dims[t] * dims[s]:
            raise InputError(f"rep: map {e} needs {dims[t]}x{dims[s]} entries, got {len(flat)}")
        maps.append(la.as_matrix(flat, dims[t], dims[s]))
    return Rep(quiver, dims, maps)


def complex_to_json(c: RepComplex) -> dict:
    return {
        "quiver": quiver_to_json(c.quiver),
        "lo": c.lo,
        "hi": c.hi,
        "terms": [rep_to_json(t, with_quiver=False) for t in c.terms],
        "diffs": [[_flat(x) for x in d.components] for d in c.diffs],
    }


def complex_from_json(doc: dict, quiver: AnQuiver | None = None) -> RepComplex:
    validate(doc, COMPLEX_SCHEMA, "complex")
    if "quiver" in doc:
        quiver = quiver_from_json(doc["quiver"])
    if quiver is None:
        raise InputError("complex document needs a quiver")
    terms = [rep_from_json(t, quiver) for t in doc["terms"]]
    if "hi" in doc and doc["hi"] != doc["lo"] + len(terms) - 1:
        raise InputError("complex: hi does not match lo and the number of terms")
    if len(doc["diffs"]) != max(len(terms) - 1, 0):
        raise InputError(f"complex: {len(terms)} terms need {max(len(terms) - 1, 0)} differentials")
    diffs = []
    for k, comps in enumerate(doc["diffs"]):
        src, tgt = terms[k], terms[k + 1]
        mats = _components(comps, src, tgt, f"differential {doc['lo'] + k}")
        try:
            diffs.append(RepMorphism(src, tgt, mats))
        except ValueError as exc:
            raise InputError(f"complex: differential in degree {doc['lo'] + k}: {exc}") from exc
    try:
        return RepComplex(quiver, doc["lo"], terms, diffs)
    except ValueError as exc:
        raise InputError(f"complex: {exc}") from exc


def _components(comps, src: Rep, tgt: Rep, what: str):
    if len(comps) != src.quiver.n:
        raise InputError(f"{what}: need one component per vertex")
    mats = []
    for p, flat in enumerate(comps):
        if len(flat) != tgt.dims[p] * src.dims[p]:
            raise InputError(f"{what}: component {p} needs {tgt.dims[p]}x{src.dims[p]} entries")
        mats.append(la.as_matrix(flat, tgt.dims[p], src.dims[p]))
    return mats


def morphism_to_json(f: ChainMorphism) -> dict:
    return {
        "source": complex_to_json(f.source),
        "target": complex_to_json(f.target),
        "components": {str(i): [_flat(x) for x in g.components] for i, g in sorted(f.components.items())},
    }


def morphism_from_json(doc: dict) -> ChainMorphism:
    validate(doc, MORPHISM_SCHEMA, "chain morphism")
    x, y = complex_from_json(doc["source"]), complex_from_json(doc["target"])
    comps = {}
    for key, mats in doc["components"].items():
        i = int(key)
        comps[i] = _components(mats, x.term(i), y.term(i), f"component {i}")
    try:
        return ChainMorphism(x, y, comps)
    except ValueError as exc:
        raise InputError(f"chain morphism: {exc}") from exc


def barcode_to_json(bars: Counter, quiver: AnQuiver | None = None) -> dict:
    """Plain barcodes are keyed by Interval, derived ones by (Interval, degree)."""
    items = []
    for key in sorted(bars):
        if isinstance(key, Interval):
            items.append({"interval": [key.a, key.b], "mult": bars[key]})
        else:
            iv, d = key
            items.append({"interval": [iv.a, iv.b], "degree": d, "mult": bars[key]})
    doc: dict = {"bars": items}
    if quiver is not None:
        doc["quiver"] = quiver_to_json(quiver)
    return doc


def derived_barcode_from_json(doc: dict) -> tuple[DerivedBarcode, AnQuiver | None]:
    """Bars without a degree are placed in degree 0."""
    validate(doc, BARCODE_SCHEMA, "barcode")
    quiver = quiver_from_json(doc["quiver"]) if "quiver" in doc else None
    bars: DerivedBarcode = Counter()
    for item in doc["bars"]:
        a, b = item["interval"]
        if b < a or (quiver is not None and b > quiver.n):
            raise InputError(f"barcode: invalid interval [{a}, {b}]")
        bars[(Interval(a, b), item.get("degree", 0))] += item.get("mult", 1)
    return bars, quiver


def matching_to_json(res: MatchingResult, bars_a=None, bars_b=None) -> dict:
    def label(bars, k):
        if bars is None:
            return k
        iv, d = bars[k]
        return {"index": k, "interval": [iv.a, iv.b], "degree": d}

    return {
        "p": "inf" if res.p == INF else str(res.p),
        "value_pth_power": extended(res.total),
        "value_decimal": res.value_decimal(),
        "matching": [{"a": label(bars_a, i), "b": label(bars_b, j), "cost": extended(c)} for i, j, c in res.pairs],
        "unmatched_a": [{"a": label(bars_a, i), "cost": extended(c)} for i, c in res.unmatched_a],
        "unmatched_b": [{"b": label(bars_b, j), "cost": extended(c)} for j, c in res.unmatched_b],
    }


def cost_table_from_json(doc: dict):
    validate(doc, COST_TABLE_SCHEMA, "cost table")
    ab = [[parse_extended(str(c)) for c in row] for row in doc["a_to_b"]]
    a0 = [parse_extended(str(c)) for c in doc["a_to_zero"]]
    zb = [parse_extended(str(c)) for c in doc["zero_to_b"]]
    return ab, a0, zb
