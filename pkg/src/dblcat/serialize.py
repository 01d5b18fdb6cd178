"""Reading and writing documents.

A document is a JSON object

    {"format": 1, "kind": <kind>, "payload": {...}}

with kind one of category, two_category, decorated, double_category,
indexing, instance_spec. Payload tables are lists of integer rows, e.g. a
composition entry [second, first, result]. The layout of each kind is in
docs/format.md.

Parsing checks the shape against a JSON schema, then every id reference,
and only then builds the object. Writing is canonical: sorted keys, rows in
sorted order, no optional whitespace.
"""

from __future__ import annotations

import json

import jsonschema
import numpy as np

from .core_cat import FiniteCategory
from .doublecat import FiniteDoubleCategory, materialize
from .errors import DocSyntaxError, RangeError, SchemaError
from .indexing import INDEXING, OPINDEXING, Pi2Indexing, indexing_from_tables
from .instances import BASE_CATEGORIES, INSTANCE_KINDS, RESTRICTIONS, InstanceSpec
from .twocat import DecoratedTwoCategory, FiniteTwoCategory, materialize_two

FORMAT_VERSION = 1
KINDS = ("category", "two_category", "decorated", "double_category", "indexing", "instance_spec")

_ID = {"type": "integer", "minimum": 0}
# "rows": k means a list of length-k lists of non-negative integers. Tables
# run to millions of rows, so this keyword is checked in bulk.
_ROWS2 = {"type": "array", "rows": 2}
_ROWS3 = {"type": "array", "rows": 3}
_LABELS = {"type": "array", "items": {"type": "array", "prefixItems": [_ID, {"type": "string"}],
                                      "items": False, "minItems": 2}}


def _obj(props, required):
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


_CATEGORY = _obj({
    "objects": {"type": "array", "items": {"type": "string"}},
    "morphisms": _ROWS3,  # [id, source, target]
    "identities": {"type": "array", "items": _ID},
    "composition": _ROWS3,  # [second, first, result]
    "labels": _LABELS,
}, ["objects", "morphisms", "identities", "composition"])

_TWO = _obj({
    "objects": _ID,
    "one_cells": _ROWS3,  # [id, source, target]
    "units": {"type": "array", "items": _ID},
    "composition": _ROWS3,  # [left, right, result]
    "cells": _ROWS3,  # [id, source 1-cell, target 1-cell]
    "vcomp": _ROWS3,  # [top, bottom, result]
    "hcomp": _ROWS3,  # [left, right, result]
    "identities": _ROWS2,  # [1-cell, 2-cell]
    "one_cell_labels": _LABELS,
    "cell_labels": _LABELS,
}, ["objects", "one_cells", "units", "composition", "cells", "vcomp", "hcomp", "identities"])

_DECORATED = _obj({"decoration": _CATEGORY, "bicategory": _TWO}, ["decoration", "bicategory"])

_DOUBLE = _obj({
    "name": {"type": "string"},
    "vertical": _CATEGORY,
    "horizontals": _ROWS3,  # [id, source, target]
    "horizontal_units": {"type": "array", "items": _ID},
    "horizontal_composition": _ROWS3,  # [left, right, result]
    "squares": {"type": "array", "rows": 5},
    "vcomp": _ROWS3,  # [top, bottom, result]
    "hcomp": _ROWS3,  # [left, right, result]
    "unit_squares": _ROWS2,  # [vertical morphism, square]
    "vertical_identities": _ROWS2,  # [1-cell, square]
    "horizontal_labels": _LABELS,
    "square_labels": _LABELS,
}, ["vertical", "horizontals", "horizontal_units", "horizontal_composition", "squares", "vcomp", "hcomp",
    "unit_squares", "vertical_identities"])

_INDEXING = _obj({
    "direction": {"enum": [OPINDEXING, INDEXING]},
    "base": _DECORATED,
    "maps": {"type": "array", "items": {"type": "array", "prefixItems": [_ID, {"type": "array", "items": _ID}],
                                        "items": False, "minItems": 2}},
}, ["direction", "base", "maps"])

_INSTANCE = _obj({
    "kind": {"enum": list(INSTANCE_KINDS)},
    "n": {"type": "integer", "minimum": 1},
    "m": {"type": "integer", "minimum": 1},
    "apex": {"type": "integer", "minimum": 0},
    "category": {"enum": list(BASE_CATEGORIES)},
    "restriction": {"enum": [r for r in RESTRICTIONS if r is not None]},
}, ["kind"])

PAYLOAD_SCHEMAS = {"category": _CATEGORY, "two_category": _TWO, "decorated": _DECORATED,
                   "double_category": _DOUBLE, "indexing": _INDEXING, "instance_spec": _INSTANCE}

ENVELOPE_SCHEMA = _obj({
    "format": {"const": FORMAT_VERSION},
    "kind": {"enum": list(KINDS)},
    "payload": {"type": "object"},
}, ["format", "kind", "payload"])


# writing


def _rows(d):
    """{key or key tuple: value} -> sorted [*key, value] rows."""
    out = []
    for k, v in d.items():
        out.append([*k, v] if isinstance(k, tuple) else [k, v])
    return sorted(out)


def _labels(d):
    return [[int(k), str(v)] for k, v in sorted(d.items())]


def category_payload(cat):
    out = {
        "objects": list(cat.object_labels),
        "morphisms": [[f, s, t] for f, (s, t) in sorted(cat.mor.items())],
        "identities": [cat.ident[a] for a in cat.objects],
        "composition": _rows(cat.comp),
    }
    if cat.labels:
        out["labels"] = _labels(cat.labels)
    return out


def two_category_payload(B):
    if not isinstance(B, FiniteTwoCategory):
        B = materialize_two(B)[0]
    out = {
        "objects": B.n_objects,
        "one_cells": [[h, s, t] for h, (s, t) in sorted(B.one.items())],
        "units": [B.units1[a] for a in range(B.n_objects)],
        "composition": _rows(B.comp1_table),
        "cells": [[c, s, t] for c, (s, t) in sorted(B.cell.items())],
        "vcomp": _rows(B.vtable),
        "hcomp": _rows(B.htable),
        "identities": _rows(B.ids2),
    }
    if B.labels1:
        out["one_cell_labels"] = _labels(B.labels1)
    if B.labels2:
        out["cell_labels"] = _labels(B.labels2)
    return out


def decorated_payload(D):
    return {"decoration": category_payload(D.Bstar), "bicategory": two_category_payload(D.B)}


def double_payload(C):
    if not isinstance(C, FiniteDoubleCategory):
        C = materialize(C)[0]
    out = {
        "name": C.name,
        "vertical": category_payload(C.vertical),
        "horizontals": [[h, s, t] for h, (s, t) in sorted(C.hor.items())],
        "horizontal_units": [C.hunits[a] for a in C.vertical.objects],
        "horizontal_composition": _rows(C.hcomposition),
        "squares": [[s, *bnd] for s, bnd in sorted(C.sq.items())],
        "vcomp": _rows(C.vtable),
        "hcomp": _rows(C.htable),
        "unit_squares": _rows(C.units),
        "vertical_identities": _rows(C.vids),
    }
    if C.hlabels:
        out["horizontal_labels"] = _labels(C.hlabels)
    if C.slabels:
        out["square_labels"] = _labels(C.slabels)
    return out


def indexing_payload(Phi):
    return {"direction": Phi.direction, "base": decorated_payload(Phi.base),
            "maps": [[f, list(t)] for f, t in sorted(Phi.homs.items())]}


def kind_of(x):
    if isinstance(x, FiniteCategory):
        return "category"
    if isinstance(x, DecoratedTwoCategory):
        return "decorated"
    if isinstance(x, Pi2Indexing):
        return "indexing"
    if isinstance(x, InstanceSpec):
        return "instance_spec"
    if hasattr(x, "one_cells"):
        return "two_category"
    if hasattr(x, "squares"):
        return "double_category"
    raise TypeError(f"cannot serialize {type(x).__name__}")


_WRITERS = {"category": category_payload, "two_category": two_category_payload,
            "decorated": decorated_payload, "double_category": double_payload,
            "indexing": indexing_payload, "instance_spec": lambda s: s.to_plain()}


def to_document(x, kind=None):
    kind = kind or kind_of(x)
    return {"format": FORMAT_VERSION, "kind": kind, "payload": _WRITERS[kind](x)}


def dumps(obj):
    """Canonical JSON text for a plain value."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def serialize(x, kind=None):
    return dumps(to_document(x, kind))


# reading


def _path(parts):
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


class _Refs:
    """Collects id checks for one payload, raising RangeError at the first dangling id."""

    def __init__(self, prefix):
        self.prefix = prefix

    def check(self, value, allowed, *path, what="id"):
        if value not in allowed:
            raise RangeError(f"{what} {value} does not exist", where=_path(self.prefix + list(path)))

    def unique(self, rows, *path, what="id"):
        seen = set()
        for i, row in enumerate(rows):
            if row[0] in seen:
                raise RangeError(f"duplicate {what} {row[0]}", where=_path(self.prefix + list(path) + [i, 0]))
            seen.add(row[0])
        return seen

    def table(self, rows, domains, *path):
        for j, allowed in enumerate(domains):
            if not set(row[j] for row in rows) <= set(allowed):
                i = next(i for i, row in enumerate(rows) if row[j] not in allowed)
                self.check(rows[i][j], allowed, *path, i, j)
        keys = set(tuple(row[:-1]) for row in rows)
        if len(keys) != len(rows):
            keys = set()
            for i, row in enumerate(rows):
                key = tuple(row[:-1])
                if key in keys:
                    raise RangeError(f"duplicate entry for {list(key)}",
                                     where=_path(self.prefix + list(path) + [i]))
                keys.add(key)


def _labels_in(refs, rows, allowed, name):
    for i, (k, _) in enumerate(rows or []):
        refs.check(k, allowed, name, i, 0)
    return {k: v for k, v in rows or []}


def _category(p, prefix):
    refs = _Refs(prefix)
    objs = range(len(p["objects"]))
    mors = refs.unique(p["morphisms"], "morphisms", what="morphism")
    for i, (_, s, t) in enumerate(p["morphisms"]):
        refs.check(s, objs, "morphisms", i, 1, what="object")
        refs.check(t, objs, "morphisms", i, 2, what="object")
    if len(p["identities"]) != len(objs):
        raise SchemaError("one identity per object is required", where=_path(prefix + ["identities"]))
    for i, f in enumerate(p["identities"]):
        refs.check(f, mors, "identities", i, what="morphism")
    refs.table(p["composition"], (mors, mors, mors), "composition")
    labels = _labels_in(refs, p.get("labels"), mors, "labels")
    return FiniteCategory(p["objects"], {f: (s, t) for f, s, t in p["morphisms"]}, p["identities"],
                          {(g, f): h for g, f, h in p["composition"]}, labels)


def _two(p, prefix):
    refs = _Refs(prefix)
    objs = range(p["objects"])
    ones = refs.unique(p["one_cells"], "one_cells", what="1-cell")
    for i, (_, s, t) in enumerate(p["one_cells"]):
        refs.check(s, objs, "one_cells", i, 1, what="object")
        refs.check(t, objs, "one_cells", i, 2, what="object")
    if len(p["units"]) != len(objs):
        raise SchemaError("one unit 1-cell per object is required", where=_path(prefix + ["units"]))
    for i, h in enumerate(p["units"]):
        refs.check(h, ones, "units", i, what="1-cell")
    refs.table(p["composition"], (ones, ones, ones), "composition")
    cells = refs.unique(p["cells"], "cells", what="2-cell")
    for i, (_, s, t) in enumerate(p["cells"]):
        refs.check(s, ones, "cells", i, 1, what="1-cell")
        refs.check(t, ones, "cells", i, 2, what="1-cell")
    refs.table(p["vcomp"], (cells, cells, cells), "vcomp")
    refs.table(p["hcomp"], (cells, cells, cells), "hcomp")
    refs.table(p["identities"], (ones, cells), "identities")
    l1 = _labels_in(refs, p.get("one_cell_labels"), ones, "one_cell_labels")
    l2 = _labels_in(refs, p.get("cell_labels"), cells, "cell_labels")
    return FiniteTwoCategory(
        p["objects"], {h: (s, t) for h, s, t in p["one_cells"]}, p["units"],
        {(a, b): c for a, b, c in p["composition"]}, {c: (s, t) for c, s, t in p["cells"]},
        {(a, b): c for a, b, c in p["vcomp"]}, {(a, b): c for a, b, c in p["hcomp"]},
        {h: c for h, c in p["identities"]}, l1, l2)


def _decorated(p, prefix):
    V = _category(p["decoration"], prefix + ["decoration"])
    B = _two(p["bicategory"], prefix + ["bicategory"])
    if V.n_objects != B.n_objects:
        raise RangeError("decoration and bicategory have different objects", where=_path(prefix))
    return DecoratedTwoCategory(B, V)


def _double(p, prefix):
    V = _category(p["vertical"], prefix + ["vertical"])
    refs = _Refs(prefix)
    objs, mors = V.objects, set(V.mors)
    hors = refs.unique(p["horizontals"], "horizontals", what="1-cell")
    for i, (_, s, t) in enumerate(p["horizontals"]):
        refs.check(s, objs, "horizontals", i, 1, what="object")
        refs.check(t, objs, "horizontals", i, 2, what="object")
    if len(p["horizontal_units"]) != len(objs):
        raise SchemaError("one horizontal unit per object is required", where=_path(prefix + ["horizontal_units"]))
    for i, h in enumerate(p["horizontal_units"]):
        refs.check(h, hors, "horizontal_units", i, what="1-cell")
    refs.table(p["horizontal_composition"], (hors, hors, hors), "horizontal_composition")
    sqs = refs.unique(p["squares"], "squares", what="square")
    for i, (_, l, r, t, b) in enumerate(p["squares"]):
        refs.check(l, mors, "squares", i, 1, what="vertical morphism")
        refs.check(r, mors, "squares", i, 2, what="vertical morphism")
        refs.check(t, hors, "squares", i, 3, what="1-cell")
        refs.check(b, hors, "squares", i, 4, what="1-cell")
    refs.table(p["vcomp"], (sqs, sqs, sqs), "vcomp")
    refs.table(p["hcomp"], (sqs, sqs, sqs), "hcomp")
    refs.table(p["unit_squares"], (mors, sqs), "unit_squares")
    refs.table(p["vertical_identities"], (hors, sqs), "vertical_identities")
    hl = _labels_in(refs, p.get("horizontal_labels"), hors, "horizontal_labels")
    sl = _labels_in(refs, p.get("square_labels"), sqs, "square_labels")
    return FiniteDoubleCategory(
        V, {h: (s, t) for h, s, t in p["horizontals"]}, p["horizontal_units"],
        {(a, b): c for a, b, c in p["horizontal_composition"]},
        {s: (l, r, t, b) for s, l, r, t, b in p["squares"]},
        {(a, b): c for a, b, c in p["vcomp"]}, {(a, b): c for a, b, c in p["hcomp"]},
        {f: s for f, s in p["unit_squares"]}, {h: s for h, s in p["vertical_identities"]},
        hl, sl, name=p.get("name", "C"))


def _indexing(p, prefix):
    base = _decorated(p["base"], prefix + ["base"])
    refs = _Refs(prefix)
    mors = set(base.Bstar.mors)
    seen = refs.unique(p["maps"], "maps", what="morphism")
    for i, (f, _) in enumerate(p["maps"]):
        refs.check(f, mors, "maps", i, 0, what="morphism")
    missing = sorted(mors - seen)
    if missing:
        raise RangeError(f"no map for morphism {missing[0]}", where=_path(prefix + ["maps"]))
    Phi = indexing_from_tables(base, p["direction"], {f: t for f, t in p["maps"]})
    for i, (f, t) in enumerate(p["maps"]):
        dom = Phi.monoids[Phi.domain_object(f)].size
        cod = range(Phi.monoids[Phi.codomain_object(f)].size)
        if len(t) != dom:
            raise RangeError(f"map for morphism {f} has {len(t)} entries, pi2 has {dom}",
                             where=_path(prefix + ["maps", i, 1]))
        for j, y in enumerate(t):
            refs.check(y, cod, "maps", i, 1, j, what="element")
    return Phi


def _instance(p, prefix):
    return InstanceSpec(**p)


_READERS = {"category": _category, "two_category": _two, "decorated": _decorated,
            "double_category": _double, "indexing": _indexing, "instance_spec": _instance}


def _bad_row(rows, width):
    for i, row in enumerate(rows):
        if not (isinstance(row, list) and len(row) == width
                and all(type(x) is int and x >= 0 for x in row)):
            return i
    return None


def _rows_keyword(validator, width, instance, schema):
    if not isinstance(instance, list) or not instance:
        return
    ok = False
    try:
        a = np.asarray(instance)
        ok = (a.ndim == 2 and a.shape[1] == width and a.dtype.kind in "iu" and bool((a >= 0).all())
              and not any(type(x) is bool for row in instance for x in row))
    except (ValueError, TypeError, OverflowError):
        pass
    if not ok:
        i = _bad_row(instance, width)
        if i is not None:
            yield jsonschema.ValidationError(f"expected {width} non-negative integers", path=[i])


_Validator = jsonschema.validators.extend(jsonschema.Draft202012Validator, {"rows": _rows_keyword})


def _schema_check(value, schema, prefix):
    validator = _Validator(schema)
    errors = sorted(validator.iter_errors(value), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        raise SchemaError(e.message, where=_path(prefix + list(e.absolute_path)))


def load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocSyntaxError(e.msg, where=(e.lineno, e.colno)) from None


def parse_document(text):
    """Parse a document. Returns (kind, object)."""
    doc = load(text)
    _schema_check(doc, ENVELOPE_SCHEMA, [])
    kind = doc["kind"]
    _schema_check(doc["payload"], PAYLOAD_SCHEMAS[kind], ["payload"])
    return kind, _READERS[kind](doc["payload"], ["payload"])


def parse(text):
    return parse_document(text)[1]


def read_file(path):
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def write_file(path, x, kind=None):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(x, kind))
