"""JSON documents: schemas, loaders and writers for lattices, words and chain models.

Every document carries ``"schema": 1``.  Rationals are ``[num, den]`` pairs;
sparse vectors are lists of ``[index, num, den]``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import jsonschema

from .chainmodel.core import OP_OBJECT_COUNT, ChainModel, DegreeError, GradedSpace
from .errors import SchemaError
from .lefschetz import QLattice, TwistWord

_RATIONAL = {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}
_QLAURENT = {
    "type": "array",
    "items": {
        "type": "array",
        "prefixItems": [{"type": "integer"}, {"type": "integer"}, _RATIONAL],
        "minItems": 3,
        "maxItems": 3,
    },
}
_SPARSE = {
    "type": "array",
    "items": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 3},
}
_DIMS = {
    "type": "object",
    "patternProperties": {"^-?[0-9]+$": {"type": "integer", "minimum": 0}},
    "additionalProperties": False,
}

LATTICE_SCHEMA = {
    "type": "object",
    "required": ["schema", "n", "labels", "spheres", "pairing"],
    "properties": {
        "schema": {"const": 1},
        "n": {"type": "integer", "minimum": 1},
        "labels": {"type": "array", "items": {"type": "string"}},
        "spheres": {"type": "array", "items": {"type": "boolean"}},
        "pairing": {"type": "array", "items": {"type": "array", "items": _QLAURENT}},
    },
}

WORD_SCHEMA = {
    "oneOf": [
        {"type": "object", "required": ["schema", "word"],
         "properties": {"schema": {"const": 1}, "word": {"$ref": "#/$defs/letters"}}},
        {"$ref": "#/$defs/letters"},
    ],
    "$defs": {
        "letters": {
            "type": "array",
            "items": {
                "type": "array",
                "prefixItems": [{"const": "tau"}, {"type": "integer", "minimum": 0},
                                {"enum": [1, -1]}],
                "minItems": 3,
                "maxItems": 3,
            },
        }
    },
}

MODEL_SCHEMA = {
    "type": "object",
    "required": ["schema", "n", "closed", "lagrangians", "spaces", "operations", "cochains"],
    "properties": {
        "schema": {"const": 1},
        "n": {"type": "integer", "minimum": 1},
        "closed": {"type": "object", "required": ["dims"],
                   "properties": {"dims": _DIMS, "labels": {"type": "array", "items": {"type": "string"}}}},
        "lagrangians": {"type": "array", "items": {"type": "string"}, "uniqueItems": True},
        "spaces": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["objects", "dims"],
                "properties": {
                    "objects": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                    "dims": _DIMS,
                    "labels": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
        "operations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "objects", "entries"],
                "properties": {
                    "name": {"enum": sorted(OP_OBJECT_COUNT)},
                    "objects": {"type": "array", "items": {"type": "string"}},
                    "entries": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["inputs", "output"],
                            "properties": {
                                "inputs": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                                "output": _SPARSE,
                            },
                        },
                    },
                },
            },
        },
        "cochains": {
            "type": "object",
            "required": ["e", "b", "beta"],
            "properties": {k: {"type": "array", "items": _RATIONAL} for k in ("e", "b", "beta")},
        },
        "units": {"type": "object", "additionalProperties": {"type": "array", "items": _RATIONAL}},
        "equivariant": {"type": "object", "additionalProperties": {"type": "array", "items": _RATIONAL}},
    },
}


def _validate(data, schema, what: str):
    try:
        jsonschema.validate(data, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path)
        raise SchemaError(f"{what}: {exc.message} at '{path}'") from None


def read_json(path: str | Path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: malformed JSON ({exc})") from None
    except OSError as exc:
        raise SchemaError(f"{path}: {exc.strerror}") from None


def dumps(data) -> str:
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(data, indent=1, sort_keys=True) + "\n"


def write_json(path: str | Path, data) -> None:
    Path(path).write_text(dumps(data), encoding="utf-8")


# -- lattices and words -------------------------------------------------------


def lattice_from_json(data) -> QLattice:
    """Raises SchemaError for malformed input, LatticeInvariantError for bad pairings."""
    _validate(data, LATTICE_SCHEMA, "lattice")
    size = len(data["labels"])
    if len(data["spheres"]) != size or len(data["pairing"]) != size \
            or any(len(row) != size for row in data["pairing"]):
        raise SchemaError("lattice: labels, spheres and pairing sizes disagree")
    for row in data["pairing"]:
        for term in (t for x in row for t in x):
            if term[1] == 0 or term[2][1] == 0:
                raise SchemaError("lattice: zero denominator")
    return QLattice.from_json(data)


def load_lattice(path) -> QLattice:
    return lattice_from_json(read_json(path))


def word_from_json(data) -> TwistWord:
    _validate(data, WORD_SCHEMA, "word")
    letters = data["word"] if isinstance(data, dict) else data
    return TwistWord.from_json(letters)


def load_word(path) -> TwistWord:
    return word_from_json(read_json(path))


# -- chain models ---------------------------------------------------------------


def _rational_list(values, size: int, what: str) -> dict:
    if len(values) != size:
        raise SchemaError(f"{what}: expected {size} coordinates, got {len(values)}")
    out = {}
    for i, (num, den) in enumerate(values):
        if den == 0:
            raise SchemaError(f"{what}: zero denominator")
        if num:
            out[i] = Fraction(num, den)
    return out


def _dense(v: dict, size: int) -> list:
    out = []
    for i in range(size):
        c = Fraction(v.get(i, 0))
        out.append([c.numerator, c.denominator])
    return out


def _space(name: str, spec) -> GradedSpace:
    dims = {int(k): int(v) for k, v in spec["dims"].items()}
    try:
        return GradedSpace.from_dims(name, dims, tuple(spec.get("labels", ())))
    except ValueError as exc:
        raise SchemaError(f"{name}: {exc}") from None


def model_from_json(data) -> ChainModel:
    _validate(data, MODEL_SCHEMA, "model")
    n = data["n"]
    closed = _space("CF(H)", data["closed"])
    lags = tuple(data["lagrangians"])
    spaces = {}
    for sp in data["spaces"]:
        l0, l1 = sp["objects"]
        if l0 not in lags or l1 not in lags:
            raise SchemaError(f"space refers to unknown object in {sp['objects']}")
        spaces[(l0, l1)] = _space(f"CF({l0},{l1})", sp)
    C = closed.dim
    try:
        skeleton = ChainModel(
            n, closed, lags, spaces, {},
            _rational_list(data["cochains"]["e"], C, "e"),
            _rational_list(data["cochains"]["b"], C, "b"),
            _rational_list(data["cochains"]["beta"], C, "beta"),
            {l: _rational_list(v, spaces[(l, l)].dim, f"unit {l}") for l, v in data.get("units", {}).items()},
            {l: _rational_list(v, spaces[(l, l)].dim, f"c {l}") for l, v in data.get("equivariant", {}).items()},
        )
    except KeyError as exc:
        raise SchemaError(f"cochain for object without CF(L, L): {exc}") from None
    ops = {}
    for op in data["operations"]:
        name, objs = op["name"], tuple(op["objects"])
        entries = {}
        for ent in op["entries"]:
            out = {}
            for idx, num, den in ent["output"]:
                if den == 0:
                    raise SchemaError(f"{name}: zero denominator")
                out[idx] = out.get(idx, Fraction(0)) + Fraction(num, den)
            key = tuple(ent["inputs"])
            if key in entries:
                raise SchemaError(f"{name}{objs}: duplicate entry {list(key)}")
            entries[key] = out
        try:
            built = skeleton.make_op(name, objs, entries)
        except (KeyError, ValueError, IndexError, DegreeError) as exc:
            raise SchemaError(f"{name}{objs}: {exc}") from None
        if (name, objs) in ops:
            raise SchemaError(f"duplicate operation {name}{objs}")
        ops[(name, objs)] = built
    return skeleton._replace(ops=ops)


def _dims_of(space: GradedSpace) -> dict:
    if list(space.degrees) != sorted(space.degrees):
        raise ValueError(f"{space.name}: basis must be ordered by degree to serialize")
    return {str(k): v for k, v in space.dims.items()}


def model_to_json(m: ChainModel) -> dict:
    ops = []
    for (name, objs) in sorted(m.ops):
        op = m.ops[(name, objs)]
        ops.append({
            "name": name,
            "objects": list(objs),
            "entries": [
                {"inputs": list(k), "output": [[i, c.numerator, c.denominator] for i, c in sorted(v.items())]}
                for k, v in op.entries.items()
            ],
        })
    return {
        "schema": 1,
        "n": m.n,
        "closed": {"dims": _dims_of(m.closed), "labels": list(m.closed.labels)},
        "lagrangians": list(m.lagrangians),
        "spaces": [{"objects": [l0, l1], "dims": _dims_of(sp), "labels": list(sp.labels)}
                   for (l0, l1), sp in sorted(m.spaces.items())],
        "operations": ops,
        "cochains": {k: _dense(getattr(m, k), m.closed.dim) for k in ("e", "b", "beta")},
        "units": {l: _dense(v, m.cf(l, l).dim) for l, v in sorted(m.units.items())},
        "equivariant": {l: _dense(v, m.cf(l, l).dim) for l, v in sorted(m.c.items())},
    }


def load_model(path) -> ChainModel:
    return model_from_json(read_json(path))

