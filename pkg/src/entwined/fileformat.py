"""JSON structure files.

A structure file is one JSON object::

    {
      "schema": 1,
      "field": {"kind": "rationals"}            or {"kind": "prime-field", "p": 2},
      "algebra": {"dim": n, "mult": [[[...], ...], ...], "unit": [...]},
      "coalgebra": {"dim": m, "comult": [[[...], ...], ...], "counit": [...]},
      "coaction": [[...], ...],      # optional, (n*m) x n, A -> A (x) C
      "entwining": [[...], ...],     # optional, (n*m) x (n*m), C (x) A -> A (x) C
      "bimodule": {"dim": d, "left": [matrix, ...], "right": [matrix, ...]}   # optional
    }

Scalars are strings: ``"3"``, ``"-1/2"`` over the rationals, ``"0".."p-1"``
over F_p. Integers are accepted on input. Tensor bases follow the package
convention ``(i, j) -> i * dim(W) + j``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .algcore import Algebra, Bimodule, Coalgebra
from .entwine import Entwining
from .exactlin import Field, Matrix, MalformedInputError
from .galois import ComoduleAlgebra

__all__ = ["StructureFile", "ParseError", "parse_structure", "emit_structure", "dumps_structure",
           "field_from_json", "field_to_json", "matrix_to_json"]

SCHEMA = 1


class ParseError(ValueError):
    """Malformed structure file; the message names the offending key or line."""


@dataclass(eq=True)
class StructureFile:
    field: Field
    algebra: Algebra | None = None
    coalgebra: Coalgebra | None = None
    coaction: Matrix | None = None
    entwining: Matrix | None = None
    bimodule: Bimodule | None = None

    def comodule_algebra(self) -> ComoduleAlgebra:
        if self.algebra is None or self.coalgebra is None or self.coaction is None:
            raise ParseError("this command needs 'algebra', 'coalgebra' and 'coaction'")
        return ComoduleAlgebra(self.algebra, self.coalgebra, self.coaction)

    def entwining_structure(self) -> Entwining:
        if self.algebra is None or self.coalgebra is None or self.entwining is None:
            raise ParseError("no 'entwining' in file")
        return Entwining(self.algebra, self.coalgebra, self.entwining)


def field_from_json(obj) -> Field:
    if not isinstance(obj, dict):
        raise ParseError("field: expected an object like {\"kind\": \"rationals\"}")
    kind = obj.get("kind", "prime-field" if "p" in obj else None)
    try:
        if kind == "rationals":
            return Field("rationals")
        if kind == "prime-field":
            p = obj.get("p")
            if not isinstance(p, int) or isinstance(p, bool):
                raise ParseError(f"field.p: expected an integer, got {p!r}")
            return Field("prime-field", p)
    except MalformedInputError as exc:
        raise ParseError(f"field: {exc}") from None
    raise ParseError(f"field.kind: unknown kind {kind!r}")


def field_to_json(f: Field) -> dict:
    return {"kind": "rationals"} if not f.is_prime else {"kind": "prime-field", "p": f.p}


def _scalar(f: Field, x, key: str):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError(f"{key}: scalar must be a string or integer, got {x!r}")
    try:
        return f.parse(x) if isinstance(x, str) else f(x)
    except MalformedInputError as exc:
        raise ParseError(f"{key}: {exc}") from None


def _vector(f: Field, v, n: int, key: str) -> list:
    if not isinstance(v, list):
        raise ParseError(f"{key}: expected an array")
    if len(v) != n:
        raise ParseError(f"{key}: dimension mismatch, expected {n} entries, got {len(v)}")
    return [_scalar(f, x, f"{key}[{i}]") for i, x in enumerate(v)]


def _matrix(f: Field, rows, nrows: int, ncols: int, key: str) -> Matrix:
    if not isinstance(rows, list):
        raise ParseError(f"{key}: expected an array of rows")
    if len(rows) != nrows:
        raise ParseError(f"{key}: dimension mismatch, expected {nrows} rows, got {len(rows)}")
    out = []
    for i, r in enumerate(rows):
        if not isinstance(r, list) or len(r) != ncols:
            got = len(r) if isinstance(r, list) else type(r).__name__
            raise ParseError(f"{key}: dimension mismatch, row {i} should have {ncols} columns, got {got}")
        out.append([_scalar(f, x, f"{key}[{i}][{j}]") for j, x in enumerate(r)])
    return Matrix(f, out, ncols)


def _dim(obj: dict, key: str) -> int:
    d = obj.get("dim")
    if not isinstance(d, int) or isinstance(d, bool) or d < 0:
        raise ParseError(f"{key}.dim: expected a nonnegative integer, got {d!r}")
    return d


def _require(obj, key: str) -> dict:
    if not isinstance(obj, dict):
        raise ParseError(f"{key}: expected an object")
    return obj


def _algebra(f: Field, obj) -> Algebra:
    obj = _require(obj, "algebra")
    n = _dim(obj, "algebra")
    mult = obj.get("mult")
    if not isinstance(mult, list) or len(mult) != n:
        raise ParseError(f"algebra.mult: dimension mismatch, expected {n} rows")
    table = []
    for i, row in enumerate(mult):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"algebra.mult[{i}]: dimension mismatch, expected {n} entries")
        table.append([_vector(f, v, n, f"algebra.mult[{i}][{j}]") for j, v in enumerate(row)])
    unit = _vector(f, obj.get("unit"), n, "algebra.unit")
    return Algebra(f, n, table, unit)


def _coalgebra(f: Field, obj) -> Coalgebra:
    obj = _require(obj, "coalgebra")
    n = _dim(obj, "coalgebra")
    comult = obj.get("comult")
    if not isinstance(comult, list) or len(comult) != n:
        raise ParseError(f"coalgebra.comult: dimension mismatch, expected {n} matrices")
    mats = [_matrix(f, d, n, n, f"coalgebra.comult[{i}]").rows for i, d in enumerate(comult)]
    counit = _vector(f, obj.get("counit"), n, "coalgebra.counit")
    return Coalgebra(f, n, mats, counit)


def _bimodule(f: Field, obj, algebra: Algebra | None) -> Bimodule:
    obj = _require(obj, "bimodule")
    if algebra is None:
        raise ParseError("bimodule: no algebra to act")
    d = _dim(obj, "bimodule")
    out = {}
    for side in ("left", "right"):
        mats = obj.get(side)
        if not isinstance(mats, list) or len(mats) != algebra.dim:
            raise ParseError(f"bimodule.{side}: dimension mismatch, expected {algebra.dim} matrices")
        out[side] = [_matrix(f, m, d, d, f"bimodule.{side}[{i}]") for i, m in enumerate(mats)]
    return Bimodule(algebra, d, out["left"], out["right"])


def parse_structure(text: str, algebra: Algebra | None = None) -> StructureFile:
    """Parse and validate a structure file.

    ``algebra`` supplies the acting algebra for files that carry only a
    ``bimodule`` section.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level: expected a JSON object")
    schema = doc.get("schema", SCHEMA)
    if schema != SCHEMA:
        raise ParseError(f"schema: unsupported version {schema!r}")
    unknown = set(doc) - {"schema", "field", "algebra", "coalgebra", "coaction", "entwining", "bimodule"}
    if unknown:
        raise ParseError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "field" not in doc:
        raise ParseError("field: missing")
    f = field_from_json(doc["field"])
    sf = StructureFile(f)
    if "algebra" in doc:
        sf.algebra = _algebra(f, doc["algebra"])
    if "coalgebra" in doc:
        sf.coalgebra = _coalgebra(f, doc["coalgebra"])
    for key in ("coaction", "entwining"):
        if key in doc:
            if sf.algebra is None or sf.coalgebra is None:
                raise ParseError(f"{key}: needs both 'algebra' and 'coalgebra'")
            dA, dC = sf.algebra.dim, sf.coalgebra.dim
            ncols = dA if key == "coaction" else dA * dC
            setattr(sf, key, _matrix(f, doc[key], dA * dC, ncols, key))
    if "bimodule" in doc:
        act = sf.algebra or algebra
        if algebra is not None and sf.algebra is not None and sf.algebra != algebra:
            raise ParseError("bimodule: file's algebra differs from the acting algebra")
        if act is not None and act.field != f:
            raise ParseError("field: bimodule file and structure file use different fields")
        sf.bimodule = _bimodule(f, doc["bimodule"], act)
    return sf


def _s(f: Field, x) -> str:
    return f.format(x)


def matrix_to_json(m: Matrix) -> list:
    return [[_s(m.field, x) for x in r] for r in m.rows]


def emit_structure(sf: StructureFile, include_algebra: bool = True) -> dict:
    f = sf.field
    doc: dict[str, Any] = {"schema": SCHEMA, "field": field_to_json(f)}
    if sf.algebra is not None and include_algebra:
        a = sf.algebra
        doc["algebra"] = {"dim": a.dim, "mult": [[[_s(f, x) for x in v] for v in row] for row in a.mult],
                          "unit": [_s(f, x) for x in a.unit]}
    if sf.coalgebra is not None:
        c = sf.coalgebra
        doc["coalgebra"] = {"dim": c.dim, "comult": [[[_s(f, x) for x in r] for r in d] for d in c.comult],
                            "counit": [_s(f, x) for x in c.counit]}
    if sf.coaction is not None:
        doc["coaction"] = matrix_to_json(sf.coaction)
    if sf.entwining is not None:
        doc["entwining"] = matrix_to_json(sf.entwining)
    if sf.bimodule is not None:
        b = sf.bimodule
        doc["bimodule"] = {"dim": b.dim, "left": [matrix_to_json(m) for m in b.left],
                           "right": [matrix_to_json(m) for m in b.right]}
    return doc


def dumps_structure(sf: StructureFile) -> str:
    """Canonical text form: compact rows, one top-level key per line."""
    doc = emit_structure(sf)
    lines = ["{"]
    items = list(doc.items())
    for k, (key, val) in enumerate(items):
        sep = "," if k < len(items) - 1 else ""
        lines.append(f"  {json.dumps(key)}: {json.dumps(val, separators=(', ', ': '))}{sep}")
    lines.append("}")
    return "\n".join(lines) + "\n"
