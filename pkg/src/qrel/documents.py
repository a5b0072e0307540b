"""JSON interchange format.

Every object crossing the process boundary is a document: a kind tag, a
kind-specific payload, and optional free-form metadata.  Emission is
canonical (sorted keys, 17-significant-digit numbers, complex entries as
re/im records) so equal documents serialize to identical bytes; parsing
validates the payload against its kind before any computation and reports
the offending path.  Classical relation indices are 0-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .algebra import StarAlgebra, algebra_closure
from .channel import CPMap
from .errors import PreconditionError, ValidationError
from .matrix import Projection
from .relation import ClassicalRelation
from .spaces import OperatorSpace, span

__all__ = [
    "Document",
    "KINDS",
    "algebra_from_document",
    "channel_document",
    "channel_from_document",
    "classical_relation_document",
    "classical_relation_from_document",
    "emit",
    "matrix_document",
    "matrix_from_document",
    "operator_space_document",
    "operator_space_from_document",
    "parse",
    "projection_document",
    "projection_from_document",
]

KINDS = (
    "matrix",
    "operator_space",
    "algebra",
    "channel",
    "classical_relation",
    "projection",
)


@dataclass(frozen=True)
class Document:
    kind: str
    payload: dict
    meta: dict | None = None


# ---------------------------------------------------------------------------
# canonical emission


def _format_number(value: float) -> str:
    if not np.isfinite(value):
        raise ValidationError("cannot emit non-finite number")
    return format(float(value), ".17g")


def _canonical(obj) -> str:
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return repr(obj)
    if isinstance(obj, float):
        return _format_number(obj)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=True)
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_canonical(item) for item in obj) + "]"
    if isinstance(obj, dict):
        parts = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise ValidationError("document keys must be strings")
            parts.append(json.dumps(key, ensure_ascii=True) + ":" + _canonical(obj[key]))
        return "{" + ",".join(parts) + "}"
    raise ValidationError(f"cannot emit object of type {type(obj).__name__}")


def canonical_json(obj) -> str:
    """Canonical JSON text for a plain object tree (sorted keys, .17g numbers)."""
    return _canonical(obj)


def document_body(doc: Document) -> dict:
    body: dict = {"kind": doc.kind, "payload": doc.payload}
    if doc.meta is not None:
        body["meta"] = doc.meta
    return body


def emit(doc: Document) -> bytes:
    """Canonical UTF-8 JSON bytes for a document."""
    return _canonical(document_body(doc)).encode("utf-8")


# ---------------------------------------------------------------------------
# validation helpers (each returns the normalized value)


def _fail(path: str, message: str):
    raise ValidationError(f"{path}: {message}")


def _expect_dict(value, path: str, keys: set[str]) -> dict:
    if not isinstance(value, dict):
        _fail(path, f"expected an object, got {type(value).__name__}")
    extra = set(value) - keys
    if extra:
        _fail(path, f"unexpected keys {sorted(extra)}")
    return value


def _expect_count(value, path: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(path, "expected an integer")
    if value < minimum:
        _fail(path, f"must be at least {minimum}")
    return value


def _expect_bool(value, path: str) -> bool:
    if not isinstance(value, bool):
        _fail(path, "expected a boolean")
    return value


def _expect_real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        _fail(path, "expected a number")
    value = float(value)
    if not np.isfinite(value):
        _fail(path, "number is not finite")
    return value


def _expect_complex(value, path: str) -> dict:
    entry = _expect_dict(value, path, {"re", "im"})
    if "re" not in entry or "im" not in entry:
        _fail(path, "complex entries need both 're' and 'im'")
    return {"re": _expect_real(entry["re"], path + ".re"), "im": _expect_real(entry["im"], path + ".im")}


def _expect_matrix(value, path: str) -> dict:
    payload = _expect_dict(value, path, {"rows", "cols", "entries"})
    for key in ("rows", "cols", "entries"):
        if key not in payload:
            _fail(path, f"missing key '{key}'")
    rows = _expect_count(payload["rows"], path + ".rows", minimum=1)
    cols = _expect_count(payload["cols"], path + ".cols", minimum=1)
    entries = payload["entries"]
    if not isinstance(entries, list) or len(entries) != rows:
        _fail(path + ".entries", f"expected {rows} rows")
    normalized = []
    for i, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != cols:
            _fail(f"{path}.entries[{i}]", f"expected {cols} entries")
        normalized.append(
            [_expect_complex(cell, f"{path}.entries[{i}][{j}]") for j, cell in enumerate(row)]
        )
    return {"rows": rows, "cols": cols, "entries": normalized}


def _expect_matrix_list(value, path: str, minimum: int = 0) -> list:
    if not isinstance(value, list):
        _fail(path, "expected a list of matrices")
    if len(value) < minimum:
        _fail(path, f"expected at least {minimum} matrices")
    return [_expect_matrix(item, f"{path}[{i}]") for i, item in enumerate(value)]


def _matrix_to_array(payload: dict) -> np.ndarray:
    rows, cols = payload["rows"], payload["cols"]
    out = np.empty((rows, cols), np.complex128)
    for i, row in enumerate(payload["entries"]):
        for j, cell in enumerate(row):
            out[i, j] = complex(cell["re"], cell["im"])
    return out


def _array_to_matrix_payload(arr: np.ndarray) -> dict:
    arr = np.asarray(arr, dtype=np.complex128)
    entries = [
        [{"re": float(cell.real), "im": float(cell.imag)} for cell in row] for row in arr
    ]
    return {"rows": arr.shape[0], "cols": arr.shape[1], "entries": entries}


# ---------------------------------------------------------------------------
# per-kind payload validators


def _validate_matrix(payload, path):
    return _expect_matrix(payload, path)


def _validate_operator_space(payload, path):
    payload = _expect_dict(payload, path, {"row_dim", "col_dim", "basis"})
    for key in ("row_dim", "col_dim", "basis"):
        if key not in payload:
            _fail(path, f"missing key '{key}'")
    row_dim = _expect_count(payload["row_dim"], path + ".row_dim", minimum=1)
    col_dim = _expect_count(payload["col_dim"], path + ".col_dim", minimum=1)
    basis = _expect_matrix_list(payload["basis"], path + ".basis")
    for i, mat in enumerate(basis):
        if (mat["rows"], mat["cols"]) != (row_dim, col_dim):
            _fail(f"{path}.basis[{i}]", "matrix shape does not match the space shape")
    return {"row_dim": row_dim, "col_dim": col_dim, "basis": basis}


def _validate_algebra(payload, path):
    payload = _expect_dict(payload, path, {"dim_ambient", "basis"})
    for key in ("dim_ambient", "basis"):
        if key not in payload:
            _fail(path, f"missing key '{key}'")
    dim = _expect_count(payload["dim_ambient"], path + ".dim_ambient", minimum=1)
    basis = _expect_matrix_list(payload["basis"], path + ".basis")
    for i, mat in enumerate(basis):
        if (mat["rows"], mat["cols"]) != (dim, dim):
            _fail(f"{path}.basis[{i}]", "matrix is not square of the ambient dimension")
    return {"dim_ambient": dim, "basis": basis}


def _validate_channel(payload, path):
    payload = _expect_dict(payload, path, {"in_dim", "out_dim", "trace_preserving", "kraus"})
    for key in ("in_dim", "out_dim", "trace_preserving", "kraus"):
        if key not in payload:
            _fail(path, f"missing key '{key}'")
    in_dim = _expect_count(payload["in_dim"], path + ".in_dim", minimum=1)
    out_dim = _expect_count(payload["out_dim"], path + ".out_dim", minimum=1)
    tp = _expect_bool(payload["trace_preserving"], path + ".trace_preserving")
    kraus = _expect_matrix_list(payload["kraus"], path + ".kraus", minimum=1)
    for i, mat in enumerate(kraus):
        if (mat["rows"], mat["cols"]) != (out_dim, in_dim):
            _fail(f"{path}.kraus[{i}]", f"expected an {out_dim}x{in_dim} matrix")
    normalized = {"in_dim": in_dim, "out_dim": out_dim, "trace_preserving": tp, "kraus": kraus}
    if tp:
        stack = np.stack([_matrix_to_array(mat) for mat in kraus])
        try:
            CPMap(kraus=stack, trace_preserving=True)
        except ValidationError as exc:
            _fail(path + ".kraus", str(exc))
    return normalized


def _validate_classical_relation(payload, path):
    payload = _expect_dict(payload, path, {"size", "pairs"})
    for key in ("size", "pairs"):
        if key not in payload:
            _fail(path, f"missing key '{key}'")
    size = _expect_count(payload["size"], path + ".size", minimum=1)
    pairs = payload["pairs"]
    if not isinstance(pairs, list):
        _fail(path + ".pairs", "expected a list of index pairs")
    seen = set()
    for i, pair in enumerate(pairs):
        if not isinstance(pair, list) or len(pair) != 2:
            _fail(f"{path}.pairs[{i}]", "expected a two-element list")
        a = _expect_count(pair[0], f"{path}.pairs[{i}][0]")
        b = _expect_count(pair[1], f"{path}.pairs[{i}][1]")
        if a >= size or b >= size:
            _fail(f"{path}.pairs[{i}]", f"index out of range for size {size}")
        seen.add((a, b))
    return {"size": size, "pairs": [list(p) for p in sorted(seen)]}


def _validate_projection(payload, path):
    payload = _expect_dict(payload, path, {"matrix", "rank"})
    for key in ("matrix", "rank"):
        if key not in payload:
            _fail(path, f"missing key '{key}'")
    mat = _expect_matrix(payload["matrix"], path + ".matrix")
    if mat["rows"] != mat["cols"]:
        _fail(path + ".matrix", "projection matrix must be square")
    rank = _expect_count(payload["rank"], path + ".rank")
    try:
        proj = Projection.from_matrix(_matrix_to_array(mat))
    except (ValidationError, PreconditionError) as exc:
        _fail(path + ".matrix", str(exc))
    if proj.rank != rank:
        _fail(path + ".rank", f"declared rank {rank} but computed {proj.rank}")
    return {"matrix": mat, "rank": rank}


_VALIDATORS = {
    "matrix": _validate_matrix,
    "operator_space": _validate_operator_space,
    "algebra": _validate_algebra,
    "channel": _validate_channel,
    "classical_relation": _validate_classical_relation,
    "projection": _validate_projection,
}


def _reject_constant(name: str):
    raise ValidationError(f"non-finite number {name!r} is not allowed")


def parse(data) -> Document:
    """Parse and validate UTF-8 JSON into a document."""
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ValidationError(f"document is not valid UTF-8: {exc}") from exc
    try:
        raw = json.loads(data, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"document is not valid JSON: {exc}") from exc
    body = _expect_dict(raw, "$", {"kind", "payload", "meta"})
    kind = body.get("kind")
    if kind not in KINDS:
        _fail("$.kind", f"unknown kind {kind!r}; expected one of {list(KINDS)}")
    if "payload" not in body:
        _fail("$", "missing key 'payload'")
    payload = _VALIDATORS[kind](body["payload"], "$.payload")
    meta = body.get("meta")
    if meta is not None and not isinstance(meta, dict):
        _fail("$.meta", "expected an object")
    return Document(kind=kind, payload=payload, meta=meta)


# ---------------------------------------------------------------------------
# document <-> domain object conversions


def matrix_from_document(doc: Document) -> np.ndarray:
    if doc.kind != "matrix":
        raise ValidationError(f"expected a matrix document, got {doc.kind!r}")
    return _matrix_to_array(doc.payload)


def matrix_document(arr: np.ndarray, meta: dict | None = None) -> Document:
    return Document("matrix", _array_to_matrix_payload(arr), meta)


def operator_space_from_document(doc: Document) -> OperatorSpace:
    if doc.kind != "operator_space":
        raise ValidationError(f"expected an operator_space document, got {doc.kind!r}")
    mats = [_matrix_to_array(m) for m in doc.payload["basis"]]
    return span(mats, shape=(doc.payload["row_dim"], doc.payload["col_dim"]))


def operator_space_document(space: OperatorSpace, meta: dict | None = None) -> Document:
    payload = {
        "row_dim": space.row_dim,
        "col_dim": space.col_dim,
        "basis": [_array_to_matrix_payload(b) for b in space.basis],
    }
    return Document("operator_space", payload, meta)


def algebra_from_document(doc: Document) -> StarAlgebra:
    """Algebras are read forgivingly: the listed matrices are closure generators."""
    if doc.kind != "algebra":
        raise ValidationError(f"expected an algebra document, got {doc.kind!r}")
    mats = [_matrix_to_array(m) for m in doc.payload["basis"]]
    return algebra_closure(mats, dim=doc.payload["dim_ambient"])


def algebra_document(algebra: StarAlgebra, meta: dict | None = None) -> Document:
    payload = {
        "dim_ambient": algebra.dim_ambient,
        "basis": [_array_to_matrix_payload(b) for b in algebra.space.basis],
    }
    return Document("algebra", payload, meta)


def channel_from_document(doc: Document) -> CPMap:
    if doc.kind != "channel":
        raise ValidationError(f"expected a channel document, got {doc.kind!r}")
    stack = np.stack([_matrix_to_array(m) for m in doc.payload["kraus"]])
    return CPMap(kraus=stack, trace_preserving=doc.payload["trace_preserving"])


def channel_document(channel: CPMap, meta: dict | None = None) -> Document:
    payload = {
        "in_dim": channel.in_dim,
        "out_dim": channel.out_dim,
        "trace_preserving": channel.trace_preserving,
        "kraus": [_array_to_matrix_payload(k) for k in channel.kraus],
    }
    return Document("channel", payload, meta)


def classical_relation_from_document(doc: Document) -> ClassicalRelation:
    if doc.kind != "classical_relation":
        raise ValidationError(f"expected a classical_relation document, got {doc.kind!r}")
    return ClassicalRelation(
        doc.payload["size"], frozenset(tuple(p) for p in doc.payload["pairs"])
    )


def classical_relation_document(rel: ClassicalRelation, meta: dict | None = None) -> Document:
    payload = {"size": rel.size, "pairs": [list(p) for p in sorted(rel.pairs)]}
    return Document("classical_relation", payload, meta)


def projection_from_document(doc: Document) -> Projection:
    if doc.kind != "projection":
        raise ValidationError(f"expected a projection document, got {doc.kind!r}")
    return Projection.from_matrix(_matrix_to_array(doc.payload["matrix"]))


def projection_document(proj: Projection, meta: dict | None = None) -> Document:
    payload = {"matrix": _array_to_matrix_payload(proj.matrix), "rank": proj.rank}
    return Document("projection", payload, meta)
