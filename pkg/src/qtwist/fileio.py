"""Flat-file formats: matrices, representations, verification reports.

All files are JSON with sorted keys and two-space indentation so fixtures
diff cleanly.  Complex entries are written as [re, im] pairs, matrices
row-major with explicit dims; weights are exact rational strings.  Floats
go through repr, so export followed by ingest reproduces every matrix
bit for bit.  Reports embed the convention-table hash and a timestamp;
the timestamp is the only field excluded from determinism comparisons.
"""

from __future__ import annotations

import datetime
import json
import os
import tempfile
from fractions import Fraction

import numpy as np

from .cartan import Weight, build_root_system
from .conventions import conventions_hash
from .errors import FileFormatError
from .repspace import Representation

MATRIX_FORMAT = "qtwist-matrix/1"
REP_FORMAT = "qtwist-representation/1"
REPORT_FORMAT = "qtwist-report/1"


def _timestamp() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat()


def _atomic_write_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def matrix_to_obj(matrix: np.ndarray) -> dict:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2:
        raise FileFormatError(f"expected a 2-d matrix, got ndim={m.ndim}")
    rows, cols = m.shape
    entries = [[[z.real, z.imag] for z in row] for row in m]
    return {"dims": [rows, cols], "entries": entries}


def obj_to_matrix(obj) -> np.ndarray:
    try:
        rows, cols = obj["dims"]
        entries = obj["entries"]
    except (TypeError, KeyError, ValueError) as exc:
        raise FileFormatError(f"matrix object missing dims/entries: {exc}")
    if len(entries) != rows:
        raise FileFormatError(
            f"matrix declares {rows} rows but carries {len(entries)}")
    out = np.zeros((rows, cols), dtype=complex)
    for i, row in enumerate(entries):
        if len(row) != cols:
            raise FileFormatError(
                f"row {i} has {len(row)} entries, expected {cols}")
        for j, pair in enumerate(row):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise FileFormatError(
                    f"entry ({i},{j}) is not a [re, im] pair: {pair!r}")
            out[i, j] = complex(pair[0], pair[1])
    return out


def write_matrix(path: str, name: str, matrix: np.ndarray,
                 meta: dict | None = None) -> None:
    doc = {
        "format": MATRIX_FORMAT,
        "name": name,
        "conventions": conventions_hash(),
        "created": _timestamp(),
        "matrix": matrix_to_obj(matrix),
    }
    if meta:
        doc["meta"] = meta
    _atomic_write_text(path, _dump(doc))


def read_matrix(path: str) -> tuple[np.ndarray, dict]:
    doc = _read_json(path)
    if doc.get("format") != MATRIX_FORMAT:
        raise FileFormatError(
            f"{path}: not a matrix file (format={doc.get('format')!r})")
    return obj_to_matrix(doc.get("matrix")), doc


def _read_json(path: str) -> dict:
    try:
        with open(path) as handle:
            doc = json.load(handle)
    except OSError as exc:
        raise FileFormatError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{path}: invalid JSON: {exc}")
    if not isinstance(doc, dict):
        raise FileFormatError(f"{path}: top level is not an object")
    return doc


def _weight_to_strings(w: Weight) -> list[str]:
    return [str(c) for c in w.coords]


def _weight_from_strings(coords, rank: int) -> Weight:
    if len(coords) != rank:
        raise FileFormatError(
            f"weight has {len(coords)} coordinates, expected rank {rank}")
    try:
        return Weight(tuple(Fraction(str(c)) for c in coords))
    except (ValueError, ZeroDivisionError) as exc:
        raise FileFormatError(f"bad rational weight coordinate: {exc}")


def write_representation(path: str, rep: Representation) -> None:
    doc = {
        "format": REP_FORMAT,
        "algebra": rep.rs.algebra_id,
        "q": rep.q,
        "dim": rep.dim,
        "label": rep.label,
        "weights": [_weight_to_strings(w) for w in rep.weights],
        "parities": list(rep.parities),
        "e": [matrix_to_obj(m) for m in rep.e],
        "f": [matrix_to_obj(m) for m in rep.f],
        "qt": [matrix_to_obj(m) for m in rep.qt],
        "conventions": conventions_hash(),
        "created": _timestamp(),
    }
    _atomic_write_text(path, _dump(doc))


def read_representation(path: str) -> Representation:
    """Parse a representation file.  Structural checks only; callers must
    still run validate_rep before trusting the algebra."""
    doc = _read_json(path)
    if doc.get("format") != REP_FORMAT:
        raise FileFormatError(
            f"{path}: not a representation file (format={doc.get('format')!r})")
    for key in ("algebra", "q", "dim", "weights", "parities", "e", "f", "qt"):
        if key not in doc:
            raise FileFormatError(f"{path}: missing field {key!r}")
    rs = build_root_system(doc["algebra"])
    q = doc["q"]
    if not isinstance(q, (int, float)) or not 0.0 < q < 1.0:
        raise FileFormatError(f"{path}: q must lie in (0,1), got {q!r}")
    dim = doc["dim"]
    if not isinstance(dim, int) or dim < 1:
        raise FileFormatError(f"{path}: bad dim {dim!r}")
    weights = tuple(_weight_from_strings(w, rs.rank) for w in doc["weights"])
    if len(weights) != dim:
        raise FileFormatError(
            f"{path}: {len(weights)} weights for dim {dim}")
    parities = tuple(doc["parities"])
    if len(parities) != dim or any(p not in (0, 1) for p in parities):
        raise FileFormatError(f"{path}: parities must be {dim} values in 0/1")

    def matrices(key: str) -> tuple[np.ndarray, ...]:
        objs = doc[key]
        if len(objs) != rs.rank:
            raise FileFormatError(
                f"{path}: {key} has {len(objs)} matrices, expected {rs.rank}")
        out = []
        for obj in objs:
            m = obj_to_matrix(obj)
            if m.shape != (dim, dim):
                raise FileFormatError(
                    f"{path}: {key} matrix shape {m.shape}, expected "
                    f"({dim}, {dim})")
            out.append(m)
        return tuple(out)

    return Representation(
        rs=rs, q=float(q), dim=dim, weights=weights, parities=parities,
        e=matrices("e"), f=matrices("f"), qt=matrices("qt"),
        label=str(doc.get("label", "")),
    )


def write_report(path: str, payload: dict) -> None:
    doc = dict(payload)
    doc["format"] = REPORT_FORMAT
    doc["conventions"] = conventions_hash()
    doc["created"] = _timestamp()
    _atomic_write_text(path, _dump(doc))


def read_report(path: str) -> dict:
    doc = _read_json(path)
    if doc.get("format") != REPORT_FORMAT:
        raise FileFormatError(
            f"{path}: not a report file (format={doc.get('format')!r})")
    return doc


def report_bytes_for_comparison(path: str) -> str:
    """Report content with the timestamp stripped, for determinism tests."""
    doc = read_report(path)
    doc.pop("created", None)
    return _dump(doc)
