"""
MUBTRIO Matrix Files - JSON and plain-text matrix formats

JSON:  {"d": 6, "entries": [[[re, im], ...], ...]}, rows outermost
Text:  d lines of d whitespace-separated tokens "a+bi" / "a-bi"

Floats are written in their shortest round-trip form, so reading a written
file reproduces the matrix bitwise.
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np

from models.domain import CMatrix
from models.errors import MatrixFormatError
from services.core import MatrixLike, as_array

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def matrix_to_json(M: MatrixLike, provenance: Optional[Dict[str, Any]] = None) -> str:
    """Canonical JSON text of a matrix, with an optional provenance object."""
    M = as_array(M)
    data: Dict[str, Any] = {
        "d": int(M.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in M],
    }
    if provenance is not None:
        data["provenance"] = provenance
    return json.dumps(data, indent=2) + "\n"


def matrix_from_json(text: str) -> CMatrix:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise MatrixFormatError(f"Invalid JSON: {e}") from e
    if not isinstance(data, dict) or "entries" not in data:
        raise MatrixFormatError('Expected an object with an "entries" array')

    entries = data["entries"]
    if not isinstance(entries, list) or not entries:
        raise MatrixFormatError('"entries" must be a non-empty array of rows')
    width = len(entries[0]) if isinstance(entries[0], list) else -1
    for n, row in enumerate(entries):
        if not isinstance(row, list) or len(row) != width:
            raise MatrixFormatError(f"Row {n} breaks the rectangular shape")
        for pair in row:
            if (not isinstance(pair, list) or len(pair) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)):
                raise MatrixFormatError(f"Row {n} holds an entry that is not [re, im]")

    M = np.array([[complex(re, im) for re, im in row] for row in entries], dtype=np.complex128)
    d = data.get("d")
    if d is not None and (M.shape[0] != d or M.shape[1] != d):
        raise MatrixFormatError(f'"d" is {d} but entries have shape {M.shape}')
    if not np.isfinite(M).all():
        raise MatrixFormatError("Entries must be finite")
    return M


def _token(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def matrix_to_text(M: MatrixLike) -> str:
    return "".join(" ".join(_token(z) for z in row) + "\n" for row in as_array(M))


def matrix_from_text(text: str) -> CMatrix:
    rows = []
    for n, line in enumerate(text.splitlines()):
        tokens = line.split()
        if not tokens:
            continue
        try:
            rows.append([complex(t.replace("i", "j")) for t in tokens])
        except ValueError as e:
            raise MatrixFormatError(f"Line {n + 1}: {e}") from e
    if not rows:
        raise MatrixFormatError("No matrix rows found")
    if any(len(r) != len(rows[0]) for r in rows):
        raise MatrixFormatError("Rows have different lengths")
    M = np.array(rows, dtype=np.complex128)
    if not np.isfinite(M).all():
        raise MatrixFormatError("Entries must be finite")
    return M


def read_matrix(path: PathLike) -> CMatrix:
    """Read either format; JSON is recognized by its opening brace."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise MatrixFormatError(f"Cannot read {path}: {e}") from e
    if text.lstrip().startswith("{"):
        return matrix_from_json(text)
    return matrix_from_text(text)


def read_provenance(path: PathLike) -> Optional[Dict[str, Any]]:
    text = Path(path).read_text(encoding="utf-8")
    if not text.lstrip().startswith("{"):
        return None
    return json.loads(text).get("provenance")


def write_matrix(M: MatrixLike, path: PathLike, fmt: str = "json",
                 provenance: Optional[Dict[str, Any]] = None) -> Path:
    path = Path(path)
    if fmt == "json":
        text = matrix_to_json(M, provenance)
    elif fmt == "text":
        text = matrix_to_text(M)
    else:
        raise ValueError(f"Unsupported matrix format: {fmt}")
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.debug("wrote %s matrix to %s", fmt, path)
    return path


def file_digest(path: PathLike) -> str:
    """SHA-256 hex digest of a file's bytes."""
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
