"""Matrix file format.

A UTF-8 JSON document::

    {"n": 2, "entries": [[[1, 0], [0, 1]], [[0, 0], [1, 0]]]}

``entries`` holds ``n`` rows of ``n`` entries, each entry a ``[re, im]`` pair.
Affine family templates use the same entry grammar under the keys ``base``
and ``direction``.
"""

import json
from numbers import Real

import numpy as np

from .exceptions import FamilyParseError, NonSquare, ParseError, TooLarge
from .numfield import MAX_DIM

__all__ = [
    "parse_matrix",
    "format_matrix",
    "read_matrix",
    "write_matrix",
    "parse_family",
    "read_family",
    "entries_to_array",
    "array_to_entries",
]


def _load(text, error=ParseError):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise error(exc.msg, exc.lineno, exc.colno) from exc


def _is_real(x):
    return isinstance(x, Real) and not isinstance(x, bool)


def _dimension(doc, error):
    if not isinstance(doc, dict):
        raise error("top-level value must be an object")
    n = doc.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise error('field "n" must be a positive integer')
    if n > MAX_DIM:
        raise TooLarge(f"dimension {n} exceeds the limit {MAX_DIM}")
    return n


def entries_to_array(rows, n, key="entries", error=ParseError):
    if not isinstance(rows, list):
        raise error(f'field "{key}" must be a list of rows')
    if len(rows) != n:
        raise error(f'field "{key}" has {len(rows)} rows, expected n = {n}')
    lengths = {len(r) if isinstance(r, list) else -1 for r in rows}
    if -1 in lengths:
        raise error(f'every row of "{key}" must be a list')
    if len(lengths) == 1 and lengths != {n}:
        raise NonSquare(f'"{key}" has {n} rows of length {lengths.pop()}')
    out = np.empty((n, n), dtype=np.complex128)
    for i, row in enumerate(rows):
        if len(row) != n:
            raise error(f'row {i} of "{key}" has {len(row)} entries, expected {n}')
        for j, z in enumerate(row):
            if not (isinstance(z, list) and len(z) == 2 and all(_is_real(x) for x in z)):
                raise error(f'entry ({i}, {j}) of "{key}" must be a [re, im] pair of numbers')
            out[i, j] = complex(float(z[0]), float(z[1]))
    if not np.all(np.isfinite(out)):
        raise error(f'"{key}" contains non-finite values')
    return out


def array_to_entries(H):
    H = np.asarray(H, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in H]


def parse_matrix(text):
    doc = _load(text)
    n = _dimension(doc, ParseError)
    if "entries" not in doc:
        raise ParseError('missing field "entries"')
    return entries_to_array(doc["entries"], n)


def format_matrix(H):
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {H.shape}")
    return json.dumps({"n": int(H.shape[0]), "entries": array_to_entries(H)})


def read_matrix(path):
    with open(path, encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def write_matrix(path, H):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_matrix(H))
        fh.write("\n")


def parse_family(text):
    """``(H0, H1)`` of an affine family ``H(t) = H0 + t H1``."""
    doc = _load(text, FamilyParseError)
    n = _dimension(doc, FamilyParseError)
    for key in ("base", "direction"):
        if key not in doc:
            raise FamilyParseError(f'missing field "{key}"')
    return (
        entries_to_array(doc["base"], n, "base", FamilyParseError),
        entries_to_array(doc["direction"], n, "direction", FamilyParseError),
    )


def read_family(path):
    with open(path, encoding="utf-8") as fh:
        return parse_family(fh.read())
