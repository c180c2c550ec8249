"""Matrix Market reader and writer for dense complex matrices.

Supported headers are ``matrix {array,coordinate} {complex,real} general``.
Array data is column-major and coordinate indices are 1-based, as the format
prescribes.  Values are written with 17 significant digits so a write/read
round trip is lossless.
"""

from __future__ import annotations

import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import DuplicateEntry, ParseError, UnsupportedHeader

BANNER = "%%matrixmarket"


def _num(tok: str, lineno: int) -> float:
    try:
        val = float(tok)
    except ValueError:
        raise ParseError(f"bad number {tok!r}", lineno) from None
    if not np.isfinite(val):
        raise ParseError(f"non-finite value {tok!r}", lineno)
    return val


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"bad integer {tok!r}", lineno) from None


def parse_header(line: str):
    parts = line.strip().split()
    if not parts or parts[0].lower() != BANNER:
        raise ParseError("missing %%MatrixMarket banner", 1)
    if len(parts) != 5:
        raise UnsupportedHeader(f"expected 5 header fields, got {len(parts)}", 1)
    obj, fmt, field, sym = (p.lower() for p in parts[1:])
    if obj != "matrix":
        raise UnsupportedHeader(f"object {obj!r} is not supported", 1)
    if fmt not in ("array", "coordinate"):
        raise UnsupportedHeader(f"format {fmt!r} is not supported", 1)
    if field not in ("complex", "real"):
        raise UnsupportedHeader(f"field {field!r} is not supported", 1)
    if sym != "general":
        raise UnsupportedHeader(f"symmetry {sym!r} is not supported", 1)
    return fmt, field


def parse_matrix_market_text(text: str) -> np.ndarray:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    fmt, field = parse_header(lines[0])
    width = 2 if field == "complex" else 1

    body = ((i + 1, ln.split()) for i, ln in enumerate(lines) if i > 0)
    body = ((no, toks) for no, toks in body if toks and not toks[0].startswith("%"))

    try:
        size_no, size = next(body)
    except StopIteration:
        raise ParseError("missing size line", len(lines)) from None

    if fmt == "array":
        if len(size) != 2:
            raise ParseError("array size line needs 'rows cols'", size_no)
        rows, cols = (_int(t, size_no) for t in size)
        if rows < 1 or cols < 1:
            raise ParseError("dimensions must be positive", size_no)
        flat = np.empty(rows * cols, dtype=np.complex128)
        count = 0
        for no, toks in body:
            if len(toks) != width:
                raise ParseError(f"expected {width} value(s), got {len(toks)}", no)
            if count >= flat.size:
                raise ParseError("more entries than rows*cols", no)
            re = _num(toks[0], no)
            im = _num(toks[1], no) if width == 2 else 0.0
            flat[count] = complex(re, im)
            count += 1
        if count != flat.size:
            raise ParseError(f"expected {flat.size} entries, found {count}", len(lines))
        return flat.reshape((cols, rows)).T.copy()

    if len(size) != 3:
        raise ParseError("coordinate size line needs 'rows cols entries'", size_no)
    rows, cols, nnz = (_int(t, size_no) for t in size)
    if rows < 1 or cols < 1 or nnz < 0:
        raise ParseError("dimensions must be positive", size_no)
    out = np.zeros((rows, cols), dtype=np.complex128)
    seen = set()
    for no, toks in body:
        if len(toks) != 2 + width:
            raise ParseError(f"expected {2 + width} fields, got {len(toks)}", no)
        if len(seen) >= nnz:
            raise ParseError("more entries than declared", no)
        i, j = _int(toks[0], no), _int(toks[1], no)
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ParseError(f"index ({i}, {j}) out of range", no)
        if (i, j) in seen:
            raise DuplicateEntry(f"duplicate entry ({i}, {j})", no)
        seen.add((i, j))
        re = _num(toks[2], no)
        im = _num(toks[3], no) if width == 2 else 0.0
        out[i - 1, j - 1] = complex(re, im)
    if len(seen) != nnz:
        raise ParseError(f"expected {nnz} entries, found {len(seen)}", len(lines))
    return out


def parse_matrix_market(path) -> np.ndarray:
    return parse_matrix_market_text(Path(path).read_text())


def format_matrix_market(a, fmt: str = "array", comment: str | None = None) -> str:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError("need a 2-D matrix")
    lines = [f"%%MatrixMarket matrix {fmt} complex general"]
    if comment:
        lines.extend("% " + c for c in comment.splitlines())
    rows, cols = a.shape
    if fmt == "array":
        lines.append(f"{rows} {cols}")
        for z in a.T.ravel():
            lines.append(f"{z.real:.16e} {z.imag:.16e}")
    elif fmt == "coordinate":
        col_idx, row_idx = np.nonzero(a.T)
        lines.append(f"{rows} {cols} {col_idx.size}")
        for j, i in zip(col_idx, row_idx):
            z = a[i, j]
            lines.append(f"{i + 1} {j + 1} {z.real:.16e} {z.imag:.16e}")
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return "\n".join(lines) + "\n"


def atomic_write(path, text: str) -> None:
    """Write ``text`` to a temporary file beside ``path`` and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_matrix_market(path, a, fmt: str = "array", comment: str | None = None) -> None:
    atomic_write(path, format_matrix_market(a, fmt, comment))
