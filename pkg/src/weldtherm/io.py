"""CSV writing and reading with shortest round-trip number formatting."""
from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = ["format_number", "write_csv", "read_csv"]


def format_number(x) -> str:
    """Shortest decimal string that parses back to the same double; strings pass through."""
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


def write_csv(path, header: Sequence[str], columns: Sequence[Iterable], comments: Sequence[str] = ()) -> Path:
    """Write equal-length columns under ``header``; ``comments`` become leading ``# `` lines."""
    path = Path(path)
    cols = [list(c) for c in columns]
    if len(cols) != len(header) or len({len(c) for c in cols}) > 1:
        raise ValueError("columns must match the header and share one length")
    lines = [f"# {c}" for c in comments]
    lines.append(",".join(header))
    lines += [",".join(format_number(v) for v in row) for row in zip(*cols)]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


def read_csv(path):
    """Return ``(comments, header, data)``.

    ``data`` is a float array with one column per header entry, or the raw
    string rows when some field is not numeric.
    """
    comments, header, rows = [], None, []
    with open(Path(path), encoding="ascii", newline="") as fh:
        for line in fh.read().split("\n"):
            if not line:
                continue
            if line.startswith("#"):
                comments.append(line[1:].strip())
            elif header is None:
                header = line.split(",")
            else:
                rows.append(line.split(","))
    if header is None:
        raise ValueError(f"{path}: no header row")
    try:
        data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    except ValueError:
        data = rows
    return comments, header, data
