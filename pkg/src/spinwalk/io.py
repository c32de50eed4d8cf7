"""CSV output with a single JSON metadata line, written atomically."""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def format_csv(columns: dict, meta: dict) -> str:
    names = list(columns)
    arrays = [np.asarray(columns[k]) for k in names]
    n = len(arrays[0]) if arrays else 0
    if any(len(a) != n for a in arrays):
        raise ValueError("format_csv: columns differ in length")
    lines = ["# " + json.dumps(meta, sort_keys=True), ",".join(names)]
    for i in range(n):
        lines.append(",".join(_fmt(a[i]) for a in arrays))
    return "\n".join(lines) + "\n"


def atomic_write(path: str, text: str) -> None:
    """Write via a temporary file in the same directory and os.replace."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, columns: dict, meta: dict) -> None:
    atomic_write(path, format_csv(columns, meta))


def read_csv(path: str):
    """Return (meta, {column: float array})."""
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# "):
            raise ValueError(f"{path}: missing metadata line")
        meta = json.loads(first[2:])
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return meta, {name: data[:, i] for i, name in enumerate(header)}
