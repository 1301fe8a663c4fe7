"""Deterministic CSV writing with atomic replacement of the target file."""

from __future__ import annotations

import os
import tempfile
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError


def fmt(x) -> str:
    """17 significant digits; enough to round-trip any float64."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def render(header: Sequence[str] | None, rows: Iterable[Sequence], comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    if header is not None:
        lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def write_atomic(path, text: str) -> None:
    """Write `text` to a temp file next to `path`, then rename over it."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_signal(path, n_nodes: int) -> np.ndarray:
    """Read a ``node,value`` CSV (header optional) into a dense vector.

    Every node must appear exactly once.
    """
    path = Path(path)
    values = np.zeros(n_nodes)
    seen = np.zeros(n_nodes, dtype=bool)
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = [p.strip() for p in body.split(",")]
            if parts[:2] == ["node", "value"]:
                continue
            if len(parts) != 2:
                raise ParseError(f"expected 'node,value', got {body!r}", path, lineno)
            try:
                i, v = int(parts[0]), float(parts[1])
            except ValueError:
                raise ParseError(f"cannot parse {body!r}", path, lineno) from None
            if not 0 <= i < n_nodes:
                raise ParseError(f"node {i} outside [0, {n_nodes})", path, lineno)
            if seen[i]:
                raise ParseError(f"node {i} listed twice", path, lineno)
            seen[i] = True
            values[i] = v
    missing = np.flatnonzero(~seen)
    if missing.size:
        raise ParseError(
            f"signal length mismatch: {missing.size} of {n_nodes} nodes missing "
            f"(first: {int(missing[0])})", path
        )
    return values
