"""
Undirected weighted graphs: construction, file loaders and Laplacian assembly.

Nodes are indexed from 0. Edges are stored canonically as ``(i, j, w)`` with
``i < j`` and sorted, so two graphs built from the same edge set compare
equal regardless of input order.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import GraphSlepianError, ParseError

PathLike = Union[str, Path]
Edge = Tuple[int, int, float]


class LaplacianKind(enum.Enum):
    COMBINATORIAL = "comb"
    NORMALIZED = "norm"

    @classmethod
    def parse(cls, value: Union[str, "LaplacianKind"]) -> "LaplacianKind":
        if isinstance(value, cls):
            return value
        aliases = {
            "comb": cls.COMBINATORIAL,
            "combinatorial": cls.COMBINATORIAL,
            "norm": cls.NORMALIZED,
            "normalized": cls.NORMALIZED,
        }
        try:
            return aliases[str(value).lower()]
        except KeyError:
            raise GraphSlepianError(
                f"unknown Laplacian kind {value!r} (expected comb or norm)"
            ) from None


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with strictly positive edge weights.

    Use :meth:`from_edges` to build one from arbitrary (unordered) input;
    the raw constructor expects edges that are already canonical and
    re-validates them.
    """

    n_nodes: int
    edges: Tuple[Edge, ...]

    def __post_init__(self):
        if not isinstance(self.n_nodes, (int, np.integer)) or self.n_nodes < 1:
            raise GraphSlepianError(f"n_nodes must be a positive integer, got {self.n_nodes!r}")
        object.__setattr__(self, "n_nodes", int(self.n_nodes))
        object.__setattr__(self, "edges", _canonical_edges(self.n_nodes, self.edges))

    @classmethod
    def from_edges(cls, n_nodes: int, edges: Iterable[Sequence]) -> "Graph":
        """Build a graph from ``(i, j)`` or ``(i, j, w)`` tuples."""
        return cls(n_nodes, tuple(tuple(e) for e in edges))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> sp.csr_matrix:
        """Symmetric sparse adjacency matrix (CSR, float64)."""
        n = self.n_nodes
        if not self.edges:
            return sp.csr_matrix((n, n))
        e = np.asarray(self.edges, dtype=float)
        i = e[:, 0].astype(np.int64)
        j = e[:, 1].astype(np.int64)
        w = e[:, 2]
        rows = np.concatenate([i, j])
        cols = np.concatenate([j, i])
        vals = np.concatenate([w, w])
        a = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
        a.sort_indices()
        return a

    def degrees(self) -> np.ndarray:
        """Weighted degree ``d_i = sum_j A[i, j]``."""
        d = np.zeros(self.n_nodes)
        for i, j, w in self.edges:
            d[i] += w
            d[j] += w
        return d

    def neighbors(self, i: int) -> np.ndarray:
        a = self.adjacency
        return a.indices[a.indptr[i]:a.indptr[i + 1]].copy()


def _canonical_edges(n_nodes: int, edges: Iterable[Sequence]) -> Tuple[Edge, ...]:
    out = {}
    for raw in edges:
        if len(raw) == 2:
            i, j = raw
            w = 1.0
        elif len(raw) == 3:
            i, j, w = raw
        else:
            raise GraphSlepianError(f"edge must be (i, j) or (i, j, w), got {raw!r}")
        if int(i) != i or int(j) != j:
            raise GraphSlepianError(f"node indices must be integers: {raw!r}")
        i, j, w = int(i), int(j), float(w)
        if i == j:
            raise GraphSlepianError(f"self-loop at node {i}")
        if not (0 <= i < n_nodes and 0 <= j < n_nodes):
            raise GraphSlepianError(f"edge ({i}, {j}) has index outside [0, {n_nodes})")
        if not (w > 0 and math.isfinite(w)):
            raise GraphSlepianError(f"edge ({i}, {j}) has non-positive or non-finite weight {w}")
        key = (min(i, j), max(i, j))
        if key in out:
            raise GraphSlepianError(f"duplicate edge {key}")
        out[key] = w
    return tuple((i, j, out[(i, j)]) for i, j in sorted(out))


def load_edge_list(path: PathLike, n_nodes: Optional[int] = None) -> Graph:
    """Read a whitespace separated ``i j [w]`` edge list.

    Lines starting with ``#`` (and trailing ``#`` comments) are ignored.
    The node count is ``max index + 1`` unless `n_nodes` is given.
    """
    path = Path(path)
    edges = []
    seen = {}
    max_index = -1
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = body.split()
            if len(parts) not in (2, 3):
                raise ParseError(f"expected 'i j [w]', got {body!r}", path, lineno)
            try:
                i, j = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError:
                raise ParseError(f"cannot parse {body!r}", path, lineno) from None
            if i < 0 or j < 0:
                raise ParseError(f"negative node index in {body!r}", path, lineno)
            if i == j:
                raise ParseError(f"self-loop at node {i}", path, lineno)
            if not (w > 0 and math.isfinite(w)):
                raise ParseError(f"non-positive weight {w}", path, lineno)
            if n_nodes is not None and max(i, j) >= n_nodes:
                raise ParseError(f"node index {max(i, j)} >= n_nodes {n_nodes}", path, lineno)
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ParseError(
                    f"duplicate edge {key} (first seen on line {seen[key]})", path, lineno
                )
            seen[key] = lineno
            max_index = max(max_index, i, j)
            edges.append((i, j, w))
    if n_nodes is None:
        if max_index < 0:
            raise ParseError("edge list is empty; pass n_nodes explicitly", path)
        n_nodes = max_index + 1
    return Graph.from_edges(n_nodes, edges)


def read_off(path: PathLike) -> Tuple[np.ndarray, np.ndarray]:
    """Parse an ASCII OFF triangle mesh into ``(vertices, faces)`` arrays."""
    path = Path(path)
    with open(path, encoding="utf-8") as fh:
        lines = [
            (n, ln.split("#", 1)[0].strip()) for n, ln in enumerate(fh, start=1)
        ]
    lines = [(n, ln) for n, ln in lines if ln]
    if not lines:
        raise ParseError("empty file", path)

    pos = 0
    lineno, header = lines[pos]
    tokens = header.split()
    if tokens[0] != "OFF":
        raise ParseError(f"missing OFF header, got {header!r}", path, lineno)
    counts = tokens[1:]
    pos += 1
    if not counts:
        if pos >= len(lines):
            raise ParseError("missing counts line", path)
        lineno, counts_line = lines[pos]
        counts = counts_line.split()
        pos += 1
    try:
        n_vertices, n_faces = int(counts[0]), int(counts[1])
    except (ValueError, IndexError):
        raise ParseError(f"bad counts line {' '.join(counts)!r}", path, lineno) from None
    if n_vertices < 1 or n_faces < 0:
        raise ParseError("vertex count must be positive and face count non-negative", path, lineno)
    if len(lines) < pos + n_vertices + n_faces:
        raise ParseError(
            f"expected {n_vertices} vertices and {n_faces} faces, file is truncated", path
        )

    vertices = np.empty((n_vertices, 3))
    for k in range(n_vertices):
        lineno, ln = lines[pos + k]
        parts = ln.split()
        try:
            vertices[k] = [float(x) for x in parts[:3]]
        except ValueError:
            raise ParseError(f"bad vertex line {ln!r}", path, lineno) from None
        if len(parts) < 3:
            raise ParseError(f"vertex needs 3 coordinates, got {ln!r}", path, lineno)
    pos += n_vertices

    faces = np.empty((n_faces, 3), dtype=np.int64)
    for k in range(n_faces):
        lineno, ln = lines[pos + k]
        parts = ln.split()
        try:
            nv = int(parts[0])
            idx = [int(x) for x in parts[1:1 + nv]]
        except ValueError:
            raise ParseError(f"bad face line {ln!r}", path, lineno) from None
        if nv != 3 or len(idx) != 3:
            raise ParseError(f"only triangle faces are supported, got {ln!r}", path, lineno)
        for v in idx:
            if not 0 <= v < n_vertices:
                raise ParseError(f"face index {v} out of range [0, {n_vertices})", path, lineno)
        faces[k] = idx
    return vertices, faces


def mesh_graph(n_vertices: int, faces: np.ndarray) -> Graph:
    """Unit-weight graph with one edge per unique triangle side."""
    faces = np.asarray(faces, dtype=np.int64).reshape(-1, 3)
    sides = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    sides.sort(axis=1)
    if np.any(sides[:, 0] == sides[:, 1]):
        raise GraphSlepianError("degenerate face with a repeated vertex")
    unique = np.unique(sides, axis=0)
    return Graph.from_edges(n_vertices, ((int(i), int(j), 1.0) for i, j in unique))


def load_mesh_off(path: PathLike) -> Graph:
    vertices, faces = read_off(path)
    try:
        return mesh_graph(len(vertices), faces)
    except GraphSlepianError as exc:
        raise ParseError(str(exc), Path(path)) from None


def check_connected(g: Graph) -> bool:
    """True iff the graph has exactly one connected component."""
    if g.n_nodes == 1:
        return True
    n_comp, _ = connected_components(g.adjacency, directed=False)
    return n_comp == 1


def laplacian(g: Graph, kind: Union[LaplacianKind, str] = LaplacianKind.NORMALIZED,
              sparse: bool = False):
    """Assemble the combinatorial ``D - A`` or normalized
    ``D^{-1/2} (D - A) D^{-1/2}`` Laplacian.

    Off-diagonal entries are computed once per edge and mirrored, so the
    result is exactly symmetric.

    Parameters
    ----------
    g : Graph
    kind : LaplacianKind or {"comb", "norm"}
    sparse : bool
        Return a ``scipy.sparse.csr_matrix`` instead of a dense array.

    Raises
    ------
    GraphSlepianError
        If `kind` is normalized and some node has zero degree.
    """
    kind = LaplacianKind.parse(kind)
    n = g.n_nodes
    d = g.degrees()
    if g.edges:
        e = np.asarray(g.edges, dtype=float)
        i = e[:, 0].astype(np.int64)
        j = e[:, 1].astype(np.int64)
        w = e[:, 2]
    else:
        i = j = np.zeros(0, dtype=np.int64)
        w = np.zeros(0)

    if kind is LaplacianKind.COMBINATORIAL:
        diag = d
        off = -w
    else:
        isolated = np.flatnonzero(d <= 0)
        if isolated.size:
            raise GraphSlepianError(
                f"normalized Laplacian undefined: node {int(isolated[0])} is isolated"
            )
        s = 1.0 / np.sqrt(d)
        diag = np.ones(n)
        off = -w * s[i] * s[j]

    rows = np.concatenate([np.arange(n), i, j])
    cols = np.concatenate([np.arange(n), j, i])
    vals = np.concatenate([diag, off, off])
    m = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
    m.sort_indices()
    return m if sparse else m.toarray()
