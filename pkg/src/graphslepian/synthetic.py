"""Small graph and mesh generators used for examples and tests."""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .graph import Graph, mesh_graph


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, combinations(range(n), 2))


def barbell_graph(k: int) -> Graph:
    """Two copies of K_k joined by a single edge between node k-1 and node k."""
    left = list(combinations(range(k), 2))
    right = [(i + k, j + k) for i, j in left]
    return Graph.from_edges(2 * k, left + right + [(k - 1, k)])


def random_connected_graph(n: int, rng: np.random.Generator, p: float = 0.2,
                           weights: tuple = (0.5, 2.0)) -> Graph:
    """Random spanning tree plus Erdos-Renyi extra edges, uniform weights."""
    edges = {}
    order = rng.permutation(n)
    for pos in range(1, n):
        a = int(order[pos])
        b = int(order[rng.integers(pos)])
        edges[(min(a, b), max(a, b))] = None
    for i, j in combinations(range(n), 2):
        if (i, j) not in edges and rng.random() < p:
            edges[(i, j)] = None
    lo, hi = weights
    return Graph.from_edges(n, ((i, j, float(rng.uniform(lo, hi))) for i, j in sorted(edges)))


def icosphere(subdivisions: int = 0):
    """Unit icosphere as ``(vertices, faces)``. V = 10 * 4**s + 2."""
    t = (1 + 5 ** 0.5) / 2
    verts = [
        (-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0),
        (0, -1, t), (0, 1, t), (0, -1, -t), (0, 1, -t),
        (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [np.asarray(v, dtype=float) / np.linalg.norm(v) for v in verts]
    for _ in range(subdivisions):
        midpoint = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in midpoint:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                midpoint[key] = len(verts) - 1
            return midpoint[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return np.array(verts), np.array(faces, dtype=np.int64)


def icosphere_graph(subdivisions: int = 0) -> Graph:
    verts, faces = icosphere(subdivisions)
    return mesh_graph(len(verts), faces)


def write_off(path, vertices, faces) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("OFF\n")
        fh.write(f"{len(vertices)} {len(faces)} 0\n")
        for v in vertices:
            fh.write(" ".join(repr(float(x)) for x in v) + "\n")
        for f in faces:
            fh.write("3 " + " ".join(str(int(i)) for i in f) + "\n")
