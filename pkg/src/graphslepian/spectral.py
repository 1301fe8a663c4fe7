"""
Laplacian eigendecomposition and the graph Fourier transform.

Eigenpairs are returned in ascending eigenvalue order with a fixed sign
convention (the largest-magnitude entry of every eigenvector is positive),
so repeated runs on the same input give identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, DisconnectedGraphError, GraphSlepianError
from .graph import Graph, LaplacianKind, check_connected, laplacian

# above this size (and for m well below N) the sparse Lanczos route is used
DENSE_LIMIT = 3000
_ZERO_TOL = 1e-8
_RESIDUAL_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class LaplacianSpectrum:
    """The ``m_computed`` smallest eigenpairs of a graph Laplacian.

    Attributes
    ----------
    eigenvalues : ndarray, shape (M,)
        Ascending.
    eigenvectors : ndarray, shape (N, M)
        Orthonormal columns, sign-normalized.
    kind : LaplacianKind
    matrix : scipy.sparse.csr_matrix
        The Laplacian the pairs were computed from.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    kind: LaplacianKind
    matrix: sp.csr_matrix

    def __post_init__(self):
        for arr in (self.eigenvalues, self.eigenvectors):
            arr.setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return self.eigenvectors.shape[0]

    @property
    def m_computed(self) -> int:
        return self.eigenvectors.shape[1]

    def band(self, n_w: int) -> np.ndarray:
        """The first `n_w` eigenvectors, i.e. ``U W``."""
        check_band(self, n_w)
        return self.eigenvectors[:, :n_w]

    def zero_tolerance(self) -> float:
        return _ZERO_TOL * max(1.0, float(self.eigenvalues[-1]))


def check_band(spec: LaplacianSpectrum, n_w: int) -> int:
    if int(n_w) != n_w or not 1 <= n_w <= spec.m_computed:
        raise GraphSlepianError(
            f"bandwidth {n_w} must be an integer in [1, {spec.m_computed}] "
            f"(the number of computed eigenpairs)"
        )
    return int(n_w)


def normalize_signs(vectors: np.ndarray, rtol: float = 1e-12) -> np.ndarray:
    """Flip columns so that each one's largest-magnitude entry is positive.

    Entries within `rtol` (relative) of the column maximum count as tied;
    the smallest such index decides.
    """
    v = np.array(vectors, dtype=float, copy=True)
    if v.ndim == 1:
        return normalize_signs(v[:, None], rtol)[:, 0]
    mag = np.abs(v)
    peak = mag.max(axis=0, initial=0.0)
    for k in range(v.shape[1]):
        if peak[k] == 0:
            continue
        pivot = np.flatnonzero(mag[:, k] >= peak[k] * (1 - rtol))[0]
        if v[pivot, k] < 0:
            v[:, k] = -v[:, k]
    return v


def eig_laplacian(
    g: Graph,
    kind: Union[LaplacianKind, str] = LaplacianKind.NORMALIZED,
    m: int | None = None,
    solver: str = "auto",
) -> LaplacianSpectrum:
    """Compute the `m` smallest Laplacian eigenpairs of a connected graph.

    Parameters
    ----------
    g : Graph
    kind : LaplacianKind or str
    m : int, optional
        Number of eigenpairs; defaults to all ``N``.
    solver : {"auto", "dense", "sparse"}
        ``"dense"`` uses LAPACK ``syevr`` restricted to the wanted index
        range; ``"sparse"`` uses ARPACK in shift-invert mode with a fixed
        start vector. ``"auto"`` picks dense unless the graph is large and
        only a small part of the spectrum is requested.

    Raises
    ------
    DisconnectedGraphError
    ConvergenceError
        If the solver fails or a residual check does not pass.
    """
    kind = LaplacianKind.parse(kind)
    n = g.n_nodes
    if m is None:
        m = n
    if int(m) != m or not 1 <= m <= n:
        raise GraphSlepianError(f"number of eigenpairs m={m} must be in [1, {n}]")
    m = int(m)
    if not check_connected(g):
        raise DisconnectedGraphError("graph not connected")

    lap = laplacian(g, kind, sparse=True)
    if solver == "auto":
        solver = "sparse" if (n > DENSE_LIMIT and m < n // 4) else "dense"
    if solver == "dense":
        vals, vecs = _dense_eig(lap, m)
    elif solver == "sparse":
        vals, vecs = _sparse_eig(lap, m)
    else:
        raise GraphSlepianError(f"unknown solver {solver!r}")

    order = np.argsort(vals, kind="stable")
    vals = vals[order]
    vecs = normalize_signs(vecs[:, order])
    _verify(lap, vals, vecs)
    # a connected graph has a simple, exactly zero, first eigenvalue
    if abs(vals[0]) < _ZERO_TOL * max(1.0, float(vals[-1])):
        vals[0] = 0.0
    return LaplacianSpectrum(vals, vecs, kind, lap)


def _dense_eig(lap: sp.csr_matrix, m: int):
    dense = lap.toarray()
    try:
        return scipy.linalg.eigh(dense, subset_by_index=[0, m - 1], driver="evr")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise ConvergenceError(f"dense eigensolver failed: {exc}") from exc


def _sparse_eig(lap: sp.csr_matrix, m: int):
    n = lap.shape[0]
    v0 = np.random.default_rng(0).standard_normal(n)
    # L is singular; shift slightly below zero so the factorization exists
    sigma = -1e-3 * max(1.0, abs(lap.diagonal()).max())
    try:
        vals, vecs = spla.eigsh(
            lap.tocsc(), k=m, sigma=sigma, which="LM", v0=v0, tol=0,
            maxiter=max(1000, 20 * m),
        )
    except spla.ArpackError as exc:
        raise ConvergenceError(f"ARPACK failed: {exc}") from exc
    # re-orthonormalize against ARPACK's loss of orthogonality in clusters
    q, r = np.linalg.qr(vecs)
    q *= np.sign(np.diag(r))
    ritz = q.T @ (lap @ q)
    ritz = 0.5 * (ritz + ritz.T)
    rv, rw = np.linalg.eigh(ritz)
    return rv, q @ rw


def _verify(lap, vals, vecs):
    scale = max(1.0, float(np.abs(vals).max()))
    resid = np.linalg.norm(lap @ vecs - vecs * vals, axis=0)
    worst = float(resid.max())
    if worst > _RESIDUAL_TOL * scale:
        raise ConvergenceError(f"eigenpair residual {worst:.3e} exceeds tolerance")
    gram = vecs.T @ vecs
    np.fill_diagonal(gram, gram.diagonal() - 1.0)
    if np.abs(gram).max() > 1e-8:
        raise ConvergenceError("computed eigenvectors are not orthonormal")


def gft_forward(spec: LaplacianSpectrum, f) -> np.ndarray:
    """Graph Fourier coefficients ``U^T f`` over the computed eigenvectors."""
    f = np.asarray(f, dtype=float)
    if f.shape[0] != spec.n_nodes:
        raise GraphSlepianError(f"signal length {f.shape[0]} != number of nodes {spec.n_nodes}")
    return spec.eigenvectors.T @ f


def gft_inverse(spec: LaplacianSpectrum, coeffs) -> np.ndarray:
    """Synthesize ``U c`` from `coeffs` of length ``m_computed``."""
    c = np.asarray(coeffs, dtype=float)
    if c.shape[0] != spec.m_computed:
        raise GraphSlepianError(
            f"coefficient length {c.shape[0]} != computed eigenpairs {spec.m_computed}"
        )
    return spec.eigenvectors @ c


def fiedler_vector(spec: LaplacianSpectrum) -> np.ndarray:
    """Eigenvector of the smallest non-zero eigenvalue."""
    if spec.m_computed < 2:
        raise GraphSlepianError("need at least 2 computed eigenpairs for the Fiedler vector")
    nonzero = np.flatnonzero(spec.eigenvalues >= spec.zero_tolerance())
    if nonzero.size == 0:
        raise GraphSlepianError("no non-zero eigenvalue among the computed eigenpairs")
    return spec.eigenvectors[:, nonzero[0]].copy()
