"""
Slepian bases on graphs.

Two designs share the same band-limited setting ``g = U_W c`` where ``U_W``
holds the ``n_w`` lowest-frequency Laplacian eigenvectors:

* concentration: maximize the energy fraction inside a node subset,
  i.e. the eigenvectors of ``C = U_W^T S U_W`` sorted by decreasing ``mu``;
* embedding: eigenvectors of ``C_emb = Lam^{1/2} C Lam^{1/2}``, whose
  eigenvalues ``xi`` act as frequencies localized on the subset, sorted
  ascending.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple, Union

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, GraphSlepianError, ParseError
from .spectral import LaplacianSpectrum, check_band, normalize_signs


class Design(enum.Enum):
    CONCENTRATION = "concentration"
    EMBEDDING = "embedding"

    @classmethod
    def parse(cls, value) -> "Design":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise GraphSlepianError(
                f"unknown design {value!r} (expected concentration or embedding)"
            ) from None


@dataclass(frozen=True)
class NodeSubset:
    """Sorted, duplicate-free set of node indices inside ``[0, n_nodes)``."""

    indices: Tuple[int, ...]
    n_nodes: int

    def __post_init__(self):
        idx = [int(i) for i in self.indices]
        if not idx:
            raise GraphSlepianError("node subset is empty")
        if len(set(idx)) != len(idx):
            dup = sorted(i for i in set(idx) if idx.count(i) > 1)
            raise GraphSlepianError(f"duplicate node indices in subset: {dup[:5]}")
        bad = [i for i in idx if not 0 <= i < self.n_nodes]
        if bad:
            raise GraphSlepianError(f"subset index {bad[0]} outside [0, {self.n_nodes})")
        object.__setattr__(self, "indices", tuple(sorted(idx)))

    @classmethod
    def all_nodes(cls, n_nodes: int) -> "NodeSubset":
        return cls(tuple(range(n_nodes)), n_nodes)

    @property
    def n_s(self) -> int:
        return len(self.indices)

    def selector(self) -> np.ndarray:
        """Diagonal of the 0/1 selection matrix."""
        s = np.zeros(self.n_nodes)
        s[list(self.indices)] = 1.0
        return s

    def index_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.int64)


def load_subset(path: Union[str, Path], n_nodes: int) -> NodeSubset:
    """One node index per line; ``#`` starts a comment. Duplicates are an error."""
    path = Path(path)
    idx = []
    first_seen = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            try:
                i = int(body)
            except ValueError:
                raise ParseError(f"expected a node index, got {body!r}", path, lineno) from None
            if not 0 <= i < n_nodes:
                raise ParseError(f"node {i} outside [0, {n_nodes})", path, lineno)
            if i in first_seen:
                raise ParseError(
                    f"duplicate node {i} (first on line {first_seen[i]})", path, lineno
                )
            first_seen[i] = lineno
            idx.append(i)
    if not idx:
        raise ParseError("subset file lists no nodes", path)
    return NodeSubset(tuple(idx), n_nodes)


@dataclass(frozen=True, eq=False)
class ConcentrationMatrix:
    """Band-limited concentration matrix together with what it was built from."""

    entries: np.ndarray
    design: Design
    spectrum: LaplacianSpectrum
    subset: NodeSubset
    n_w: int


@dataclass(frozen=True, eq=False)
class SlepianBasis:
    """
    Attributes
    ----------
    vectors : ndarray, shape (N, n_w)
        Node-domain Slepian vectors ``U_W c_k``.
    coefficients : ndarray, shape (n_w, n_w)
        Spectral coefficients ``c_k`` as columns.
    values : ndarray, shape (n_w,)
        ``mu`` (descending) or ``xi`` (ascending) depending on `design`.
    cross_metrics : ndarray, shape (n_w, 3)
        Per vector: Laplacian quadratic form, in-subset energy, and the
        ``C_emb`` quadratic form.
    """

    vectors: np.ndarray
    coefficients: np.ndarray
    values: np.ndarray
    cross_metrics: np.ndarray
    design: Design
    subset: NodeSubset
    n_w: int

    @property
    def lambda_metric(self) -> np.ndarray:
        return self.cross_metrics[:, 0]

    @property
    def mu_metric(self) -> np.ndarray:
        return self.cross_metrics[:, 1]

    @property
    def xi_metric(self) -> np.ndarray:
        return self.cross_metrics[:, 2]

    def order(self, direction: str) -> np.ndarray:
        """Permutation presenting `values` ascending (``"asc"``) or descending."""
        if direction == "asc":
            return np.argsort(self.values, kind="stable")
        if direction == "desc":
            return np.argsort(-self.values, kind="stable")
        raise GraphSlepianError(f"order must be 'asc' or 'desc', got {direction!r}")


def shannon_number(n_w: int, n_s: int, n: int) -> float:
    """Time-bandwidth product ``n_w * n_s / n``."""
    for name, v in (("n_w", n_w), ("n_s", n_s), ("n", n)):
        if v <= 0:
            raise GraphSlepianError(f"{name} must be positive, got {v}")
    if n_s > n or n_w > n:
        raise GraphSlepianError("n_s and n_w cannot exceed n")
    return n_w * n_s / n


def _check_inputs(spec: LaplacianSpectrum, n_w: int, subset: NodeSubset) -> int:
    n_w = check_band(spec, n_w)
    if subset.n_nodes != spec.n_nodes:
        raise GraphSlepianError(
            f"subset is for {subset.n_nodes} nodes, spectrum has {spec.n_nodes}"
        )
    return n_w


def concentration_matrix(spec: LaplacianSpectrum, n_w: int,
                         subset: NodeSubset) -> ConcentrationMatrix:
    """``C[a, b] = sum_{i in subset} U[i, a] U[i, b]`` for ``a, b < n_w``."""
    n_w = _check_inputs(spec, n_w, subset)
    rows = spec.eigenvectors[subset.index_array(), :n_w]
    c = rows.T @ rows
    c = 0.5 * (c + c.T)
    return ConcentrationMatrix(c, Design.CONCENTRATION, spec, subset, n_w)


def embedding_weights(spec: LaplacianSpectrum, n_w: int) -> np.ndarray:
    """Square roots of the first `n_w` eigenvalues, negative roundoff clamped."""
    return np.sqrt(np.clip(spec.eigenvalues[:n_w], 0.0, None))


def embedding_concentration_matrix(spec: LaplacianSpectrum, n_w: int,
                                   subset: NodeSubset) -> ConcentrationMatrix:
    """``C_emb[a, b] = sqrt(lam_a lam_b) C[a, b]``."""
    base = concentration_matrix(spec, n_w, subset)
    r = embedding_weights(spec, base.n_w)
    c = r[:, None] * base.entries * r[None, :]
    return ConcentrationMatrix(c, Design.EMBEDDING, spec, subset, base.n_w)


def _eigh(c: np.ndarray):
    try:
        return scipy.linalg.eigh(c)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigendecomposition of the concentration matrix failed: {exc}") from exc


def _synthesize(cm: ConcentrationMatrix, values, coeffs) -> SlepianBasis:
    u_w = cm.spectrum.eigenvectors[:, :cm.n_w]
    vectors = u_w @ coeffs
    signed = normalize_signs(vectors)
    flip = np.where(np.sum(signed * vectors, axis=0) < 0, -1.0, 1.0)
    coeffs = coeffs * flip
    vectors = signed
    metrics = _batch_metrics(cm.spectrum, cm.subset, cm.n_w, vectors, coeffs)
    for arr in (vectors, coeffs, values, metrics):
        arr.setflags(write=False)
    return SlepianBasis(vectors, coeffs, values, metrics, cm.design, cm.subset, cm.n_w)


def slepian_concentration(cm: ConcentrationMatrix) -> SlepianBasis:
    """Energy-concentration Slepians, ``mu`` descending."""
    if cm.design is not Design.CONCENTRATION:
        raise GraphSlepianError("slepian_concentration needs a concentration-design matrix")
    vals, vecs = _eigh(cm.entries)
    order = np.argsort(-vals, kind="stable")
    return _synthesize(cm, vals[order], vecs[:, order])


def slepian_embedding(cm: ConcentrationMatrix) -> SlepianBasis:
    """Modified-embedded-distance Slepians, ``xi`` ascending."""
    if cm.design is not Design.EMBEDDING:
        raise GraphSlepianError("slepian_embedding needs an embedding-design matrix")
    vals, vecs = _eigh(cm.entries)
    order = np.argsort(vals, kind="stable")
    return _synthesize(cm, vals[order], vecs[:, order])


def slepian_basis(spec: LaplacianSpectrum, n_w: int, subset: NodeSubset,
                  design: Union[Design, str] = Design.CONCENTRATION) -> SlepianBasis:
    """Convenience wrapper: build the matrix for `design` and decompose it."""
    design = Design.parse(design)
    if design is Design.CONCENTRATION:
        return slepian_concentration(concentration_matrix(spec, n_w, subset))
    return slepian_embedding(embedding_concentration_matrix(spec, n_w, subset))


def _batch_metrics(spec, subset, n_w, vectors, coeffs) -> np.ndarray:
    lam_metric = np.einsum("ik,ik->k", vectors, spec.matrix @ vectors)
    mu_metric = np.sum(vectors[subset.index_array()] ** 2, axis=0)
    c_emb = embedding_concentration_matrix(spec, n_w, subset).entries
    xi_metric = np.einsum("ak,ak->k", coeffs, c_emb @ coeffs)
    return np.column_stack([lam_metric, mu_metric, xi_metric])


def cross_metrics(spec: LaplacianSpectrum, subset: NodeSubset, g,
                  n_w: int | None = None) -> Tuple[float, float, float]:
    """Laplacian form ``g^T L g``, subset energy ``g^T S g`` and
    ``c^T C_emb c`` with ``c = U_W^T g``.

    `g` must have unit norm. `n_w` defaults to every computed eigenpair.
    """
    if n_w is None:
        n_w = spec.m_computed
    n_w = _check_inputs(spec, n_w, subset)
    g = np.asarray(g, dtype=float)
    if g.shape != (spec.n_nodes,):
        raise GraphSlepianError(f"vector must have shape ({spec.n_nodes},), got {g.shape}")
    norm = float(np.linalg.norm(g))
    if abs(norm - 1.0) > 1e-8:
        raise GraphSlepianError(f"vector must have unit norm, got {norm:.12g}")
    coeffs = spec.eigenvectors[:, :n_w].T @ g
    m = _batch_metrics(spec, subset, n_w, g[:, None], coeffs[:, None])[0]
    return float(m[0]), float(m[1]), float(m[2])


def laplacian_cross_metrics(spec: LaplacianSpectrum, subset: NodeSubset,
                            n_w: int | None = None) -> np.ndarray:
    """Cross metrics of the first `n_w` Laplacian eigenvectors themselves."""
    if n_w is None:
        n_w = spec.m_computed
    n_w = _check_inputs(spec, n_w, subset)
    vecs = spec.eigenvectors[:, :n_w]
    return _batch_metrics(spec, subset, n_w, vecs, np.eye(n_w))


def subset_gram_offdiagonal(basis: SlepianBasis) -> float:
    """Largest off-diagonal magnitude of ``V^T S V``.

    Zero (to roundoff) for the concentration design. For the embedding
    design there is no such guarantee, because ``C`` and ``C_emb`` need not
    commute; this reports how far the basis is from being orthogonal over
    the subset.
    """
    rows = basis.vectors[basis.subset.index_array()]
    gram = rows.T @ rows
    np.fill_diagonal(gram, 0.0)
    return float(np.abs(gram).max(initial=0.0))
