"""
Discrete 1-D Slepian sequences through the unitary DFT.

Column ``c`` (0-based) of the DFT matrix has angular frequency
``2 pi (c + 1 - ceil((N - 1) / 2)) / N``, which places ``omega = 0`` near the
middle of the matrix; the band keeps the columns of smallest ``|omega|``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np
import scipy.linalg

from .errors import ConvergenceError, GraphSlepianError
from .slepian import shannon_number


def frequency_index(n: int) -> np.ndarray:
    """Integer frequency of each DFT column, ``omega_c = 2 pi m_c / n``."""
    return np.arange(n) + 1 - math.ceil((n - 1) / 2)


def dft_matrix(n: int) -> np.ndarray:
    """Unitary ``n x n`` DFT with entries ``exp(1j omega_c k) / sqrt(n)``."""
    if int(n) != n or n < 2:
        raise GraphSlepianError(f"DFT length must be an integer >= 2, got {n}")
    n = int(n)
    m = frequency_index(n)
    k = np.arange(n)
    # reduce the integer phase modulo n before scaling to keep it accurate
    phase = np.outer(k, m) % n
    return np.exp(2j * np.pi * phase / n) / np.sqrt(n)


def band_indices(n: int, n_w: int) -> np.ndarray:
    """DFT columns of the `n_w` smallest ``|omega|``; at equal ``|omega|``
    the negative frequency comes first."""
    if int(n) != n or n < 1:
        raise GraphSlepianError(f"length must be a positive integer, got {n}")
    if int(n_w) != n_w or not 1 <= n_w <= n:
        raise GraphSlepianError(f"band count {n_w} must be in [1, {n}]")
    m = frequency_index(int(n))
    order = sorted(range(int(n)), key=lambda c: (abs(m[c]), m[c]))
    return np.asarray(order[:int(n_w)], dtype=np.int64)


@dataclass(frozen=True)
class DftDesign:
    n: int
    n_w: int
    interval: Tuple[int, ...]

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise GraphSlepianError(f"signal length must be >= 2, got {self.n}")
        if int(self.n_w) != self.n_w or not 1 <= self.n_w <= self.n:
            raise GraphSlepianError(f"band count {self.n_w} must be in [1, {self.n}]")
        idx = [int(i) for i in self.interval]
        if not idx:
            raise GraphSlepianError("interval is empty")
        if len(set(idx)) != len(idx):
            raise GraphSlepianError("interval has duplicate indices")
        if min(idx) < 0 or max(idx) >= self.n:
            raise GraphSlepianError(f"interval indices must lie in [0, {self.n})")
        object.__setattr__(self, "interval", tuple(sorted(idx)))

    @classmethod
    def centered(cls, n: int, n_s: int, center: int, n_w: int) -> "DftDesign":
        """Contiguous interval of length `n_s` around `center` (0-based).

        For even `n_s` the extra sample goes after the center.
        """
        if int(n_s) != n_s or n_s < 1:
            raise GraphSlepianError(f"interval length must be positive, got {n_s}")
        start = int(center) - (int(n_s) - 1) // 2
        stop = start + int(n_s)
        if start < 0 or stop > n:
            raise GraphSlepianError(
                f"interval [{start}, {stop - 1}] does not fit in a signal of length {n}"
            )
        return cls(n, n_w, tuple(range(start, stop)))

    @property
    def n_s(self) -> int:
        return len(self.interval)

    @property
    def shannon_number(self) -> float:
        return shannon_number(self.n_w, self.n_s, self.n)


@dataclass(frozen=True, eq=False)
class Slepian1dBasis:
    """Complex Slepian sequences (columns) and their concentrations."""

    vectors: np.ndarray
    coefficients: np.ndarray
    mu: np.ndarray
    design: DftDesign

    def imaginary_residue(self) -> float:
        return float(np.abs(self.vectors.imag).max(initial=0.0))

    def real_vectors(self, tol: float = 1e-8) -> np.ndarray:
        """Real parts, after checking the imaginary parts are below `tol`."""
        res = self.imaginary_residue()
        if res >= tol:
            raise GraphSlepianError(
                f"Slepian sequences are genuinely complex (imaginary residue {res:.3e})"
            )
        return self.vectors.real.copy()


def _fix_phase(vectors: np.ndarray) -> np.ndarray:
    out = vectors.copy()
    mag = np.abs(out)
    for k in range(out.shape[1]):
        peak = mag[:, k].max()
        if peak == 0:
            continue
        pivot = np.flatnonzero(mag[:, k] >= peak * (1 - 1e-12))[0]
        out[:, k] *= np.conj(out[pivot, k]) / mag[pivot, k]
    return out


def _real_band_transform(n: int, m: np.ndarray):
    """Unitary ``T`` with ``F_W T`` real, or None if the band is not closed
    under ``m -> -m`` (mod n)."""
    pos = {int(v) % n: i for i, v in enumerate(m)}
    if any((-int(v)) % n not in pos for v in m):
        return None
    t = np.zeros((len(m), len(m)), dtype=complex)
    col = 0
    done = set()
    r = 1 / np.sqrt(2)
    for i, v in enumerate(m):
        if i in done:
            continue
        j = pos[(-int(v)) % n]
        if j == i:
            t[i, col] = 1.0
            col += 1
        else:
            # cos and sin combinations of the +/- pair
            t[i, col], t[j, col] = r, r
            t[i, col + 1], t[j, col + 1] = -1j * r, 1j * r
            col += 2
        done.update((i, j))
    return t


def slepian_1d(design: DftDesign) -> Slepian1dBasis:
    """Concentration eigenproblem ``C = W^T F^H S F W``, ``mu`` descending.

    ``mu`` and the eigenvectors come from the SVD of the interval rows of
    ``F W`` (``C`` is their Gram matrix), so ``mu >= 0`` holds exactly. For a
    band closed under negation the problem is solved in a real cosine/sine
    basis, which keeps the sequences real even inside numerically
    degenerate clusters of tiny ``mu``. Each sequence gets a global phase
    that makes its largest-magnitude sample real and positive.
    """
    n, n_w = design.n, design.n_w
    cols = band_indices(n, n_w)
    fw = dft_matrix(n)[:, cols]
    t = _real_band_transform(n, frequency_index(n)[cols])
    basis = fw if t is None else (fw @ t).real
    rows = basis[np.asarray(design.interval)]
    try:
        _, sigma, vh = scipy.linalg.svd(rows, full_matrices=True)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"SVD of the concentration problem failed: {exc}") from exc
    mu = np.zeros(n_w)
    mu[:len(sigma)] = sigma ** 2
    order = np.argsort(-mu, kind="stable")
    mu = mu[order]
    local = vh.conj().T[:, order]
    seq = (basis @ local).astype(complex)
    vecs = local if t is None else t @ local
    fixed = _fix_phase(seq)
    # carry the same unit-modulus factor onto the coefficients
    ratio = np.sum(np.conj(seq) * fixed, axis=0)
    vecs = vecs * (ratio / np.abs(ratio))
    return Slepian1dBasis(fixed, vecs, mu, design)
