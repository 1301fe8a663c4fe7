"""
Spectral windows and filtering through the Laplacian or a Slepian basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Tuple

import numpy as np

from .errors import GraphSlepianError, ParseError
from .slepian import Design, SlepianBasis
from .spectral import LaplacianSpectrum


class SpectralWindow:
    """A gain function ``h(x)`` evaluated elementwise on a spectrum."""

    def __call__(self, x) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class HeatKernel(SpectralWindow):
    t: float

    def __post_init__(self):
        if not (self.t > 0 and math.isfinite(self.t)):
            raise GraphSlepianError(f"heat kernel time must be positive, got {self.t}")

    def __call__(self, x):
        return np.exp(-self.t * np.asarray(x, dtype=float))


@dataclass(frozen=True)
class IdealLowPass(SpectralWindow):
    cutoff: float

    def __call__(self, x):
        return (np.asarray(x, dtype=float) <= self.cutoff).astype(float)


@dataclass(frozen=True)
class TableWindow(SpectralWindow):
    """Piecewise-linear through ``(value, gain)`` knots, constant beyond the ends."""

    values: Tuple[float, ...]
    gains: Tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.gains) or not self.values:
            raise GraphSlepianError("table window needs matching, non-empty value and gain lists")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise GraphSlepianError("table window values must be strictly increasing")

    def __call__(self, x):
        return np.interp(np.asarray(x, dtype=float), self.values, self.gains)


def load_table_window(path) -> TableWindow:
    """Read ``value,gain`` rows; ``#`` comments and a non-numeric header are skipped."""
    path = Path(path)
    values, gains = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            body = line.split("#", 1)[0].strip()
            if not body:
                continue
            parts = [p.strip() for p in body.replace(",", " ").split()]
            try:
                v, g = float(parts[0]), float(parts[1])
            except (ValueError, IndexError):
                if not values and not gains:
                    continue  # header row
                raise ParseError(f"expected 'value,gain', got {body!r}", path, lineno) from None
            values.append(v)
            gains.append(g)
    if not values:
        raise ParseError("table window file has no rows", path)
    try:
        return TableWindow(tuple(values), tuple(gains))
    except GraphSlepianError as exc:
        raise ParseError(str(exc), path) from None


def parse_window(text: str) -> SpectralWindow:
    """``heat:<t>``, ``lowpass:<cutoff>`` or ``table:<path>``."""
    kind, sep, arg = text.partition(":")
    if not sep or not arg:
        raise GraphSlepianError(f"bad window spec {text!r}; use heat:<t>, lowpass:<c> or table:<path>")
    kind = kind.strip().lower()
    if kind == "table":
        return load_table_window(arg)
    try:
        x = float(arg)
    except ValueError:
        raise GraphSlepianError(f"bad number in window spec {text!r}") from None
    if kind == "heat":
        return HeatKernel(x)
    if kind == "lowpass":
        return IdealLowPass(x)
    raise GraphSlepianError(f"unknown window kind {kind!r}")


def _check_signal(f, n):
    f = np.asarray(f, dtype=float)
    if f.ndim != 1 or f.shape[0] != n:
        raise GraphSlepianError(f"signal length {f.shape} does not match {n} nodes")
    return f


def filter_laplacian(spec: LaplacianSpectrum, window: SpectralWindow, f,
                     passthrough: bool = False) -> np.ndarray:
    """``U h(Lam) U^T f`` over the computed eigenpairs.

    With ``passthrough=True`` the part of `f` outside the computed band,
    ``f - U U^T f``, is added back unfiltered; otherwise it is dropped.
    """
    f = _check_signal(f, spec.n_nodes)
    u = spec.eigenvectors
    coeffs = u.T @ f
    out = u @ (window(spec.eigenvalues) * coeffs)
    if passthrough:
        out = out + (f - u @ coeffs)
    return out


def filter_slepian(basis: SlepianBasis, window: SpectralWindow, f,
                   allow_concentration: bool = False,
                   passthrough: bool = False) -> np.ndarray:
    """``sum_k h(value_k) s_k (s_k^T f)`` within the Slepian subspace.

    The window is applied to the basis eigenvalues, which are frequencies
    (``xi``) for the embedding design. Filtering a concentration basis
    treats ``mu`` as the abscissa and must be requested with
    `allow_concentration`. `passthrough` adds back the part of `f`
    orthogonal to the basis, as in :func:`filter_laplacian`.
    """
    if basis.design is Design.CONCENTRATION and not allow_concentration:
        raise GraphSlepianError(
            "concentration basis uses mu as the window abscissa; pass allow_concentration=True"
        )
    f = _check_signal(f, basis.vectors.shape[0])
    s = basis.vectors
    coeffs = s.T @ f
    out = s @ (window(basis.values) * coeffs)
    if passthrough:
        out = out + (f - s @ coeffs)
    return out


def synth_eigvec_signal(spec: LaplacianSpectrum, index: int, cycles: int) -> np.ndarray:
    """Sine of the k-th eigenvector (1-based `index`) rescaled so its range
    spans `cycles` full periods."""
    if int(index) != index or not 1 <= index <= spec.m_computed:
        raise GraphSlepianError(f"eigenvector index {index} must be in [1, {spec.m_computed}]")
    if int(cycles) != cycles or cycles < 0:
        raise GraphSlepianError(f"cycles must be a non-negative integer, got {cycles}")
    v = spec.eigenvectors[:, int(index) - 1]
    lo, hi = float(v.min()), float(v.max())
    if hi - lo <= 1e-12 * max(1.0, abs(hi)):
        raise GraphSlepianError(f"eigenvector {index} is constant; no phase to map")
    return np.sin(2 * np.pi * cycles * (v - lo) / (hi - lo))
