"""
Command-line interface.

Every command validates its inputs, computes everything in memory, and only
then writes its output files (each through a temp file and rename), so a
failed run leaves no partial output behind.

Exit codes: 0 success, 1 validation or computation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from . import csvio
from .classic1d import DftDesign, slepian_1d
from .errors import GraphSlepianError
from .filtering import filter_laplacian, filter_slepian, parse_window, synth_eigvec_signal
from .graph import Graph, LaplacianKind, load_edge_list, load_mesh_off
from .slepian import (
    Design,
    NodeSubset,
    laplacian_cross_metrics,
    load_subset,
    shannon_number,
    slepian_basis,
)
from .spectral import eig_laplacian

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class _UsageError(GraphSlepianError):
    pass


class _Parser(argparse.ArgumentParser):
    # usage errors are validation errors (exit 1), not argparse's default 2
    def error(self, message):
        raise _UsageError(f"{self.prog}: {message}")


@dataclass
class RunConfig:
    command: str
    outputs: List[Tuple[Path, str]] = field(default_factory=list)

    def emit(self, path, text: str) -> None:
        self.outputs.append((Path(path), text))


def _graph(args) -> Graph:
    path = Path(args.graph)
    if args.mesh_off or path.suffix.lower() == ".off":
        return load_mesh_off(path)
    return load_edge_list(path, n_nodes=args.nodes)


def _add_graph_args(p, laplacian=True):
    p.add_argument("--graph", required=True, help="edge list or OFF mesh")
    p.add_argument("--mesh-off", action="store_true", help="treat --graph as an OFF mesh")
    p.add_argument("--nodes", type=int, default=None, help="node count override for edge lists")
    if laplacian:
        p.add_argument("--laplacian", choices=["comb", "norm"], default="norm")


def _params(**kw) -> str:
    return " ".join(f"{k}={csvio.fmt(v) if isinstance(v, float) else v}" for k, v in kw.items())


def cmd_spectrum(args, cfg: RunConfig) -> None:
    g = _graph(args)
    m = args.nev if args.nev is not None else g.n_nodes
    if not 1 <= m <= g.n_nodes:
        raise GraphSlepianError(f"--nev {m} out of bounds: must be in [1, {g.n_nodes}]")
    spec = eig_laplacian(g, args.laplacian, m)
    comment = _params(laplacian=spec.kind.value, N=g.n_nodes, M=m)
    rows = [(k + 1, lam) for k, lam in enumerate(spec.eigenvalues)]
    cfg.emit(args.out, csvio.render(["k", "lambda"], rows, [comment]))
    if args.eigvecs:
        cfg.emit(args.eigvecs, csvio.render(None, spec.eigenvectors, [comment]))


def _slepian_setup(args, g: Graph):
    subset = load_subset(args.subset, g.n_nodes)
    if args.bandwidth is None:
        raise GraphSlepianError("--bandwidth is required")
    if not 1 <= args.bandwidth <= g.n_nodes:
        raise GraphSlepianError(f"--bandwidth {args.bandwidth} out of bounds: must be in [1, {g.n_nodes}]")
    spec = eig_laplacian(g, args.laplacian, args.bandwidth)
    return spec, subset


def cmd_slepian(args, cfg: RunConfig) -> None:
    g = _graph(args)
    spec, subset = _slepian_setup(args, g)
    design = Design.parse(args.design)
    basis = slepian_basis(spec, args.bandwidth, subset, design)
    direction = args.order or ("desc" if design is Design.CONCENTRATION else "asc")
    perm = basis.order(direction)
    k_sh = shannon_number(args.bandwidth, subset.n_s, g.n_nodes)
    comment = _params(design=design.value, laplacian=spec.kind.value, order=direction,
                      N=g.n_nodes, N_S=subset.n_s, N_W=args.bandwidth, K=k_sh)

    header = ["node"] + [f"s_{k + 1}" for k in range(len(perm))]
    vecs = basis.vectors[:, perm]
    rows = ([i] + list(vecs[i]) for i in range(g.n_nodes))
    cfg.emit(args.basis_out, csvio.render(header, rows, [comment]))

    m = basis.cross_metrics[perm]
    rows = [(k + 1, basis.values[p], *m[k]) for k, p in enumerate(perm)]
    cfg.emit(args.metrics_out, csvio.render(
        ["k", "value", "lambda_metric", "mu_metric", "xi_metric"], rows, [comment]))


def cmd_metrics(args, cfg: RunConfig) -> None:
    g = _graph(args)
    spec, subset = _slepian_setup(args, g)
    m = laplacian_cross_metrics(spec, subset, args.bandwidth)
    k_sh = shannon_number(args.bandwidth, subset.n_s, g.n_nodes)
    comment = _params(basis="laplacian", laplacian=spec.kind.value,
                      N=g.n_nodes, N_S=subset.n_s, N_W=args.bandwidth, K=k_sh)
    rows = [(k + 1, spec.eigenvalues[k], *m[k]) for k in range(args.bandwidth)]
    cfg.emit(args.out, csvio.render(
        ["k", "lambda", "lambda_metric", "mu_metric", "xi_metric"], rows, [comment]))


def cmd_classic1d(args, cfg: RunConfig) -> None:
    if args.indices:
        idx = load_subset(args.indices, args.n).indices
        design = DftDesign(args.n, args.nw, idx)
    else:
        if args.ns is None:
            raise GraphSlepianError("either --ns or --indices is required")
        center = args.center if args.center is not None else args.n // 2
        design = DftDesign.centered(args.n, args.ns, center, args.nw)
    basis = slepian_1d(design)
    comment = _params(N=design.n, N_S=design.n_s, N_W=design.n_w, K=design.shannon_number,
                      interval=f"{design.interval[0]}..{design.interval[-1]}")
    mu_rows = [(k + 1, mu) for k, mu in enumerate(basis.mu)]
    cfg.emit(args.mu_out, csvio.render(["k", "mu"], mu_rows, [comment]))

    cols = range(1, design.n_w + 1)
    if basis.imaginary_residue() < 1e-8:
        header = ["sample"] + [f"s_{k}" for k in cols]
        data = basis.real_vectors()
    else:
        header = ["sample"] + [f"s_{k}_{part}" for k in cols for part in ("re", "im")]
        data = np.empty((design.n, 2 * design.n_w))
        data[:, 0::2] = basis.vectors.real
        data[:, 1::2] = basis.vectors.imag
    rows = ([i] + list(data[i]) for i in range(design.n))
    cfg.emit(args.out, csvio.render(header, rows, [comment]))


def cmd_filter(args, cfg: RunConfig) -> None:
    g = _graph(args)
    window = parse_window(args.window)
    f = csvio.read_signal(args.signal, g.n_nodes)
    if args.basis == "laplacian":
        n_w = args.bandwidth if args.bandwidth is not None else g.n_nodes
        if not 1 <= n_w <= g.n_nodes:
            raise GraphSlepianError(f"--bandwidth {n_w} out of bounds: must be in [1, {g.n_nodes}]")
        spec = eig_laplacian(g, args.laplacian, n_w)
        out = filter_laplacian(spec, window, f, passthrough=args.passthrough)
        comment = _params(basis="laplacian", laplacian=spec.kind.value, window=args.window,
                          N=g.n_nodes, N_W=n_w, passthrough=args.passthrough)
    else:
        if not args.subset:
            raise GraphSlepianError("--subset is required for --basis slepian")
        spec, subset = _slepian_setup(args, g)
        design = Design.parse(args.design)
        basis = slepian_basis(spec, args.bandwidth, subset, design)
        out = filter_slepian(basis, window, f, allow_concentration=args.mu_abscissa,
                             passthrough=args.passthrough)
        comment = _params(basis="slepian", design=design.value, laplacian=spec.kind.value,
                          window=args.window, N=g.n_nodes, N_S=subset.n_s,
                          N_W=args.bandwidth, passthrough=args.passthrough)
    rows = ((i, out[i]) for i in range(g.n_nodes))
    cfg.emit(args.out, csvio.render(["node", "value"], rows, [comment]))


def cmd_synth_signal(args, cfg: RunConfig) -> None:
    g = _graph(args)
    if not 1 <= args.eigvec <= g.n_nodes:
        raise GraphSlepianError(f"--eigvec {args.eigvec} out of bounds: must be in [1, {g.n_nodes}]")
    spec = eig_laplacian(g, args.laplacian, args.eigvec)
    sig = synth_eigvec_signal(spec, args.eigvec, args.cycles)
    comment = _params(laplacian=spec.kind.value, eigvec=args.eigvec, cycles=args.cycles,
                      N=g.n_nodes)
    rows = ((i, sig[i]) for i in range(g.n_nodes))
    cfg.emit(args.out, csvio.render(["node", "value"], rows, [comment]))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphslepian", description="Slepian bases on graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("spectrum", help="Laplacian eigenvalues (and eigenvectors)")
    _add_graph_args(p)
    p.add_argument("--nev", type=int, default=None, help="number of eigenpairs (default: all)")
    p.add_argument("--out", required=True)
    p.add_argument("--eigvecs", default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("slepian", help="Slepian basis and per-vector metrics")
    _add_graph_args(p)
    p.add_argument("--subset", required=True)
    p.add_argument("--bandwidth", type=int, required=True)
    p.add_argument("--design", choices=["concentration", "embedding"], default="concentration")
    p.add_argument("--order", choices=["asc", "desc"], default=None,
                   help="presentation order (default: desc for concentration, asc for embedding)")
    p.add_argument("--basis-out", required=True)
    p.add_argument("--metrics-out", required=True)
    p.set_defaults(func=cmd_slepian)

    p = sub.add_parser("metrics", help="cross metrics of the Laplacian eigenvectors")
    _add_graph_args(p)
    p.add_argument("--subset", required=True)
    p.add_argument("--bandwidth", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("classic1d", help="1-D DFT Slepian sequences")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ns", type=int, default=None)
    p.add_argument("--center", type=int, default=None, help="0-based interval center (default N//2)")
    p.add_argument("--indices", default=None, help="file of sample indices instead of --ns/--center")
    p.add_argument("--nw", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--mu-out", required=True)
    p.set_defaults(func=cmd_classic1d)

    p = sub.add_parser("filter", help="spectral filtering of a node signal")
    _add_graph_args(p)
    p.add_argument("--signal", required=True)
    p.add_argument("--window", required=True, help="heat:<t> | lowpass:<cutoff> | table:<path>")
    p.add_argument("--basis", choices=["laplacian", "slepian"], default="laplacian")
    p.add_argument("--subset", default=None)
    p.add_argument("--bandwidth", type=int, default=None)
    p.add_argument("--design", choices=["concentration", "embedding"], default="embedding")
    p.add_argument("--mu-abscissa", action="store_true",
                   help="allow filtering a concentration basis over its mu values")
    p.add_argument("--passthrough", action="store_true",
                   help="add the out-of-band part of the signal back unfiltered")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_filter)

    p = sub.add_parser("synth-signal", help="sine of a Laplacian eigenvector")
    _add_graph_args(p)
    p.add_argument("--eigvec", type=int, required=True, help="1-based eigenvector rank")
    p.add_argument("--cycles", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth_signal)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(args.command)
        args.func(args, cfg)
        for path, text in cfg.outputs:
            csvio.write_atomic(path, text)
    except GraphSlepianError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
