"""Slepian bases on graphs: energy concentration and modified embedded distance."""

from .classic1d import DftDesign, Slepian1dBasis, band_indices, dft_matrix, slepian_1d
from .errors import ConvergenceError, DisconnectedGraphError, GraphSlepianError, ParseError
from .filtering import (
    HeatKernel,
    IdealLowPass,
    SpectralWindow,
    TableWindow,
    filter_laplacian,
    filter_slepian,
    parse_window,
    synth_eigvec_signal,
)
from .graph import (
    Graph,
    LaplacianKind,
    check_connected,
    laplacian,
    load_edge_list,
    load_mesh_off,
    mesh_graph,
    read_off,
)
from .slepian import (
    ConcentrationMatrix,
    Design,
    NodeSubset,
    SlepianBasis,
    concentration_matrix,
    cross_metrics,
    embedding_concentration_matrix,
    laplacian_cross_metrics,
    load_subset,
    shannon_number,
    slepian_basis,
    slepian_concentration,
    slepian_embedding,
    subset_gram_offdiagonal,
)
from .spectral import (
    LaplacianSpectrum,
    eig_laplacian,
    fiedler_vector,
    gft_forward,
    gft_inverse,
    normalize_signs,
)

__version__ = "0.1.0"
