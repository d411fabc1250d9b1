"""Single-excitation transfer along spin-1/2 chains.

Builds chain geometries (weak end bonds or end Larmor frequencies), forms the
single-excitation block of the XY or XXZ Hamiltonian with nearest-neighbor or
all-node dipolar couplings, and evolves site amplitudes spectrally. The
end-modified nearest-neighbor family also gets exact secular-equation spectra
and closed-form four-node perfect transfer solutions.
"""

from .blocks import ExcitationBlock, build_block, coupling_matrix, equivalent_xy_frequencies
from .chain import (
    ChainSpec,
    build_elfm_chain,
    build_webm_chain,
    coupling_from_distance,
    pair_distance,
)
from .dynamics import (
    Peak,
    TransferTrace,
    block_spectrum,
    fidelity,
    find_peaks,
    probability,
    scan_probability,
    transfer_amplitude,
    two_spin_time,
)
from .eigen import Spectrum, eig_dense, eig_tridiagonal
from .search import (
    OptimizationResult,
    PerfectTransferSolution,
    optimize_parameter,
    perfect_transfer_solutions_n4,
)
from .secular import (
    SecularRoot,
    eigvec_closed_form,
    find_secular_roots,
    four_node_alpha_beta,
    four_node_eigenvalues,
    four_node_probability,
    probability_closed_form,
    secular_residuals,
)

__version__ = "0.1.0"

__all__ = [
    "ChainSpec",
    "ExcitationBlock",
    "OptimizationResult",
    "Peak",
    "PerfectTransferSolution",
    "Spectrum",
    "SecularRoot",
    "TransferTrace",
    "block_spectrum",
    "build_block",
    "build_elfm_chain",
    "build_webm_chain",
    "coupling_from_distance",
    "coupling_matrix",
    "eig_dense",
    "eig_tridiagonal",
    "eigvec_closed_form",
    "equivalent_xy_frequencies",
    "fidelity",
    "find_peaks",
    "find_secular_roots",
    "four_node_alpha_beta",
    "four_node_eigenvalues",
    "four_node_probability",
    "optimize_parameter",
    "pair_distance",
    "perfect_transfer_solutions_n4",
    "probability",
    "probability_closed_form",
    "scan_probability",
    "secular_residuals",
    "transfer_amplitude",
    "two_spin_time",
    "__version__",
]
