"""Single-excitation matrix blocks for XY and XXZ chains.

The dynamics of one excited spin lives in an N-dimensional sector, where the
Hamiltonian is represented by a real symmetric matrix B (twice the sector
Hamiltonian, so amplitudes evolve as exp(-i*lambda*tau/2)).  Off-diagonal
entries are the dipolar couplings; the diagonal carries twice the Larmor
frequencies, plus, for the XXZ model, twice the coupling row sums.  Uniform
diagonal shifts are dropped throughout: they cannot change |f|.
"""
from __future__ import annotations

from dataclasses import dataclass
from io import StringIO

import numpy as np

from .chain import ChainSpec, coupling_from_distance, pair_distance

MODELS = ("xy", "xxz")
RANGES = ("nn", "all")


@dataclass(frozen=True)
class ExcitationBlock:
    """The N x N sector matrix together with the choices that produced it."""

    matrix: np.ndarray
    model: str
    coupling_range: str
    chain: ChainSpec

    def __post_init__(self):
        self.matrix.setflags(write=False)

    @property
    def n_nodes(self) -> int:
        return self.chain.n_nodes


def _validate(model: str, coupling_range: str) -> None:
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}, got {model!r}")
    if coupling_range not in RANGES:
        raise ValueError(f"coupling_range must be one of {RANGES}, got {coupling_range!r}")


def coupling_matrix(chain: ChainSpec, coupling_range: str) -> np.ndarray:
    """Symmetric matrix of pair couplings d_nm, zero diagonal.

    For "nn" only adjacent pairs couple; for "all" every pair does, with the
    coupling set by the cumulative distance.
    """
    n = chain.n_nodes
    c = np.zeros((n, n))
    for i in range(1, n):
        last = i + 1 if coupling_range == "nn" else n
        for j in range(i + 1, last + 1):
            d = coupling_from_distance(pair_distance(chain, i, j))
            c[i - 1, j - 1] = d
            c[j - 1, i - 1] = d
    return c


def build_block(chain: ChainSpec, model: str = "xy", coupling_range: str = "all") -> ExcitationBlock:
    """Assemble the sector matrix B for the given model and interaction range."""
    _validate(model, coupling_range)
    b = coupling_matrix(chain, coupling_range)
    diag = 2.0 * np.asarray(chain.larmor)
    if model == "xxz":
        # row sums of the coupling matrix are the A_n diagonal correction
        diag = diag + 2.0 * b.sum(axis=1)
    b[np.diag_indices_from(b)] = diag
    return ExcitationBlock(b, model, coupling_range, chain)


def equivalent_xy_frequencies(chain: ChainSpec, coupling_range: str, omega_xxz) -> np.ndarray:
    """Larmor profile that makes the XY block equal the XXZ block built from omega_xxz.

    Adding the coupling row sums A_n to the XXZ frequencies absorbs the
    diagonal difference between the two models (up to a uniform shift, which
    is dropped anyway).
    """
    _validate("xy", coupling_range)
    omega_xxz = np.asarray(omega_xxz, dtype=float)
    if omega_xxz.shape != (chain.n_nodes,):
        raise ValueError(f"expected {chain.n_nodes} frequencies, got shape {omega_xxz.shape}")
    a = coupling_matrix(chain, coupling_range).sum(axis=1)
    return omega_xxz + a


def block_to_csv(block: ExcitationBlock) -> str:
    """Row-major CSV dump of the matrix at full precision."""
    out = StringIO()
    n = block.n_nodes
    out.write(",".join(f"c{j}" for j in range(1, n + 1)) + "\n")
    for row in block.matrix:
        out.write(",".join(repr(float(v)) for v in row) + "\n")
    return out.getvalue()
