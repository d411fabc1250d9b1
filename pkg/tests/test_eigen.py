import numpy as np
import pytest

from spinxfer.blocks import build_block
from spinxfer.chain import build_elfm_chain, build_webm_chain
from spinxfer.eigen import eig_dense, eig_tridiagonal

# outer five eigenvalue pairs of the weak-end-bond ten-node chain, frozen
# from an independent dense diagonalization
WEBM_10_8_POSITIVE = np.array(
    [
        0.117891702512425,
        2.92636122008292,
        8.04166554423443,
        12.2717531702189,
        15.038557143555,
    ]
)


def webm_bands():
    block = build_block(build_webm_chain(10, 8.0), model="xy", coupling_range="nn")
    return np.diag(block.matrix).copy(), np.diag(block.matrix, 1).copy()


def check_invariants(matrix, spectrum):
    lam, vec = spectrum.eigenvalues, spectrum.eigenvectors
    resid = np.max(np.abs(matrix @ vec - vec * lam), axis=0)
    assert np.all(resid <= 1e-10 * (1.0 + np.abs(lam)))
    gram = vec.T @ vec - np.eye(len(lam))
    assert np.max(np.abs(gram)) <= 1e-12
    assert np.all(np.diff(lam) >= 0)


def test_webm_reference_eigenvalues():
    d, e = webm_bands()
    spec = eig_tridiagonal(d, e)
    expected = np.sort(np.concatenate([-WEBM_10_8_POSITIVE, WEBM_10_8_POSITIVE]))
    assert spec.eigenvalues == pytest.approx(expected, abs=2e-12)
    assert spec.source == "tridiagonal-bisection"
    matrix = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    check_invariants(matrix, spec)


def test_elfm_out_of_band_doublet():
    block = build_block(build_elfm_chain(10, 2.203), model="xy", coupling_range="nn")
    d = np.diag(block.matrix).copy()
    e = np.diag(block.matrix, 1).copy()
    spec = eig_tridiagonal(d, e)
    # the split is 1.3e-5, which stresses the clustered inverse iteration
    assert spec.eigenvalues[-2] == pytest.approx(4.63295689744229, abs=2e-12)
    assert spec.eigenvalues[-1] == pytest.approx(4.63296956629981, abs=2e-12)
    check_invariants(block.matrix, spec)


def test_uniform_four_site_golden_ratio():
    spec = eig_tridiagonal(np.zeros(4), np.ones(3))
    g = (1.0 + np.sqrt(5.0)) / 2.0
    assert spec.eigenvalues == pytest.approx([-g, -(g - 1), g - 1, g], abs=1e-14)


def test_single_and_pair_sizes():
    one = eig_tridiagonal(np.array([4.0]), np.array([]))
    assert one.eigenvalues == pytest.approx([4.0])
    assert np.array_equal(one.eigenvectors, np.eye(1))
    two = eig_tridiagonal(np.array([0.0, 0.0]), np.array([1.0]))
    assert two.eigenvalues == pytest.approx([-1.0, 1.0])


def test_random_tridiagonal_against_dense_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(8):
        n = int(rng.integers(2, 40))
        d = rng.normal(size=n)
        e = rng.normal(size=n - 1)
        spec = eig_tridiagonal(d, e)
        matrix = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        oracle = np.linalg.eigvalsh(matrix)
        scale = 1.0 + np.max(np.abs(oracle))
        assert spec.eigenvalues == pytest.approx(oracle, abs=1e-11 * scale)
        check_invariants(matrix, spec)


def test_exact_ties_are_deterministic():
    d = np.array([3.0, 1.0, 1.0])
    e = np.zeros(2)
    first = eig_tridiagonal(d, e)
    second = eig_tridiagonal(d, e)
    assert np.array_equal(first.eigenvalues, second.eigenvalues)
    assert np.array_equal(first.eigenvectors, second.eigenvectors)
    check_invariants(np.diag(d), first)


def test_sign_convention_first_significant_positive():
    d, e = webm_bands()
    spec = eig_tridiagonal(d, e)
    for col in spec.eigenvectors.T:
        lead = col[np.abs(col) > 1e-6 * np.max(np.abs(col))][0]
        assert lead > 0


def test_dense_matches_tridiagonal_route():
    block = build_block(build_webm_chain(10, 8.0), model="xy", coupling_range="nn")
    dense = eig_dense(block.matrix)
    tri = eig_tridiagonal(np.diag(block.matrix).copy(), np.diag(block.matrix, 1).copy())
    assert dense.eigenvalues == pytest.approx(tri.eigenvalues, abs=1e-11)
    assert dense.source == "dense-jacobi"
    check_invariants(block.matrix, dense)


def test_random_dense_against_oracle():
    rng = np.random.default_rng(7)
    for _ in range(6):
        n = int(rng.integers(1, 24))
        a = rng.normal(size=(n, n))
        a = 0.5 * (a + a.T)
        spec = eig_dense(a)
        oracle = np.linalg.eigvalsh(a)
        scale = 1.0 + np.max(np.abs(oracle))
        assert spec.eigenvalues == pytest.approx(oracle, abs=1e-11 * scale)
        check_invariants(a, spec)


def test_dense_input_validation():
    with pytest.raises(ValueError):
        eig_dense(np.zeros((2, 3)))
    asym = np.array([[0.0, 1.0], [2.0, 0.0]])
    with pytest.raises(ValueError):
        eig_dense(asym)


def test_tridiagonal_band_validation():
    with pytest.raises(ValueError):
        eig_tridiagonal(np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError):
        eig_tridiagonal(np.zeros(0), np.zeros(0))


def test_eigenvectors_read_only():
    spec = eig_tridiagonal(np.zeros(3), np.ones(2))
    with pytest.raises(ValueError):
        spec.eigenvectors[0, 0] = 1.0
    with pytest.raises(ValueError):
        spec.eigenvalues[0] = 1.0
