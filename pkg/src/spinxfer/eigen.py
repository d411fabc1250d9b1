"""Self-contained symmetric eigensolvers.

Two independent routes, kept deliberately separate so each can cross-check
the other: Sturm-sequence bisection plus inverse iteration for tridiagonal
matrices, and cyclic Jacobi sweeps for dense ones.  No external linear
algebra is used anywhere in this module.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    source: str

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


def _fix_signs(u: np.ndarray) -> np.ndarray:
    """Flip column signs so the first significant component is positive.

    "Significant" means above 1e-6 of the column's largest entry; a literal
    first-nonzero rule would key off rounding noise in components that are
    zero by symmetry.
    """
    for j in range(u.shape[1]):
        col = u[:, j]
        big = np.abs(col).max()
        for v in col:
            if abs(v) > 1e-6 * big:
                if v < 0:
                    u[:, j] = -col
                break
    return u


def _order_exact_ties(lam: np.ndarray, u: np.ndarray) -> None:
    """Order columns of exactly equal eigenvalues lexicographically."""
    i = 0
    n = len(lam)
    while i < n:
        j = i + 1
        while j < n and lam[j] == lam[i]:
            j += 1
        if j - i > 1:
            cols = sorted(range(i, j), key=lambda k: tuple(u[:, k]))
            u[:, i:j] = u[:, cols]
        i = j


def _sturm_count(d: np.ndarray, e2: np.ndarray, x: float, pivmin: float) -> int:
    """Number of eigenvalues strictly below x (Sturm sequence sign count)."""
    count = 0
    q = d[0] - x
    if q <= 0:
        count += 1
        if q == 0:
            q = -pivmin
    for k in range(1, len(d)):
        q = d[k] - x - e2[k - 1] / q
        if q <= 0:
            count += 1
            if q == 0:
                q = -pivmin
    return count


def _bisect_eigenvalues(d: np.ndarray, e: np.ndarray) -> np.ndarray:
    n = len(d)
    e2 = e * e
    pivmin = max(1.0, float(e2.max(initial=0.0))) * np.finfo(float).tiny / _EPS
    r = np.zeros(n)
    r[:-1] += np.abs(e)
    r[1:] += np.abs(e)
    lo = float((d - r).min())
    hi = float((d + r).max())
    lam = np.empty(n)
    for k in range(n):
        a, b = lo, hi
        for _ in range(120):
            if b - a <= 2 * _EPS * max(abs(a), abs(b)) + np.finfo(float).tiny:
                break
            mid = 0.5 * (a + b)
            if _sturm_count(d, e2, mid, pivmin) <= k:
                a = mid
            else:
                b = mid
        lam[k] = 0.5 * (a + b)
        lo = a  # eigenvalues come out ascending, later ones cannot be below
    return lam


def _lu_factor_tridiag(a, b, c):
    """LU with partial pivoting of a tridiagonal matrix given by bands (a, b, c).

    Returns multipliers, the three factored bands, and the swap flags.
    Bands are modified copies; ``a`` holds multipliers on exit.
    """
    n = len(b)
    a = a.copy()
    b = b.copy()
    c = np.concatenate([c, [0.0]])
    d2 = np.zeros(max(n - 2, 0))
    swap = np.zeros(max(n - 1, 0), dtype=bool)
    for i in range(n - 1):
        if abs(b[i]) >= abs(a[i]):
            if b[i] != 0.0:
                fact = a[i] / b[i]
            else:
                fact = 0.0
            a[i] = fact
            b[i + 1] -= fact * c[i]
        else:
            fact = b[i] / a[i]
            b[i] = a[i]
            a[i] = fact
            tmp = c[i]
            c[i] = b[i + 1]
            b[i + 1] = tmp - fact * b[i + 1]
            if i < n - 2:
                d2[i] = c[i + 1]
                c[i + 1] = -fact * c[i + 1]
            swap[i] = True
    return a, b, c, d2, swap


def _lu_solve_tridiag(factors, rhs, pivmin):
    a, b, c, d2, swap = factors
    n = len(b)
    x = rhs.copy()
    for i in range(n - 1):
        if swap[i]:
            x[i], x[i + 1] = x[i + 1], x[i] - a[i] * x[i + 1]
        else:
            x[i + 1] -= a[i] * x[i]
    # singular pivots are expected (we factor T - lambda*I); clamp them
    def piv(v):
        if abs(v) < pivmin:
            return pivmin if v >= 0 else -pivmin
        return v

    x[n - 1] /= piv(b[n - 1])
    if n > 1:
        x[n - 2] = (x[n - 2] - c[n - 2] * x[n - 1]) / piv(b[n - 2])
    for i in range(n - 3, -1, -1):
        x[i] = (x[i] - c[i] * x[i + 1] - d2[i] * x[i + 2]) / piv(b[i])
    return x


def _tridiag_apply(d, e, x):
    y = d * x
    y[:-1] += e * x[1:]
    y[1:] += e * x[:-1]
    return y


def eig_tridiagonal(diag, offdiag) -> Spectrum:
    """Full spectrum of a symmetric tridiagonal matrix.

    Eigenvalues come from certified Sturm bisection (the sign count pins each
    one individually), eigenvectors from inverse iteration with clustered
    Gram-Schmidt for close groups.
    """
    d = np.asarray(diag, dtype=float)
    e = np.asarray(offdiag, dtype=float)
    n = len(d)
    if len(e) != n - 1:
        raise ValueError(f"expected {n - 1} off-diagonal entries, got {len(e)}")
    if n == 1:
        return Spectrum(np.array([d[0]]), np.array([[1.0]]), "tridiagonal-bisection")

    lam = _bisect_eigenvalues(d, e)
    anorm = float(np.max(np.abs(d)) + 2 * np.max(np.abs(e)))
    anorm = max(anorm, 1.0)
    pivmin = _EPS * anorm

    # group eigenvalues into clusters; generous tolerance keeps tight doublets together
    ctol = 1e-2 * anorm
    boundaries = [0]
    for j in range(1, n):
        if lam[j] - lam[j - 1] > ctol:
            boundaries.append(j)
    boundaries.append(n)

    rng = np.random.default_rng(171717)
    u = np.empty((n, n))
    for b0, b1 in zip(boundaries[:-1], boundaries[1:]):
        done: list[np.ndarray] = []
        for idx, j in enumerate(range(b0, b1)):
            shift = lam[j]
            if idx > 0 and shift - lam[b0 + idx - 1] < 2 * pivmin:
                shift = lam[b0] + 2 * pivmin * idx
            factors = _lu_factor_tridiag(e.copy(), d - shift, e.copy())
            accept = max(1e-11 * (1.0 + abs(lam[j])), 50 * _EPS * anorm)
            # iterate to the rounding floor, not just to accept: leftover
            # residual leaks into the Gram matrix as resid over gap
            floor = 8 * _EPS * anorm
            x = rng.standard_normal(n)
            x /= np.sqrt(x @ x)
            best = None
            best_resid = np.inf
            for _ in range(12):
                for q in done:
                    x -= (q @ x) * q
                y = _lu_solve_tridiag(factors, x, pivmin)
                ynorm = np.sqrt(y @ y)
                if ynorm == 0.0:
                    x = rng.standard_normal(n)
                    x /= np.sqrt(x @ x)
                    continue
                x = y / ynorm
                for q in done:
                    x -= (q @ x) * q
                nx = np.sqrt(x @ x)
                if nx < 0.1:
                    # start vector was swallowed by the orthogonal complement
                    x = rng.standard_normal(n)
                    x /= np.sqrt(x @ x)
                    continue
                x /= nx
                resid = np.max(np.abs(_tridiag_apply(d, e, x) - lam[j] * x))
                if resid < best_resid:
                    best = x.copy()
                    best_resid = resid
                if resid <= floor:
                    break
            if best_resid > accept:
                raise RuntimeError(
                    f"inverse iteration failed for eigenvalue {lam[j]!r} "
                    f"(cluster {b0}:{b1}, residual {best_resid:.3e})"
                )
            done.append(best)
        # one more orthonormalization sweep tightens the cluster
        for i, x in enumerate(done):
            for q in done[:i]:
                x -= (q @ x) * q
            x /= np.sqrt(x @ x)
            u[:, b0 + i] = x

    _fix_signs(u)
    _order_exact_ties(lam, u)
    return Spectrum(lam, u, "tridiagonal-bisection")


def eig_dense(matrix) -> Spectrum:
    """Full spectrum of a dense symmetric matrix via cyclic Jacobi sweeps."""
    b = np.asarray(matrix, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {b.shape}")
    n = b.shape[0]
    scale = max(1.0, float(np.max(np.abs(b))) if n else 1.0)
    if np.max(np.abs(b - b.T), initial=0.0) > 1e-12 * scale:
        raise ValueError("matrix is not symmetric")
    if n == 1:
        return Spectrum(np.array([b[0, 0]]), np.array([[1.0]]), "dense-jacobi")

    a = 0.5 * (b + b.T)  # exact for symmetric input, tidies tiny asymmetry otherwise
    v = np.eye(n)
    off_tol = 1e-13 * scale
    for _ in range(60):
        off = 0.0
        for p in range(n - 1):
            m = np.max(np.abs(a[p, p + 1 :]))
            off = max(off, m)
        if off <= off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 0.05 * off_tol:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta == 0.0:
                        t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - s * rq
                a[q, :] = s * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - s * cq
                a[:, q] = s * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq
    else:
        raise RuntimeError("Jacobi sweeps did not converge in 60 iterations")

    lam = np.diag(a).copy()
    order = np.argsort(lam, kind="stable")
    lam = lam[order]
    u = v[:, order]
    _fix_signs(u)
    _order_exact_ties(lam, u)
    return Spectrum(lam, u, "dense-jacobi")
