"""Exact spectra for the end-modified nearest-neighbor chain.

The chain with unit end bonds, inner coupling delta and end Larmor frequency
omega has a tridiagonal sector matrix whose eigenvalues are 2*delta*cos(p)
with p solving one of two transcendental secular equations (one per mirror
parity).  Roots with |eigenvalue| > 2*delta continue analytically to complex
p (p = i*q above the band, p = pi - i*q below); everything stored here stays
real by evaluating through Chebyshev polynomials in x = cos(p).
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .eigen import Spectrum, eig_tridiagonal

PARITIES = ("sym", "anti")


@dataclass(frozen=True)
class SecularRoot:
    """One secular root: parameter p, its parity class, eigenvalue and weight.

    ``normalization`` is the magnitude of the eigenvector normalization
    constant; ``amp_sq`` is its signed square, which goes negative on
    analytic-continuation branches where the constant itself is imaginary.
    """

    p: complex
    parity: str
    eigenvalue: float
    normalization: float
    amp_sq: float


def family_bands(n_nodes: int, delta: float, omega: float):
    """Tridiagonal bands (diag, offdiag) of the end-modified chain matrix."""
    if n_nodes < 3:
        raise ValueError("the end-modified family needs n_nodes >= 3")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    d = np.zeros(n_nodes)
    d[0] = d[-1] = 2.0 * omega
    e = np.full(n_nodes - 1, float(delta))
    e[0] = e[-1] = 1.0
    return d, e


def _cheb_t(k: int, x: float) -> float:
    if k == 0:
        return 1.0
    t0, t1 = 1.0, x
    for _ in range(k - 1):
        t0, t1 = t1, 2.0 * x * t1 - t0
    return t1


def _cheb_u(k: int, x: float) -> float:
    if k < 0:
        return 0.0
    if k == 0:
        return 1.0
    u0, u1 = 1.0, 2.0 * x
    for _ in range(k - 1):
        u0, u1 = u1, 2.0 * x * u1 - u0
    return u1


def secular_residuals(p: complex, n_nodes: int, delta: float, omega: float):
    """The two secular expressions at p; a root zeroes one of them."""
    core = delta * (2.0 * omega - 2.0 * delta * cmath.cos(p))
    g_sym = core * cmath.cos(0.5 * (n_nodes - 1) * p) + cmath.cos(0.5 * (n_nodes - 3) * p)
    g_anti = core * cmath.sin(0.5 * (n_nodes - 1) * p) + cmath.sin(0.5 * (n_nodes - 3) * p)
    return g_sym, g_anti


def scaled_residuals(p: complex, n_nodes: int, delta: float, omega: float):
    """Normalized residual magnitudes (|g| over the largest term) for both parities.

    Normalization makes the 1e-10 root tolerance meaningful on hyperbolic
    branches, where both terms grow like cosh and an absolute residual is
    dominated by rounding in the terms themselves.
    """
    core = delta * (2.0 * omega - 2.0 * delta * cmath.cos(p))
    ts1 = core * cmath.cos(0.5 * (n_nodes - 1) * p)
    ts2 = cmath.cos(0.5 * (n_nodes - 3) * p)
    ta1 = core * cmath.sin(0.5 * (n_nodes - 1) * p)
    ta2 = cmath.sin(0.5 * (n_nodes - 3) * p)
    r_sym = abs(ts1 + ts2) / max(abs(ts1), abs(ts2), 1.0)
    r_anti = abs(ta1 + ta2) / max(abs(ta1), abs(ta2), 1.0)
    return r_sym, r_anti


def _p_from_x(x: float) -> complex:
    if x > 1.0:
        return 1j * float(np.arccosh(x))
    if x < -1.0:
        return np.pi - 1j * float(np.arccosh(-x))
    return complex(float(np.arccos(x)))


def _polish_x(x: float, parity: str, n_nodes: int, delta: float, omega: float) -> float:
    """Gauss-Newton steps on |g(x)|^2 along the real x axis."""
    pick = 0 if parity == "sym" else 1

    def g_of(xv: float) -> complex:
        return secular_residuals(_p_from_x(xv), n_nodes, delta, omega)[pick]

    for _ in range(4):
        p = _p_from_x(x)
        if scaled_residuals(p, n_nodes, delta, omega)[pick] <= 5e-11:
            break
        g = g_of(x)
        h = 1e-7 * max(abs(x), 1e-3)
        gp = (g_of(x + h) - g_of(x - h)) / (2.0 * h)
        if gp == 0:
            break
        x = x - (g * gp.conjugate()).real / abs(gp) ** 2
    return x


def _amp_sq(x: float, parity: str, n_nodes: int, delta: float):
    """Signed square of the normalization constant, by Chebyshev evaluation.

    cos((n-1)p) = T_{n-1}(x) and sin((n-2)p)/sin(p) = U_{n-3}(x) hold on all
    branches, and U is exact at x = +-1 where the sine ratio degenerates.
    """
    t = _cheb_t(n_nodes - 1, x)
    u = _cheb_u(n_nodes - 3, x)
    if parity == "sym":
        inv = 0.5 * (n_nodes - 2) + delta * delta * (1.0 + t) + 0.5 * u
    else:
        inv = 0.5 * (n_nodes - 2) + delta * delta * (1.0 - t) - 0.5 * u
    return 1.0 / inv if inv != 0.0 else np.inf


def find_secular_roots(n_nodes: int, delta: float, omega: float) -> list[SecularRoot]:
    """All N secular roots of the end-modified chain.

    Eigenvalues come from certified Sturm bisection on the tridiagonal
    matrix, so no root can be missed; each maps to p through the branch rule
    and gets its parity from the strict alternation of mirror parities along
    the ascending spectrum (the two parity blocks interlace), which the
    residuals then confirm.
    """
    d, e = family_bands(n_nodes, delta, omega)
    spec = eig_tridiagonal(d, e)
    n = n_nodes
    roots = []
    bad = []
    for j, lam in enumerate(spec.eigenvalues):
        parity = "sym" if (n - 1 - j) % 2 == 0 else "anti"
        x = float(lam) / (2.0 * delta)
        x = _polish_x(x, parity, n, delta, omega)
        p = _p_from_x(x)
        res = scaled_residuals(p, n, delta, omega)[0 if parity == "sym" else 1]
        if res > 1e-10:
            bad.append((float(lam), parity, res))
        amp_sq = _amp_sq(x, parity, n, delta)
        roots.append(
            SecularRoot(
                p=p,
                parity=parity,
                eigenvalue=2.0 * delta * x,
                normalization=float(np.sqrt(abs(amp_sq))) if np.isfinite(amp_sq) else np.inf,
                amp_sq=amp_sq,
            )
        )
    if bad:
        lines = ", ".join(f"(lambda={v:.6g}, {par}, residual={r:.2e})" for v, par, r in bad)
        raise RuntimeError(f"secular residuals above tolerance for {lines}")
    n_sym = sum(1 for r in roots if r.parity == "sym")
    if n_sym != n - n // 2:
        raise RuntimeError(
            f"parity split {n_sym} symmetric of {n} contradicts the expected "
            f"{n - n // 2}; roots: {[(r.eigenvalue, r.parity) for r in roots]}"
        )
    return roots


def eigvec_closed_form(root: SecularRoot, n_nodes: int, delta: float) -> np.ndarray:
    """Eigenvector components from the closed form, as a real unit vector.

    On analytic-continuation branches the raw components share a constant
    complex phase; it is rotated away using the largest component, and the
    stored normalization magnitude then makes the vector unit length.
    """
    if not np.isfinite(root.normalization) or root.normalization > 1e12:
        raise ValueError("degenerate root: normalization denominator vanishes")
    n = n_nodes
    p = root.p
    fn = cmath.cos if root.parity == "sym" else cmath.sin
    v = np.empty(n, dtype=complex)
    v[0] = delta * fn(0.5 * (n - 1) * p)
    for k in range(2, n):
        v[k - 1] = fn(0.5 * (n + 1 - 2 * k) * p)
    v[n - 1] = delta * fn(0.5 * (n - 1) * p)
    if root.parity == "anti":
        v[n - 1] = -v[n - 1]
    i0 = int(np.argmax(np.abs(v)))
    phase = v[i0] / abs(v[i0])
    v = v / phase
    big = float(np.max(np.abs(v)))
    if float(np.max(np.abs(v.imag))) > 1e-8 * big:
        raise RuntimeError("closed-form components did not reduce to a real vector")
    u = v.real * root.normalization
    for w in u:
        if abs(w) > 1e-6 * big * root.normalization:
            if w < 0:
                u = -u
            break
    return u


def probability_closed_form(roots: list[SecularRoot], n_nodes: int, delta: float, tau):
    """End-to-end transfer probability from the secular-root sum.

    The per-root weights delta^2 * A^2 * cos^2((n-1)p/2) (symmetric family,
    sin^2 for the antisymmetric one, entering with a minus sign) are just the
    eigenvector end-component products, all real regardless of branch.
    """
    if len(roots) != n_nodes:
        raise ValueError(f"expected the full set of {n_nodes} roots, got {len(roots)}")
    for r in roots:
        if not np.isfinite(r.amp_sq):
            raise ValueError(
                f"degenerate root at the band edge (eigenvalue {r.eigenvalue}) has no "
                "finite closed-form weight"
            )
    x = np.array([r.eigenvalue / (2.0 * delta) for r in roots])
    w = np.empty(len(roots))
    for i, r in enumerate(roots):
        t = _cheb_t(n_nodes - 1, x[i])
        if r.parity == "sym":
            w[i] = delta * delta * r.amp_sq * 0.5 * (1.0 + t)
        else:
            w[i] = -delta * delta * r.amp_sq * 0.5 * (1.0 - t)
    tau_arr = np.asarray(tau, dtype=float)
    f = np.exp(-1j * delta * np.multiply.outer(tau_arr, x)) @ w
    p = np.abs(f) ** 2
    return float(p) if np.isscalar(tau) or tau_arr.ndim == 0 else p


def four_node_alpha_beta(omega: float, delta: float):
    alpha = np.sqrt((2.0 * omega + delta) ** 2 + 4.0)
    beta = np.sqrt((2.0 * omega - delta) ** 2 + 4.0)
    return float(alpha), float(beta)


def four_node_eigenvalues(omega: float, delta: float) -> np.ndarray:
    """The four explicit eigenvalues of the n=4 end-modified chain."""
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    alpha, beta = four_node_alpha_beta(omega, delta)
    return np.array(
        [
            0.5 * (2.0 * omega - delta + alpha),
            0.5 * (2.0 * omega - delta - alpha),
            0.5 * (2.0 * omega + delta + beta),
            0.5 * (2.0 * omega + delta - beta),
        ]
    )


def four_node_probability(omega: float, delta: float, tau):
    """End-to-end probability for n=4 in terms of the two Rabi frequencies."""
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    alpha, beta = four_node_alpha_beta(omega, delta)
    tau = np.asarray(tau, dtype=float)
    half_b = np.cos(tau * beta / 4.0) - 1j * ((2.0 * omega - delta) / beta) * np.sin(tau * beta / 4.0)
    half_a = np.cos(tau * alpha / 4.0) - 1j * ((2.0 * omega + delta) / alpha) * np.sin(tau * alpha / 4.0)
    amp = 0.5 * np.exp(-1j * delta * tau / 4.0) * half_b - 0.5 * np.exp(1j * delta * tau / 4.0) * half_a
    p = np.abs(amp) ** 2
    return float(p) if p.ndim == 0 else p
