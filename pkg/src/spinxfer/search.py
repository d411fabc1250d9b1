"""Grid search over scheme parameters and exact four-node transfer solutions."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import build_block
from .chain import build_elfm_chain, build_webm_chain
from .dynamics import find_peaks, scan_probability
from .secular import four_node_alpha_beta, four_node_probability

SCHEMES = ("webm", "elfm")


@dataclass(frozen=True, eq=False)
class OptimizationResult:
    """Full grid table of a parameter sweep plus the winning entry.

    times/probs hold the earliest qualifying peak per parameter and are NaN
    where no peak reached the threshold within tau_max.  best_index is the
    qualifying entry with the smallest transfer time (ties go to the smaller
    parameter), or None when nothing qualified.
    """

    scheme: str
    model: str
    coupling_range: str
    n_nodes: int
    threshold: float
    tau_max: float
    params: np.ndarray
    times: np.ndarray
    probs: np.ndarray
    best_index: int | None

    @property
    def best_param(self):
        return None if self.best_index is None else float(self.params[self.best_index])

    @property
    def best_time(self):
        return None if self.best_index is None else float(self.times[self.best_index])

    @property
    def best_probability(self):
        return None if self.best_index is None else float(self.probs[self.best_index])


def _grid_values(grid) -> np.ndarray:
    lo, hi, step = (float(v) for v in grid)
    if step <= 0:
        raise ValueError(f"grid step must be positive, got {step}")
    if hi < lo:
        raise ValueError(f"grid upper bound {hi} below lower bound {lo}")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return lo + np.arange(count) * step


def optimize_parameter(
    scheme: str,
    model: str,
    coupling_range: str,
    n_nodes: int,
    grid,
    tau_max: float,
    threshold: float = 0.97,
    dtau="auto",
) -> OptimizationResult:
    """Sweep the scheme parameter (end-bond delta or end frequency omega).

    Each grid point gets a fresh probability scan on [0, tau_max]; the entry
    records the earliest refined peak with P >= threshold.
    """
    if scheme not in SCHEMES:
        raise ValueError(f"scheme must be one of {SCHEMES}, got {scheme!r}")
    params = _grid_values(grid)
    if scheme == "webm" and params[0] <= 0:
        raise ValueError("webm sweeps need a positive lower bound for delta")
    times = np.full(len(params), np.nan)
    probs = np.full(len(params), np.nan)
    for i, value in enumerate(params):
        if scheme == "webm":
            chain = build_webm_chain(n_nodes, float(value))
        else:
            chain = build_elfm_chain(n_nodes, float(value))
        block = build_block(chain, model=model, coupling_range=coupling_range)
        trace = scan_probability(block, tau_max, dtau)
        peaks = find_peaks(trace, threshold)
        if peaks:
            times[i] = peaks[0].time
            probs[i] = peaks[0].probability
    if np.all(np.isnan(times)):
        best = None
    else:
        best = int(np.nanargmin(times))
    return OptimizationResult(
        scheme=scheme,
        model=model,
        coupling_range=coupling_range,
        n_nodes=n_nodes,
        threshold=threshold,
        tau_max=float(tau_max),
        params=params,
        times=times,
        probs=probs,
        best_index=best,
    )


@dataclass(frozen=True)
class PerfectTransferSolution:
    """Parameters (omega, delta) and time tau0 giving P(tau0) = 1 for n = 4.

    n3 is None for the zero-field family, where the two Rabi integers
    coincide and omega drops out.
    """

    n1: int
    n2: int
    n3: int | None
    branch: str
    omega: float
    delta: float
    tau0: float


def _rabi_integer_solution(sigma: int, n1: int, n2: int, n3: int, branch: str, diagnostics):
    """Invert the commensurability system for one integer tuple.

    With sigma = tau0*delta/pi, the two Rabi frequencies must satisfy
    alpha = mu*delta and beta = nu*delta for mu = 4*n2/sigma, nu = 4*n3/sigma,
    which pins omega/delta and then delta itself.  A nonpositive radicand
    means the tuple has no real chain.
    """
    mu = 4.0 * n2 / sigma
    nu = 4.0 * n3 / sigma
    c = (mu * mu - nu * nu) / 8.0
    radicand = mu * mu - (2.0 * c + 1.0) ** 2
    if radicand <= 0:
        if diagnostics is not None:
            diagnostics.append(
                {"branch": branch, "n1": n1, "n2": n2, "n3": n3, "reason": "nonpositive radicand"}
            )
        return None
    delta = 2.0 / np.sqrt(radicand)
    omega = c * delta
    tau0 = np.pi * sigma / delta
    return PerfectTransferSolution(
        n1=n1, n2=n2, n3=n3, branch=branch, omega=float(omega), delta=float(delta), tau0=float(tau0)
    )


def _verify_solution(sol: PerfectTransferSolution) -> None:
    alpha, beta = four_node_alpha_beta(sol.omega, sol.delta)
    sigma = 4 * sol.n1 if sol.branch == "odd" else 4 * sol.n1 + 2
    n3 = sol.n2 if sol.n3 is None else sol.n3
    checks = (
        ("delta", sol.tau0 * sol.delta / np.pi, sigma),
        ("alpha", sol.tau0 * alpha / (4.0 * np.pi), sol.n2),
        ("beta", sol.tau0 * beta / (4.0 * np.pi), n3),
    )
    for name, got, want in checks:
        if abs(got - want) > 1e-9:
            raise RuntimeError(f"{sol.branch} ({sol.n1},{sol.n2},{sol.n3}): {name} condition off by {abs(got - want):.2e}")
    p0 = four_node_probability(sol.omega, sol.delta, sol.tau0)
    if 1.0 - p0 > 1e-9:
        raise RuntimeError(f"{sol.branch} ({sol.n1},{sol.n2},{sol.n3}): P(tau0) = {p0} short of 1")


def perfect_transfer_solutions_n4(max_n: int, diagnostics: list | None = None) -> list[PerfectTransferSolution]:
    """All four-node perfect-transfer parameter sets with integers up to max_n.

    Three families: integer tuples with an odd Rabi-integer difference
    (sigma a multiple of 4), an even difference (sigma = 2 mod 4), and the
    zero-field line where the two Rabi integers coincide.  Every returned
    solution is re-verified against the closed-form dynamics before emission.
    """
    if max_n < 1:
        raise ValueError(f"max_n must be at least 1, got {max_n}")
    sols = []
    for n1 in range(1, max_n + 1):
        for n2 in range(1, max_n + 1):
            for n3 in range(1, max_n + 1):
                if (n2 - n3) % 2 == 0:
                    continue
                sol = _rabi_integer_solution(4 * n1, n1, n2, n3, "odd", diagnostics)
                if sol is not None:
                    sols.append(sol)
    for n1 in range(0, max_n + 1):
        for n2 in range(1, max_n + 1):
            for n3 in range(1, max_n + 1):
                if n2 == n3 or (n2 - n3) % 2 != 0:
                    continue
                sol = _rabi_integer_solution(4 * n1 + 2, n1, n2, n3, "even", diagnostics)
                if sol is not None:
                    sols.append(sol)
    for n1 in range(0, max_n + 1):
        # n2 > n1 keeps mu > 1, so this family always has a real chain
        for n2 in range(n1 + 1, max_n + 1):
            mu = 2.0 * n2 / (2 * n1 + 1)
            delta = 2.0 / np.sqrt(mu * mu - 1.0)
            tau0 = np.pi * (4 * n1 + 2) / delta
            sols.append(
                PerfectTransferSolution(
                    n1=n1, n2=n2, n3=None, branch="zero-field",
                    omega=0.0, delta=float(delta), tau0=float(tau0),
                )
            )
    for sol in sols:
        _verify_solution(sol)
    sols.sort(key=lambda s: (s.tau0, s.delta, s.omega, s.branch, s.n1, s.n2, -1 if s.n3 is None else s.n3))
    return sols
