"""Chain geometry and dimensionless parameters.

A chain is a line of N spin-1/2 nodes described by the N-1 nearest-neighbor
spacings (in units of the end-bond distance) and N on-site Larmor frequencies
(in units of the end-bond coupling).  Couplings fall off as the inverse cube
of distance, so the unit spacing carries unit coupling.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class ChainSpec:
    """Immutable chain description: node count, spacings, Larmor profile.

    ``scale_note`` may record the physical coupling the dimensionless units
    refer to; it never enters any computation.
    """

    n_nodes: int
    spacings: tuple[float, ...]
    larmor: tuple[float, ...]
    scale_note: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n_nodes < 2:
            raise ValueError(f"need at least 2 nodes, got {self.n_nodes}")
        object.__setattr__(self, "spacings", tuple(float(s) for s in self.spacings))
        object.__setattr__(self, "larmor", tuple(float(w) for w in self.larmor))
        if len(self.spacings) != self.n_nodes - 1:
            raise ValueError(
                f"expected {self.n_nodes - 1} spacings, got {len(self.spacings)}"
            )
        if len(self.larmor) != self.n_nodes:
            raise ValueError(
                f"expected {self.n_nodes} Larmor frequencies, got {len(self.larmor)}"
            )
        if any(s <= 0 for s in self.spacings):
            raise ValueError("all spacings must be strictly positive")

    @property
    def length(self) -> float:
        """Total end-to-end distance, the sum of all spacings."""
        return sum(self.spacings)

    def to_json(self) -> str:
        obj = {
            "n_nodes": self.n_nodes,
            "spacings": list(self.spacings),
            "larmor": list(self.larmor),
        }
        if self.scale_note is not None:
            obj["scale_note"] = self.scale_note
        return json.dumps(obj)

    @classmethod
    def from_json(cls, text: str) -> "ChainSpec":
        obj = json.loads(text)
        known = {"n_nodes", "spacings", "larmor", "scale_note"}
        extra = set(obj) - known
        if extra:
            raise ValueError(f"unknown chain keys: {sorted(extra)}")
        return cls(
            n_nodes=int(obj["n_nodes"]),
            spacings=tuple(obj["spacings"]),
            larmor=tuple(obj["larmor"]),
            scale_note=obj.get("scale_note"),
        )


def coupling_from_distance(xi: float) -> float:
    """Dimensionless dipolar coupling at distance ``xi``: 1/xi**3."""
    if xi <= 0:
        raise ValueError(f"distance must be positive, got {xi}")
    return 1.0 / xi**3


def build_webm_chain(n_nodes: int, delta: float) -> ChainSpec:
    """Weak-end-bond chain: unit end spacings, inner spacings delta**(-1/3).

    The inner nearest-neighbor coupling is then exactly ``delta`` while the
    two end bonds stay at unit coupling.  Larmor frequencies are all zero.
    """
    if n_nodes < 3:
        raise ValueError("weak-end-bond chain needs an inner body, so n_nodes >= 3")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    inner = delta ** (-1.0 / 3.0)
    spacings = (1.0,) + (inner,) * (n_nodes - 3) + (1.0,)
    return ChainSpec(n_nodes, spacings, (0.0,) * n_nodes)


def build_elfm_chain(n_nodes: int, omega: float) -> ChainSpec:
    """Uniform chain with Larmor frequency ``omega`` applied to both end nodes."""
    if n_nodes < 2:
        raise ValueError("need at least 2 nodes")
    larmor = (float(omega),) + (0.0,) * (n_nodes - 2) + (float(omega),)
    return ChainSpec(n_nodes, (1.0,) * (n_nodes - 1), larmor)


def pair_distance(chain: ChainSpec, n: int, m: int) -> float:
    """Distance between nodes n and m (1-based, n < m): sum of the spacings between them."""
    if not (1 <= n < m <= chain.n_nodes):
        raise IndexError(f"need 1 <= n < m <= {chain.n_nodes}, got n={n}, m={m}")
    return sum(chain.spacings[n - 1 : m - 1])
