"""Discretization and storage of symmetry-reduced loops.

The free data of an equivariant loop is the single curve z0 on the
half-period [0, N/2], sampled on a uniform grid of spacing 1/M with M
even, so that every half-integer time j/2 lands on a node.  The vertical
coordinate is pinned to zero at both ends (the curve meets the real axis
there); everything else is free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .census import SignVector

DEFAULT_SAMPLES_PER_UNIT = 64


def _readonly(a) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class FundamentalPath:
    """Sampled half-period curve: nodes t_k = k/M, k = 0 .. N*M/2.

    x0/y0 are the horizontal/vertical coordinates at the nodes; y0 is
    exactly zero at both endpoints.  Identity comparison only (arrays).
    """

    n_bodies: int
    samples_per_unit: int
    x0: np.ndarray
    y0: np.ndarray

    def __post_init__(self):
        n, m = self.n_bodies, self.samples_per_unit
        if n < 3:
            raise ValueError(f"need at least 3 bodies, got {n}")
        if m < 2 or m % 2:
            raise ValueError(f"samples_per_unit must be even and >= 2, got {m}")
        object.__setattr__(self, "x0", _readonly(self.x0))
        object.__setattr__(self, "y0", _readonly(self.y0))
        want = n * m // 2 + 1
        if self.x0.shape != (want,) or self.y0.shape != (want,):
            raise ValueError(
                f"expected {want} nodes for N={n}, M={m}, "
                f"got x0 {self.x0.shape}, y0 {self.y0.shape}"
            )
        if not (np.isfinite(self.x0).all() and np.isfinite(self.y0).all()):
            raise ValueError("non-finite sample")
        if self.y0[0] != 0.0 or self.y0[-1] != 0.0:
            raise ValueError("y0 must vanish at both endpoints")

    @property
    def n_nodes(self) -> int:
        return self.x0.shape[0]

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_nodes) / self.samples_per_unit

    def half_node(self, j: int) -> int:
        """Grid index of the half-integer time j/2."""
        return j * self.samples_per_unit // 2


@dataclass(frozen=True, eq=False)
class FullLoop:
    """Per-body positions on the uniform full-period grid [0, N).

    positions[j, i] is body j at time i/M (complex plane coordinates).
    Loops built by ``symmetry.reconstruct`` satisfy the choreography shift
    identity exactly; arbitrary sampled loops are also representable (used
    by the group-action tests).
    """

    n_bodies: int
    samples_per_unit: int
    positions: np.ndarray

    def __post_init__(self):
        n, m = self.n_bodies, self.samples_per_unit
        pos = np.ascontiguousarray(self.positions, dtype=complex)
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)
        if pos.shape != (n, n * m):
            raise ValueError(f"expected shape {(n, n * m)}, got {pos.shape}")

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_bodies * self.samples_per_unit) / self.samples_per_unit


def to_dofs(fund: FundamentalPath) -> np.ndarray:
    """Flatten to the free coordinates: all of x0, then interior y0."""
    return np.concatenate([fund.x0, fund.y0[1:-1]])


def from_dofs(n_bodies: int, samples_per_unit: int, v: np.ndarray) -> FundamentalPath:
    """Inverse of ``to_dofs``; the pinned y endpoints are restored as 0."""
    v = np.asarray(v, dtype=float)
    n_nodes = n_bodies * samples_per_unit // 2 + 1
    if v.shape != (2 * n_nodes - 2,):
        raise ValueError(f"expected {2 * n_nodes - 2} dofs, got {v.shape}")
    y0 = np.zeros(n_nodes)
    y0[1:-1] = v[n_nodes:]
    return FundamentalPath(n_bodies, samples_per_unit, v[:n_nodes], y0)


def n_dofs(n_bodies: int, samples_per_unit: int) -> int:
    return 2 * (n_bodies * samples_per_unit // 2 + 1) - 2


def seed(
    n_bodies: int,
    omega: SignVector,
    amplitude: float = 0.5,
    spread: float = 0.5,
    samples_per_unit: int = DEFAULT_SAMPLES_PER_UNIT,
) -> FundamentalPath:
    """Feasible starting path realizing the sign pattern of ``omega``.

    x0 rises linearly from -spread*N/4 to +spread*N/4; y0 is the clamped
    cubic through amplitude*s_j at every half-integer node and 0 at both
    endpoints.  The result strictly satisfies the monotone, boundary and
    sign constraints.
    """
    if omega.n_bodies != n_bodies:
        raise ValueError("sign vector does not match n_bodies")
    if amplitude <= 0 or spread <= 0:
        raise ValueError("amplitude and spread must be positive")
    n, m = n_bodies, samples_per_unit
    t = np.arange(n * m // 2 + 1) / m
    x0 = spread * (t - n / 4.0)
    knots = np.arange(n + 1) / 2.0
    values = np.concatenate([[0.0], amplitude * np.asarray(omega.signs, float), [0.0]])
    y0 = CubicSpline(knots, values, bc_type="clamped")(t)
    y0[0] = 0.0
    y0[-1] = 0.0
    return FundamentalPath(n, m, x0, y0)


def resample(fund: FundamentalPath, m_new: int) -> FundamentalPath:
    """Linear interpolation onto a grid with m_new samples per unit."""
    if m_new < 2 or m_new % 2:
        raise ValueError(f"m_new must be even and >= 2, got {m_new}")
    if m_new == fund.samples_per_unit:
        return fund
    t_new = np.arange(fund.n_bodies * m_new // 2 + 1) / m_new
    x0 = np.interp(t_new, fund.times, fund.x0)
    y0 = np.interp(t_new, fund.times, fund.y0)
    y0[0] = 0.0
    y0[-1] = 0.0
    return FundamentalPath(fund.n_bodies, m_new, x0, y0)


def path_to_dict(fund: FundamentalPath) -> dict:
    """JSON-ready checkpoint form {n, m, x0, y0}."""
    return {
        "n": fund.n_bodies,
        "m": fund.samples_per_unit,
        "x0": fund.x0.tolist(),
        "y0": fund.y0.tolist(),
    }


def path_from_dict(data: dict) -> FundamentalPath:
    return FundamentalPath(
        int(data["n"]),
        int(data["m"]),
        np.asarray(data["x0"], dtype=float),
        np.asarray(data["y0"], dtype=float),
    )
