"""Lagrangian action of the discretized loop and its exact gradient.

The action over one full period is the time integral of kinetic plus
(negative) potential energy,

    K = 1/2 sum_j |dz_j/dt|^2,    U = sum_{j<k} (|z_j - z_k|^2 + eps^2)^(-alpha/2),

discretized on the uniform periodic grid: the potential by the composite
trapezoid rule at the nodes, the kinetic energy by cell-wise forward
differences (the exact energy of the piecewise-linear path, a midpoint
rule, also second order).  The cell-based kinetic term keeps the two grid
parities coupled, so stationary points of the discrete action satisfy the
standard three-point discretization of the equations of motion; a
node-based central-difference velocity would split the grid into two
independent sublattices whose minimizers drift apart by O(h^2), leaving
an O(1) three-point residual.  Because every body samples the same closed
curve with an index shift, both terms collapse to sums over the curve's
period samples: the kinetic integrand repeats N times, and the pair at
index distance d contributes with multiplicity N - d.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .loop_model import FundamentalPath
from .symmetry import z0_period_samples


class CollisionAtNodeError(RuntimeError):
    """Two bodies coincide at a grid node with zero softening."""


class InfeasiblePathError(ValueError):
    """Path violates a precondition of the requested evaluation."""


@dataclass(frozen=True)
class ActionBreakdown:
    kinetic: float
    potential: float
    total: float


@dataclass(frozen=True)
class PotentialConfig:
    """Potential exponent alpha, softening eps, and a disable switch.

    ``strength`` scales the whole potential term; 0 leaves pure kinetic
    energy (used by sanity tests only).
    """

    alpha: float = 1.0
    softening: float = 0.0
    strength: float = 1.0

    def __post_init__(self):
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")
        if self.softening < 0:
            raise ValueError(f"softening must be >= 0, got {self.softening}")
        if self.strength < 0:
            raise ValueError(f"strength must be >= 0, got {self.strength}")


def action_and_gradient(
    fund: FundamentalPath, cfg: PotentialConfig = PotentialConfig()
) -> tuple[ActionBreakdown, np.ndarray, float]:
    """Action breakdown, exact gradient w.r.t. the dof vector, min separation.

    The gradient is the derivative of the discretized action itself (chain
    rule through the equivariant assembly, the central differences and the
    trapezoid weights), so it agrees with finite differences of ``action``
    to rounding.
    """
    n, m = fund.n_bodies, fund.samples_per_unit
    h = 1.0 / m
    total_nodes = n * m
    u = z0_period_samples(fund)

    step = np.roll(u, -1) - u
    kinetic = (n / (2.0 * h)) * float(np.sum(step.real**2 + step.imag**2))
    grad_u = (n / h) * (2.0 * u - np.roll(u, 1) - np.roll(u, -1))

    eps2 = cfg.softening**2
    potential = 0.0
    min_sep2 = math.inf
    for d in range(1, n):
        sep = u - np.roll(u, -d * m)
        r2 = sep.real**2 + sep.imag**2
        min_sep2 = min(min_sep2, float(r2.min()))
        if cfg.strength == 0.0:
            continue
        if eps2 == 0.0 and r2.min() == 0.0:
            raise CollisionAtNodeError(
                f"coincident bodies at a node (index distance {d})"
            )
        w = (r2 + eps2) ** (-cfg.alpha / 2.0)
        potential += (n - d) * float(np.sum(w))
        pair_grad = (-cfg.alpha * cfg.strength) * (r2 + eps2) ** (
            -(cfg.alpha + 2.0) / 2.0
        ) * sep
        grad_u += h * (n - d) * (pair_grad - np.roll(pair_grad, d * m))
    potential *= h * cfg.strength

    half = total_nodes // 2
    gx = np.empty(half + 1)
    gx[0] = grad_u[0].real
    gx[-1] = grad_u[half].real
    back = grad_u[half + 1:][::-1]
    gx[1:-1] = grad_u[1:half].real + back.real
    gy = grad_u[1:half].imag - back.imag
    grad = np.concatenate([gx, gy])

    breakdown = ActionBreakdown(kinetic, potential, kinetic + potential)
    return breakdown, grad, math.sqrt(min_sep2)


def action(fund: FundamentalPath, cfg: PotentialConfig = PotentialConfig()) -> ActionBreakdown:
    """Total discretized action over one full period, split K / U."""
    return action_and_gradient(fund, cfg)[0]


def gradient(fund: FundamentalPath, cfg: PotentialConfig = PotentialConfig()) -> np.ndarray:
    """Exact gradient of the discretized action w.r.t. ``to_dofs`` coordinates."""
    return action_and_gradient(fund, cfg)[1]


def min_separation(fund: FundamentalPath) -> float:
    """Smallest pairwise body distance over all grid nodes."""
    return action_and_gradient(fund, PotentialConfig(strength=0.0))[2]


@dataclass(frozen=True)
class CoercivityCheck:
    action_total: float
    h1_bound: float
    satisfied: bool


def coercivity_check(fund: FundamentalPath) -> CoercivityCheck:
    """Check action >= ||z||_H1^2 / (2 (N^2 + 1)) on the discrete grid.

    Requires the boundary inequality x0(0) <= 0 <= x0(N/2) (which supplies
    the zero of x0 the bound rests on); the vertical pin y0(0) = 0 holds by
    construction.
    """
    if not (fund.x0[0] <= 0.0 <= fund.x0[-1]):
        raise InfeasiblePathError("boundary inequality x0(0) <= 0 <= x0(N/2) violated")
    n, m = fund.n_bodies, fund.samples_per_unit
    h = 1.0 / m
    u = z0_period_samples(fund)
    v = (np.roll(u, -1) - u) / h  # same cell-wise energy as the action's K term
    h1 = n * h * float(np.sum(u.real**2 + u.imag**2 + v.real**2 + v.imag**2))
    bound = h1 / (2.0 * (n**2 + 1))
    total = action(fund).total
    return CoercivityCheck(total, bound, total >= bound)


# ---------------------------------------------------------------------------
# Rotating-polygon oracle: the one closed-form choreography.

def ngon_radius(n_bodies: int, alpha: float = 1.0) -> float:
    """Radius of the rigidly rotating regular N-gon with period N.

    Balances centripetal acceleration R*Omega^2 (Omega = 2 pi / N) against
    the mutual attraction; for alpha = 1 this is
    R*Omega^2 = (1/(4 R^2)) sum_k csc(pi k / N).
    """
    omega_rot = 2.0 * math.pi / n_bodies
    s = sum(
        math.sin(math.pi * k / n_bodies) ** (-alpha) for k in range(1, n_bodies)
    )
    return (alpha * s / (2.0 ** (alpha + 1) * omega_rot**2)) ** (1.0 / (alpha + 2.0))


def ngon_action_exact(n_bodies: int, alpha: float = 1.0) -> ActionBreakdown:
    """Closed-form full-period action of the rotating N-gon."""
    omega_rot = 2.0 * math.pi / n_bodies
    radius = ngon_radius(n_bodies, alpha)
    kinetic = n_bodies * (n_bodies / 2.0) * (radius * omega_rot) ** 2
    potential = n_bodies * sum(
        (n_bodies - d) / (2.0 * radius * math.sin(math.pi * d / n_bodies)) ** alpha
        for d in range(1, n_bodies)
    )
    return ActionBreakdown(kinetic, potential, kinetic + potential)


def ngon_fundamental_path(
    n_bodies: int, samples_per_unit: int, alpha: float = 1.0
) -> FundamentalPath:
    """Sampled fundamental curve of the rotating N-gon.

    Oriented so the curve runs left to right through the upper half plane:
    z0(t) = -R exp(-i Omega t), which makes x0 increasing and realizes the
    all-plus sign class.
    """
    radius = ngon_radius(n_bodies, alpha)
    omega_rot = 2.0 * math.pi / n_bodies
    t = np.arange(n_bodies * samples_per_unit // 2 + 1) / samples_per_unit
    x0 = -radius * np.cos(omega_rot * t)
    y0 = radius * np.sin(omega_rot * t)
    y0[0] = 0.0
    y0[-1] = 0.0
    return FundamentalPath(n_bodies, samples_per_unit, x0, y0)
