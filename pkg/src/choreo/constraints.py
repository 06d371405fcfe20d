"""Feasibility checks and projections for the constrained loop classes.

Three constraint families act on disjoint coordinates of the fundamental
path: prescribed vertical signs at the half-integer nodes (selecting the
topological class), monotonicity of the horizontal coordinate, and the
boundary inequality x0(0) <= 0 <= x0(N/2).  Projections onto each factor
are exact and cheap, so their composition projects onto the product set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import isotonic_regression

from .census import SignVector, hn_admissible
from .loop_model import FundamentalPath
from .symmetry import hn_symmetrize

SYMMETRY_MODES = ("DN", "HN")
MONOTONE_MODES = ("global", "per_interval")


class ProjectionError(RuntimeError):
    """Composite projection failed to reach a fixed point."""


@dataclass(frozen=True)
class ConstraintConfig:
    omega: SignVector
    symmetry_mode: str = "DN"
    delta_top: float = 0.0
    monotone_mode: str = "global"

    def __post_init__(self):
        if self.symmetry_mode not in SYMMETRY_MODES:
            raise ValueError(f"symmetry_mode must be one of {SYMMETRY_MODES}")
        if self.monotone_mode not in MONOTONE_MODES:
            raise ValueError(f"monotone_mode must be one of {MONOTONE_MODES}")
        if self.delta_top < 0:
            raise ValueError("delta_top must be >= 0")
        if self.symmetry_mode == "HN" and not hn_admissible(self.omega):
            raise ValueError(
                f"sign vector {self.omega} is not admissible for the HN symmetry"
            )


@dataclass(frozen=True)
class TopologicalCheck:
    ok: bool
    worst_index: int  # half-integer index j of the worst node
    margin: float  # min over j of s_j * y0(j/2) - delta


@dataclass(frozen=True)
class MonotoneCheck:
    ok: bool
    worst_violation: float
    margin: float


@dataclass(frozen=True)
class BoundaryCheck:
    ok: bool
    margin: float


@dataclass(frozen=True)
class FeasibilityReport:
    topological: TopologicalCheck
    monotone: MonotoneCheck
    boundary: BoundaryCheck

    @property
    def all_ok(self) -> bool:
        return self.topological.ok and self.monotone.ok and self.boundary.ok

    @property
    def margins(self) -> dict[str, float]:
        return {
            "topological": self.topological.margin,
            "monotone": self.monotone.margin,
            "boundary": self.boundary.margin,
        }


def check_topological(
    fund: FundamentalPath, omega: SignVector, delta_top: float = 0.0
) -> TopologicalCheck:
    """Signed vertical values at the half-integer nodes, with slack delta_top.

    The constraint is closed: equality at zero passes when delta_top = 0.
    """
    signs = np.asarray(omega.signs, dtype=float)
    nodes = np.array([fund.half_node(j) for j in range(1, fund.n_bodies)])
    slack = signs * fund.y0[nodes] - delta_top
    worst = int(np.argmin(slack))
    return TopologicalCheck(bool(slack[worst] >= 0.0), worst + 1, float(slack[worst]))


def check_monotone(fund: FundamentalPath, mode: str = "global") -> MonotoneCheck:
    """Monotonicity of x0: globally nondecreasing, or confined per half-interval."""
    x = fund.x0
    if mode == "global":
        diffs = np.diff(x)
        margin = float(diffs.min())
        return MonotoneCheck(margin >= 0.0, max(0.0, -margin), margin)
    if mode != "per_interval":
        raise ValueError(f"unknown monotone mode {mode!r}")
    half = fund.samples_per_unit // 2
    worst = 0.0
    for j in range(fund.n_bodies):
        seg = x[j * half: (j + 1) * half + 1]
        worst = max(worst, float(seg[0] - seg.min()), float(seg.max() - seg[-1]),
                    float(seg[0] - seg[-1]))
    return MonotoneCheck(worst <= 0.0, worst, -worst)


def check_boundary(fund: FundamentalPath) -> BoundaryCheck:
    """Closed inequality x0(0) <= 0 <= x0(N/2)."""
    margin = float(min(-fund.x0[0], fund.x0[-1]))
    return BoundaryCheck(margin >= 0.0, margin)


def feasibility_report(fund: FundamentalPath, config: ConstraintConfig) -> FeasibilityReport:
    return FeasibilityReport(
        check_topological(fund, config.omega, config.delta_top),
        check_monotone(fund, config.monotone_mode),
        check_boundary(fund),
    )


def project_monotone(x) -> np.ndarray:
    """Euclidean projection onto nondecreasing sequences (pool adjacent violators)."""
    return isotonic_regression(np.asarray(x, dtype=float), increasing=True).x.copy()


def project_topological(
    fund: FundamentalPath, omega: SignVector, delta_top: float = 0.0
) -> FundamentalPath:
    """Clamp the half-integer node values to the required signs."""
    y = fund.y0.copy()
    for j in range(1, fund.n_bodies):
        i = fund.half_node(j)
        s = omega.signs[j - 1]
        y[i] = s * max(s * y[i], delta_top)
    return FundamentalPath(fund.n_bodies, fund.samples_per_unit, fund.x0, y)


def recenter(fund: FundamentalPath) -> FundamentalPath:
    """Shift x0 so that x0(0) = -x0(N/2), fixing the translation freedom."""
    shift = 0.5 * (fund.x0[0] + fund.x0[-1])
    return FundamentalPath(
        fund.n_bodies, fund.samples_per_unit, fund.x0 - shift, fund.y0
    )


def project_feasible(fund: FundamentalPath, config: ConstraintConfig) -> FundamentalPath:
    """Composite projection onto the feasible set of ``config``.

    Order: monotone cone on x0, sign clamp on y0, recenter, then (in HN
    mode) symmetrize.  Symmetrization commutes with the first three on
    admissible sign vectors, so a fixed point is reached in one or two
    passes; three failures raise.
    """
    current = fund
    for _ in range(3):
        x = project_monotone(current.x0)
        step = FundamentalPath(fund.n_bodies, fund.samples_per_unit, x, current.y0)
        step = project_topological(step, config.omega, config.delta_top)
        step = recenter(step)
        if config.symmetry_mode == "HN":
            step = hn_symmetrize(step)
        if feasibility_report(step, config).all_ok and _hn_fixed(step, config):
            return step
        current = step
    raise ProjectionError("no fixed point after 3 projection passes")


def _hn_fixed(fund: FundamentalPath, config: ConstraintConfig, tol: float = 1e-12) -> bool:
    if config.symmetry_mode != "HN":
        return True
    sym = hn_symmetrize(fund)
    err = max(
        float(np.abs(sym.x0 - fund.x0).max()),
        float(np.abs(sym.y0 - fund.y0).max()),
    )
    return err <= tol
