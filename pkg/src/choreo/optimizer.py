"""Constrained action minimization by annealed projected gradient descent.

Each iteration steps along the negative action gradient and projects back
onto the feasible set (monotone cone, sign clamps, recentering, optional
extra symmetrization).  Step sizes start from a spectral (Barzilai-Borwein)
estimate and backtrack under an Armijo test on the projected arc, so the
action never increases at fixed softening.  The potential is annealed
through a decreasing softening schedule ending at the exact value; near
collisions at zero softening the run refuses and reports failure instead
of regularizing.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .action import (
    ActionBreakdown,
    CollisionAtNodeError,
    PotentialConfig,
    action_and_gradient,
)
from .census import SignVector
from .constraints import (
    ConstraintConfig,
    FeasibilityReport,
    feasibility_report,
    project_feasible,
)
from .loop_model import FundamentalPath, from_dofs, resample, seed, to_dofs

NEAR_COLLISION_SEPARATION = 1e-6
DEGENERATE_WIDTH = 1e-8
_MAX_BACKTRACKS = 60


class InfeasibleStartError(ValueError):
    """Starting path violates the configured constraints."""


class AllRunsFailedError(RuntimeError):
    """No multistart run converged to a feasible minimizer."""

    def __init__(self, results):
        super().__init__("all multistart runs failed")
        self.results = results


@dataclass(frozen=True)
class SolveConfig:
    n_bodies: int
    omega: SignVector
    samples_per_unit: int = 64
    symmetry_mode: str = "DN"
    # Softening above ~1e-2 caps the collision barrier below the kinetic
    # saving of a collapsing lobe and lets iterates tunnel into collision.
    epsilon_schedule: tuple[float, ...] = (1e-2, 1e-3, 0.0)
    alpha: float = 1.0
    initial_step: float = 0.05
    armijo_c1: float = 1e-4
    backtrack_ratio: float = 0.5
    grad_tol: float = 1e-6  # per-sqrt-dof; the stop test scales by sqrt(#dofs)
    max_iter_per_stage: int = 5000
    seed_count: int = 1
    seed_amplitudes: tuple[float, ...] = (0.5, 0.3, 0.8)
    rng_seed: int = 0

    def __post_init__(self):
        if self.omega.n_bodies != self.n_bodies:
            raise ValueError("sign vector does not match n_bodies")
        eps = self.epsilon_schedule
        if not eps or eps[-1] != 0.0:
            raise ValueError("epsilon schedule must end at 0")
        if any(a <= b for a, b in zip(eps, eps[1:])):
            raise ValueError("epsilon schedule must be strictly decreasing")
        if self.grad_tol <= 0 or self.initial_step <= 0:
            raise ValueError("tolerances and steps must be positive")
        if not 0 < self.backtrack_ratio < 1:
            raise ValueError("backtrack_ratio must be in (0, 1)")
        if self.seed_count < 1:
            raise ValueError("seed_count must be >= 1")
        # constructing the constraint config validates mode + admissibility
        self.constraint_config()

    def constraint_config(self) -> ConstraintConfig:
        return ConstraintConfig(self.omega, self.symmetry_mode, 0.0, "global")


@dataclass(frozen=True)
class SolveResult:
    config: SolveConfig
    path: FundamentalPath
    breakdown: ActionBreakdown
    iterations: int
    converged: bool
    stage_traces: tuple[tuple[float, ...], ...]  # action values per softening stage
    feasibility: FeasibilityReport
    pg_norm: float
    failure: str | None = None

    @property
    def trace(self) -> tuple[float, ...]:
        return tuple(v for stage in self.stage_traces for v in stage)


def minimize(cfg: SolveConfig, start: FundamentalPath) -> SolveResult:
    """Minimize the action from a feasible start through the softening stages."""
    n, m = cfg.n_bodies, cfg.samples_per_unit
    if start.n_bodies != n or start.samples_per_unit != m:
        raise ValueError("start path does not match the solve configuration")
    ccfg = cfg.constraint_config()
    if not feasibility_report(start, ccfg).all_ok:
        raise InfeasibleStartError("starting path is infeasible")

    def project(w: np.ndarray) -> np.ndarray:
        return to_dofs(project_feasible(from_dofs(n, m, w), ccfg))

    v = project(to_dofs(start))
    tol = cfg.grad_tol * math.sqrt(v.size)
    stage_traces: list[tuple[float, ...]] = []
    iterations = 0
    failure = None
    stage_converged = False
    pg_norm = math.inf

    for eps in cfg.epsilon_schedule:
        pcfg = PotentialConfig(cfg.alpha, eps)
        try:
            breakdown, grad, min_sep = action_and_gradient(from_dofs(n, m, v), pcfg)
        except CollisionAtNodeError:
            failure = "collision-at-node"
            break
        if eps == 0.0 and min_sep < NEAR_COLLISION_SEPARATION:
            failure = "near-collision"
            break
        value = breakdown.total
        if not (math.isfinite(value) and np.isfinite(grad).all()):
            failure = "non-finite-action"
            break
        trace = [value]
        stage_traces.append(())
        stage_converged = False
        bb_step = None

        for _ in range(cfg.max_iter_per_stage):
            pg_norm = float(np.linalg.norm(v - project(v - grad)))
            if pg_norm <= tol:
                stage_converged = True
                break

            step = bb_step if bb_step is not None else cfg.initial_step
            accepted = None
            for _ in range(_MAX_BACKTRACKS):
                try:
                    w = project(v - step * grad)
                    decrease = float(np.dot(grad, v - w))
                    bd_w, grad_w, sep_w = action_and_gradient(
                        from_dofs(n, m, w), pcfg
                    )
                except (CollisionAtNodeError, ValueError):
                    bd_w = None
                if (
                    bd_w is not None
                    and math.isfinite(bd_w.total)
                    and np.isfinite(grad_w).all()
                    and decrease > 0.0
                    and bd_w.total <= value - cfg.armijo_c1 * decrease
                ):
                    accepted = (w, bd_w, grad_w, sep_w)
                    break
                step *= cfg.backtrack_ratio
                if step < 1e-16:
                    break
            if accepted is None:
                break  # no acceptable step left at this softening
            w, bd_w, grad_w, sep_w = accepted
            dv = w - v
            dg = grad_w - grad
            curvature = float(np.dot(dv, dg))
            bb_step = (
                min(max(float(np.dot(dv, dv)) / curvature, 1e-8), 1e2)
                if curvature > 0
                else None
            )
            v, value, grad, min_sep = w, bd_w.total, grad_w, sep_w
            trace.append(value)
            iterations += 1
            if eps == 0.0 and min_sep < NEAR_COLLISION_SEPARATION:
                failure = "near-collision"
                break
        stage_traces[-1] = tuple(trace)
        if failure is not None:
            break

    path = from_dofs(n, m, v)
    if failure is None and float(path.x0[-1] - path.x0[0]) < DEGENERATE_WIDTH:
        failure = "degenerate-collinear"
    final_feasibility = feasibility_report(path, ccfg)
    try:
        final_breakdown = action_and_gradient(path, PotentialConfig(cfg.alpha, 0.0))[0]
    except CollisionAtNodeError:
        failure = failure or "collision-at-node"
        final_breakdown = action_and_gradient(
            path, PotentialConfig(cfg.alpha, 0.0, strength=0.0)
        )[0]
    converged = failure is None and stage_converged and final_feasibility.all_ok
    return SolveResult(
        config=cfg,
        path=path,
        breakdown=final_breakdown,
        iterations=iterations,
        converged=converged,
        stage_traces=tuple(stage_traces),
        feasibility=final_feasibility,
        pg_norm=pg_norm,
        failure=failure,
    )


def default_seeds(cfg: SolveConfig) -> list[FundamentalPath]:
    """Deterministic feasible starting paths for ``multistart``."""
    ccfg = cfg.constraint_config()
    starts = []
    for k in range(cfg.seed_count):
        rng = np.random.default_rng([cfg.rng_seed, k])
        amplitude = cfg.seed_amplitudes[k % len(cfg.seed_amplitudes)]
        amplitude *= 0.9 + 0.2 * rng.random()
        spread = 0.4 + 0.4 * rng.random()
        start = seed(cfg.n_bodies, cfg.omega, amplitude, spread, cfg.samples_per_unit)
        starts.append(project_feasible(start, ccfg))
    return starts


@dataclass(frozen=True)
class MultistartOutcome:
    best: SolveResult
    results: tuple[SolveResult, ...]


def multistart(cfg: SolveConfig, max_workers: int | None = None) -> MultistartOutcome:
    """Run ``minimize`` from every seed; keep the least-action converged run.

    Results are reduced in seed-index order, so the outcome does not depend
    on the worker count.
    """
    starts = default_seeds(cfg)
    if max_workers is not None and max_workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(lambda s: minimize(cfg, s), starts))
    else:
        results = [minimize(cfg, s) for s in starts]
    best = None
    for res in results:
        if res.converged and res.feasibility.all_ok:
            if best is None or res.breakdown.total < best.breakdown.total:
                best = res
    if best is None:
        raise AllRunsFailedError(tuple(results))
    return MultistartOutcome(best, tuple(results))


def refine(result: SolveResult, m_new: int) -> SolveResult:
    """Re-minimize a solved path on a finer grid, exact potential only.

    At the same grid this re-runs the zero-softening stage from the solved
    path, which is idempotent up to the gradient tolerance.
    """
    cfg = result.config
    if m_new < cfg.samples_per_unit or m_new % 2:
        raise ValueError("m_new must be even and at least the current grid")
    fine_cfg = replace(cfg, samples_per_unit=m_new, epsilon_schedule=(0.0,))
    start = project_feasible(
        resample(result.path, m_new), fine_cfg.constraint_config()
    )
    return minimize(fine_cfg, start)
