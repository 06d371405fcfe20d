"""A-posteriori certification of candidate choreographies.

A converged path is only trusted after independent checks: the sampled
second derivative of every body must match the gravitational force field
(Euler-Lagrange residual), bodies must stay separated, the horizontal
coordinate must be strictly monotone with positive interior velocity and
flat endpoints, the vertical signs must reproduce the requested class,
the axis-crossing structure must be stable, and forward integration of
the equations of motion from the candidate's initial data must return to
the sampled path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .census import SignVector
from .loop_model import FullLoop, FundamentalPath
from .symmetry import reconstruct, z0_period_samples

_MAX_ZERO_RUN = 2


class VerifyError(RuntimeError):
    """A verification step cannot produce a trustworthy answer."""


class PlateauError(VerifyError):
    """Sign of a sampled curve is indeterminate over a zero plateau."""


def pairwise_separations(full: FullLoop) -> np.ndarray:
    """Distances |z_j - z_k| for j < k, shape (n_pairs, n_times)."""
    z = full.positions
    rows = [np.abs(z[j] - z[k]) for j in range(full.n_bodies) for k in range(j + 1, full.n_bodies)]
    return np.stack(rows)


def acceleration_field(z_now: np.ndarray, alpha: float = 1.0) -> np.ndarray:
    """Gravitational acceleration per body; first axis indexes bodies."""
    n = z_now.shape[0]
    acc = np.zeros_like(z_now)
    for j in range(n):
        for k in range(n):
            if k == j:
                continue
            d = z_now[j] - z_now[k]
            acc[j] += -alpha * d / np.abs(d) ** (alpha + 2.0)
    return acc


def el_residual(full: FullLoop, alpha: float = 1.0) -> float:
    """Normalized Euler-Lagrange residual, max over bodies and grid nodes.

    Compares the second central difference of the samples with the force
    field; the normalization max(1, |force|) keeps the threshold scale-free.
    """
    z = full.positions
    h = 1.0 / full.samples_per_unit
    sep = pairwise_separations(full)
    if sep.min() == 0.0:
        raise VerifyError("collision at a grid node")
    acc = (np.roll(z, -1, axis=1) - 2.0 * z + np.roll(z, 1, axis=1)) / h**2
    force = acceleration_field(z, alpha)
    scale = np.maximum(1.0, np.abs(force))
    return float((np.abs(acc - force) / scale).max())


@dataclass(frozen=True)
class MonotoneVelocityMargins:
    monotone_margin: float  # min consecutive increment of x0
    velocity_margin: float  # min interior central-difference velocity
    endpoint_velocity: tuple[float, float]  # one-sided |dx0/dt| at 0 and N/2


def strict_monotone_and_velocity(fund: FundamentalPath) -> MonotoneVelocityMargins:
    """Margins for strict monotonicity and the velocity sign property.

    Interior velocities use central differences; the endpoints use one-sided
    differences (the symmetric extension would make central ones vanish
    identically, hiding a genuinely sloped endpoint).
    """
    x = fund.x0
    h = 1.0 / fund.samples_per_unit
    monotone_margin = float(np.diff(x).min())
    interior = (x[2:] - x[:-2]) / (2.0 * h)
    velocity_margin = float(interior.min()) if interior.size else math.inf
    endpoints = (abs(float(x[1] - x[0])) / h, abs(float(x[-1] - x[-2])) / h)
    return MonotoneVelocityMargins(monotone_margin, velocity_margin, endpoints)


def sign_pattern(fund: FundamentalPath) -> SignVector:
    """Read the realized sign class off the half-integer node values."""
    signs = []
    for j in range(1, fund.n_bodies):
        y = fund.y0[fund.half_node(j)]
        if y == 0.0:
            raise VerifyError(f"zero vertical coordinate at half-integer node {j}")
        signs.append(1 if y > 0 else -1)
    return SignVector(fund.n_bodies, tuple(signs))


def count_transversal_crossings(samples) -> int:
    """Sign changes of a sampled curve, zeros resolved by their neighbors.

    An isolated zero sample between opposite signs counts as one crossing;
    a zero (or short zero run) between equal signs is a tangential touch and
    does not count.  Zero runs longer than two samples are refused.
    """
    y = np.asarray(samples, dtype=float)
    signs = np.sign(y)
    nonzero = signs[signs != 0.0]
    if nonzero.size == 0:
        raise PlateauError("all samples are zero")
    run = 0
    for s in signs:
        run = run + 1 if s == 0.0 else 0
        if run > _MAX_ZERO_RUN:
            raise PlateauError(f"zero plateau of {run} samples")
    return int(np.count_nonzero(nonzero[1:] != nonzero[:-1]))


def crossing_counts(full: FullLoop) -> tuple[int, ...]:
    """Per-body transversal axis crossings over the first half time unit.

    Counts crossings on [0, 1/2): one sample of margin is taken on the left
    so a transversal zero exactly at t = 0 (a body sitting on the axis while
    moving through it) is attributed to the interval.
    """
    m = full.samples_per_unit
    total = full.n_bodies * m
    idx = np.arange(-1, m // 2 + 1) % total
    return tuple(
        count_transversal_crossings(full.positions[j, idx].imag)
        for j in range(full.n_bodies)
    )


def bubble_count(fund: FundamentalPath) -> int:
    """Number of bubbles of the closed curve: axis crossings over a period / 2.

    Transversal crossings of the curve's vertical coordinate are counted
    cyclically over [0, N); the rigid polygon (crossings only at t = 0 and
    t = N/2) gives one bubble.
    """
    y = z0_period_samples(fund).imag
    signs = np.sign(y)
    nonzero = signs[signs != 0.0]
    if nonzero.size == 0:
        raise PlateauError("curve lies on the real axis")
    run, max_run = 0, 0
    for s in np.concatenate([signs, signs[: _MAX_ZERO_RUN + 1]]):
        run = run + 1 if s == 0.0 else 0
        max_run = max(max_run, run)
    if max_run > _MAX_ZERO_RUN:
        raise PlateauError(f"zero plateau of {max_run} samples")
    flips = int(np.count_nonzero(nonzero != np.roll(nonzero, 1)))
    assert flips % 2 == 0
    return flips // 2


def hn_identities(full: FullLoop) -> float:
    """Error of the extra half-period relation on a sampled loop.

    For even N the curve must satisfy z0(t + N/2) = -z0(t); for odd N,
    z0(t + N/2) = -conj(z0(t)).  For N = 4 the antipodal body identities
    z2 = -z0 and z3 = -z1 are included in the maximum.
    """
    z0 = full.positions[0]
    half = z0.shape[0] // 2
    shifted = np.roll(z0, -half)
    if full.n_bodies % 2 == 0:
        err = float(np.abs(shifted + z0).max())
    else:
        err = float(np.abs(shifted + np.conj(z0)).max())
    if full.n_bodies == 4:
        z = full.positions
        err = max(
            err,
            float(np.abs(z[2] + z[0]).max()),
            float(np.abs(z[3] + z[1]).max()),
        )
    return err


def central_difference_velocities(full: FullLoop) -> np.ndarray:
    h = 1.0 / full.samples_per_unit
    z = full.positions
    return (np.roll(z, -1, axis=1) - np.roll(z, 1, axis=1)) / (2.0 * h)


def integrate_return(
    full: FullLoop,
    steps: int | None = None,
    velocities: np.ndarray | None = None,
    alpha: float = 1.0,
    rtol: float = 1e-10,
    atol: float = 1e-12,
) -> float:
    """Forward-integrate the equations of motion and compare with the samples.

    Starts from the candidate's positions at t = 0 with velocities from
    central differences (or supplied exactly), integrates with adaptive
    RK45 over one full period, and returns the maximum body-position
    deviation at the compared grid times (``steps`` evenly spaced times,
    default: every grid node).
    """
    n = full.n_bodies
    z0 = full.positions[:, 0]
    v0 = (
        central_difference_velocities(full)[:, 0]
        if velocities is None
        else np.asarray(velocities, dtype=complex)
    )

    def rhs(_t, state):
        z = state[:n] + 1j * state[n: 2 * n]
        acc = acceleration_field(z, alpha)
        return np.concatenate(
            [state[2 * n: 3 * n], state[3 * n:], acc.real, acc.imag]
        )

    state0 = np.concatenate([z0.real, z0.imag, v0.real, v0.imag])
    total = n * full.samples_per_unit
    if steps is None:
        eval_idx = np.arange(total)
    else:
        eval_idx = np.linspace(0, total - 1, steps).round().astype(int)
    t_eval = eval_idx / full.samples_per_unit
    sol = solve_ivp(
        rhs, (0.0, float(n)), state0, method="RK45",
        t_eval=t_eval, rtol=rtol, atol=atol,
    )
    if not sol.success:
        raise VerifyError(f"integration failed: {sol.message}")
    z_sim = sol.y[:n] + 1j * sol.y[n: 2 * n]
    z_ref = full.positions[:, eval_idx]
    return float(np.abs(z_sim - z_ref).max())


def fit_power_exponent(times, values, t_center: float) -> float:
    """Least-squares slope of log(values) against log|times - t_center|."""
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    mask = (np.abs(t - t_center) > 0) & (v > 0)
    if mask.sum() < 3:
        raise VerifyError("not enough samples for a power-law fit")
    return float(np.polyfit(np.log(np.abs(t[mask] - t_center)), np.log(v[mask]), 1)[0])


@dataclass(frozen=True)
class SundmanFit:
    exponent: float
    pair: tuple[int, int]
    t_closest: float
    min_separation: float


def sundman_diagnostic(
    full: FullLoop,
    window: tuple[float, float],
    separation_threshold: float = 0.05,
) -> SundmanFit:
    """Fit the near-collision scaling rho ~ |t - t_c|^p of the closest pair.

    Genuine two-body collisions scale with p = 2/3.  Diagnostic only: used
    to triage failed runs, never as a pass/fail gate.
    """
    t = full.times
    in_window = (t >= window[0]) & (t <= window[1])
    if not in_window.any():
        raise VerifyError("empty window")
    pairs = [
        (j, k)
        for j in range(full.n_bodies)
        for k in range(j + 1, full.n_bodies)
    ]
    sep = pairwise_separations(full)[:, in_window]
    flat = int(np.argmin(sep))
    pair_idx, time_idx = np.unravel_index(flat, sep.shape)
    rho_min = float(sep[pair_idx, time_idx])
    if rho_min >= separation_threshold:
        raise VerifyError(
            f"no separation below {separation_threshold} in the window"
        )
    t_win = t[in_window]
    t_c = float(t_win[time_idx])
    exponent = fit_power_exponent(t_win, sep[pair_idx], t_c)
    return SundmanFit(exponent, pairs[pair_idx], t_c, rho_min)


@dataclass(frozen=True)
class VerifyThresholds:
    """Pass/fail thresholds; defaults are calibrated for M = 512 grids."""

    el_residual: float = 1e-3
    endpoint_velocity: float = 1e-2
    return_error: float = 5e-2
    min_separation: float = 1e-3
    hn_identity: float = 1e-10

    @classmethod
    def for_grid(cls, samples_per_unit: int) -> "VerifyThresholds":
        """Scale the discretization-limited thresholds to a coarser grid.

        The residual and the return error are second order in the grid
        spacing; the endpoint velocity is first order.
        """
        f2 = (512.0 / samples_per_unit) ** 2
        return cls(
            el_residual=1e-3 * f2,
            endpoint_velocity=min(0.1, 1e-2 * (512.0 / samples_per_unit)),
            return_error=min(0.5, 5e-2 * f2),
        )


@dataclass(frozen=True)
class VerificationReport:
    el_residual_max: float
    min_separation: float
    monotone_margin: float
    velocity_margin: float
    endpoint_velocity: tuple[float, float]
    sign_pattern: SignVector
    crossing_counts: tuple[int, ...]
    bubble_count: int
    hn_identity_error: float
    return_error: float
    passed: bool
    failures: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "el_residual_max": self.el_residual_max,
            "min_separation": self.min_separation,
            "monotone_margin": self.monotone_margin,
            "velocity_margin": self.velocity_margin,
            "endpoint_velocity": list(self.endpoint_velocity),
            "sign_pattern": list(self.sign_pattern.signs),
            "crossing_counts": list(self.crossing_counts),
            "bubble_count": self.bubble_count,
            "hn_identity_error": self.hn_identity_error,
            "return_error": self.return_error,
            "passed": self.passed,
            "failures": list(self.failures),
        }


def verify_candidate(
    fund: FundamentalPath,
    expected_omega: SignVector | None = None,
    symmetry_mode: str = "DN",
    alpha: float = 1.0,
    thresholds: VerifyThresholds | None = None,
    include_return: bool = True,
) -> VerificationReport:
    """Run the whole battery on a candidate and gate it against thresholds."""
    thr = thresholds or VerifyThresholds.for_grid(fund.samples_per_unit)
    full = reconstruct(fund)
    failures = []

    residual = el_residual(full, alpha)
    if residual > thr.el_residual:
        failures.append(f"el_residual {residual:.3e} > {thr.el_residual:.3e}")

    sep = float(pairwise_separations(full).min())
    if sep < thr.min_separation:
        failures.append(f"min_separation {sep:.3e} < {thr.min_separation:.3e}")

    margins = strict_monotone_and_velocity(fund)
    if margins.monotone_margin <= 0:
        failures.append("monotone margin not positive")
    if margins.velocity_margin <= 0:
        failures.append("interior velocity not positive")
    if max(margins.endpoint_velocity) > thr.endpoint_velocity:
        failures.append("endpoint velocity above threshold")

    try:
        pattern = sign_pattern(fund)
        if expected_omega is not None and pattern != expected_omega:
            failures.append(f"sign pattern {pattern} != requested {expected_omega}")
    except VerifyError as exc:
        pattern = None
        failures.append(str(exc))

    counts = crossing_counts(full)
    bubbles = bubble_count(fund)

    hn_error = hn_identities(full)
    if symmetry_mode == "HN" and hn_error > thr.hn_identity:
        failures.append(f"hn identity error {hn_error:.3e} > {thr.hn_identity:.3e}")

    if include_return:
        ret = integrate_return(full, alpha=alpha)
        if ret > thr.return_error:
            failures.append(f"return error {ret:.3e} > {thr.return_error:.3e}")
    else:
        ret = math.nan

    return VerificationReport(
        el_residual_max=residual,
        min_separation=sep,
        monotone_margin=margins.monotone_margin,
        velocity_margin=margins.velocity_margin,
        endpoint_velocity=margins.endpoint_velocity,
        sign_pattern=pattern,
        crossing_counts=counts,
        bubble_count=bubbles,
        hn_identity_error=hn_error,
        return_error=ret,
        passed=not failures,
        failures=tuple(failures),
    )
