import numpy as np
import pytest

from choreo.census import SignVector
from choreo.constraints import ConstraintConfig, project_feasible
from choreo.loop_model import FundamentalPath, seed


def random_sign_vector(n_bodies, rng) -> SignVector:
    signs = tuple(int(s) for s in rng.choice([-1, 1], n_bodies - 1))
    return SignVector(n_bodies, signs)


def smooth_noise(n_nodes, rng, scale, zero_ends=False, n_modes=6):
    """Band-limited random bump, optionally pinned to zero at both ends."""
    s = np.linspace(0.0, np.pi, n_nodes)
    out = np.zeros(n_nodes)
    for k in range(1, n_modes + 1):
        out += rng.normal() / k * np.sin(k * s)
        if not zero_ends:
            out += rng.normal() / k * np.cos(k * s)
    return scale * out


def random_feasible_path(n_bodies, m, rng, noise=0.1):
    """Random strictly feasible path: perturbed seed, re-projected."""
    omega = random_sign_vector(n_bodies, rng)
    base = seed(
        n_bodies, omega,
        amplitude=0.3 + 0.5 * rng.random(),
        spread=0.3 + 0.5 * rng.random(),
        samples_per_unit=m,
    )
    x = base.x0 + smooth_noise(base.n_nodes, rng, noise)
    y = base.y0 + smooth_noise(base.n_nodes, rng, noise, zero_ends=True)
    y[0] = 0.0
    y[-1] = 0.0
    perturbed = FundamentalPath(n_bodies, m, x, y)
    cfg = ConstraintConfig(omega)
    return project_feasible(perturbed, cfg), omega


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
