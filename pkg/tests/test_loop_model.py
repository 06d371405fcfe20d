import json

import numpy as np
import pytest

from choreo.census import SignVector
from choreo.constraints import ConstraintConfig, feasibility_report
from choreo.loop_model import (
    FundamentalPath,
    from_dofs,
    n_dofs,
    path_from_dict,
    path_to_dict,
    resample,
    seed,
    to_dofs,
)
from choreo.symmetry import evaluate_z0, hn_symmetrize
from conftest import random_feasible_path


def test_dof_round_trip(rng):
    f, _ = random_feasible_path(4, 16, rng)
    g = from_dofs(4, 16, to_dofs(f))
    assert np.array_equal(f.x0, g.x0)
    assert np.array_equal(f.y0, g.y0)


def test_dof_length():
    assert n_dofs(3, 4) == 12
    assert to_dofs(seed(3, SignVector(3, (1, 1)), samples_per_unit=4)).size == 12


def test_zero_dofs_give_zero_path():
    f = from_dofs(3, 8, np.zeros(n_dofs(3, 8)))
    assert not f.x0.any()
    assert not f.y0.any()
    assert f.y0[0] == 0.0 and f.y0[-1] == 0.0


def test_validation_errors():
    with pytest.raises(ValueError):
        FundamentalPath(3, 7, np.zeros(11), np.zeros(11))  # odd M
    with pytest.raises(ValueError):
        FundamentalPath(3, 4, np.zeros(6), np.zeros(6))  # wrong length
    y = np.zeros(7)
    y[0] = 0.5
    with pytest.raises(ValueError):
        FundamentalPath(3, 4, np.zeros(7), y)  # unpinned endpoint
    bad = np.zeros(7)
    bad[3] = np.nan
    with pytest.raises(ValueError):
        FundamentalPath(3, 4, bad, np.zeros(7))
    with pytest.raises(ValueError):
        from_dofs(3, 4, np.zeros(5))


def test_half_integer_times_are_nodes():
    for n in (3, 4, 5):
        for m in (4, 10, 64):
            f = seed(n, SignVector(n, (1,) * (n - 1)), samples_per_unit=m)
            for j in range(1, n):
                k = f.half_node(j)
                assert f.times[k] == pytest.approx(j / 2, abs=0)


def test_seed_is_strictly_feasible():
    for n in (3, 4, 5, 6):
        omega = SignVector(n, tuple((-1) ** j for j in range(n - 1)))
        f = seed(n, omega, amplitude=0.4, spread=0.7, samples_per_unit=32)
        rep = feasibility_report(f, ConstraintConfig(omega))
        assert rep.all_ok
        assert rep.topological.margin == pytest.approx(0.4, rel=1e-12)
        assert rep.monotone.margin > 0
        assert f.x0[0] == pytest.approx(-f.x0[-1])
        assert f.x0[0] < 0


def test_seed_sign_values():
    f = seed(3, SignVector(3, (1, 1)), amplitude=0.5, samples_per_unit=16)
    assert f.y0[f.half_node(1)] > 0
    assert f.y0[f.half_node(2)] > 0
    g = seed(3, SignVector(3, (-1, 1)), amplitude=0.5, samples_per_unit=16)
    assert g.y0[g.half_node(1)] < 0 < g.y0[g.half_node(2)]


def test_seed_survives_hn_symmetrization():
    # admissible sign patterns keep their signs after projection onto the
    # extra-symmetry subspace
    for n, signs in ((3, (-1, 1)), (4, (1, -1, 1))):
        omega = SignVector(n, signs)
        f = hn_symmetrize(seed(n, omega, samples_per_unit=32))
        for j in range(1, n):
            assert signs[j - 1] * f.y0[f.half_node(j)] > 0


def test_resample_identity_and_nesting():
    f, _ = random_feasible_path(3, 8, np.random.default_rng(1))
    assert resample(f, 8) is f
    up = resample(f, 16)
    back = resample(up, 8)
    assert np.array_equal(back.x0, f.x0)
    assert np.array_equal(back.y0, f.y0)
    assert np.all(np.diff(up.x0) >= 0)
    with pytest.raises(ValueError):
        resample(f, 9)


def test_resample_preserves_half_node_values():
    f, omega = random_feasible_path(4, 8, np.random.default_rng(2))
    up = resample(f, 20)
    for j in range(1, 4):
        assert up.y0[up.half_node(j)] == pytest.approx(f.y0[f.half_node(j)], abs=1e-15)


def test_serialization_bitwise_round_trip(rng):
    f, _ = random_feasible_path(5, 12, rng)
    doc = json.loads(json.dumps(path_to_dict(f)))
    g = path_from_dict(doc)
    assert np.array_equal(f.x0, g.x0)
    assert np.array_equal(f.y0, g.y0)
    assert (g.n_bodies, g.samples_per_unit) == (5, 12)


def test_evaluate_matches_nodes():
    f, _ = random_feasible_path(3, 16, np.random.default_rng(3))
    z = evaluate_z0(f, f.times)
    assert np.array_equal(z.real, f.x0)
    assert np.array_equal(z.imag, f.y0)
