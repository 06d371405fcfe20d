import numpy as np
import pytest

from choreo.action import ngon_fundamental_path, ngon_radius
from choreo.census import SignVector
from choreo.loop_model import FullLoop, FundamentalPath, seed
from choreo.symmetry import (
    GroupElementAction,
    IncompatibleGridError,
    apply,
    body_position,
    compose,
    dn_generators,
    evaluate_z0,
    hn_symmetrize,
    identity_action,
    reconstruct,
)
from conftest import random_feasible_path


def random_loop(n, m, rng):
    pos = rng.standard_normal((n, n * m)) + 1j * rng.standard_normal((n, n * m))
    return FullLoop(n, m, pos)


def test_generator_permutations():
    _, h3 = dn_generators(3)
    assert h3.index_perm == (2, 1, 0)  # swaps 0 and 2, fixes 1
    _, h4 = dn_generators(4)
    assert h4.index_perm == (3, 2, 1, 0)
    with pytest.raises(ValueError):
        dn_generators(2)


def test_identity_action_is_bit_exact(rng):
    loop = random_loop(4, 8, rng)
    out = apply(identity_action(4), loop)
    assert np.array_equal(out.positions, loop.positions)


def test_group_laws_on_random_loops(rng):
    for n in (3, 4, 5):
        g, h = dn_generators(n)
        loop = random_loop(n, 8, rng)
        cur = loop
        for _ in range(n):
            cur = apply(g, cur)
        assert np.abs(cur.positions - loop.positions).max() <= 1e-12
        assert np.abs(apply(h, apply(h, loop)).positions - loop.positions).max() <= 1e-12
        gh = compose(g, h)
        twice = apply(gh, apply(gh, loop))
        assert np.abs(twice.positions - loop.positions).max() <= 1e-12


def test_composition_matches_sequential_application(rng):
    g, h = dn_generators(4)
    loop = random_loop(4, 8, rng)
    lhs = apply(compose(g, h), loop)
    rhs = apply(g, apply(h, loop))
    assert np.array_equal(lhs.positions, rhs.positions)


def test_incompatible_grid_rejected(rng):
    bad = GroupElementAction(1, 0.5, "identity", (0, 1, 2))
    loop = random_loop(3, 2, rng)  # spacing 1/2: a half shift is fine
    apply(bad, loop)
    quarter = GroupElementAction(1, 1.5, "identity", (0, 1, 2))
    assert quarter.time_shift * 2 == round(quarter.time_shift * 2)
    with pytest.raises(ValueError):
        GroupElementAction(1, 0.25, "identity", (0, 1, 2))


def test_reconstructed_loop_is_equivariant(rng):
    for n in (3, 4, 5):
        f, _ = random_feasible_path(n, 16, rng)
        loop = reconstruct(f)
        g, h = dn_generators(n)
        assert np.abs(apply(g, loop).positions - loop.positions).max() <= 1e-12
        assert np.abs(apply(h, loop).positions - loop.positions).max() <= 1e-12


def test_evaluate_z0_symmetries(rng):
    f, _ = random_feasible_path(3, 32, rng)
    assert np.imag(evaluate_z0(f, 0.0)) == 0.0
    assert np.imag(evaluate_z0(f, 1.5)) == 0.0
    t = 3.0 * rng.random(64)
    lhs = evaluate_z0(f, 3.0 - t)
    rhs = np.conj(evaluate_z0(f, t))
    assert np.abs(lhs - rhs).max() <= 1e-12


def test_body_position_identities(rng):
    n = 5
    f, _ = random_feasible_path(n, 16, rng)
    t = np.linspace(0.0, 1.0, 17)
    assert np.array_equal(body_position(f, 0, t), evaluate_z0(f, t))
    for j in range(1, n):
        assert abs(body_position(f, j, 0.0) - np.conj(body_position(f, n - j, 0.0))) <= 1e-12
    half = np.linspace(0.5, 1.0, 9)
    mstar = (n - 1) // 2
    for j in range(mstar + 1):
        lhs = body_position(f, j, half)
        rhs = np.conj(body_position(f, n - 1 - j, 1.0 - half))
        assert np.abs(lhs - rhs).max() <= 1e-12
    with pytest.raises(IndexError):
        body_position(f, n, 0.0)


def test_reconstruct_constant_path_is_total_collision():
    x = np.full(3 * 4 // 2 + 1, 0.7)
    f = FundamentalPath(3, 4, x, np.zeros_like(x))
    loop = reconstruct(f)
    assert np.abs(loop.positions - 0.7).max() == 0.0


def test_reconstruct_ngon_equal_spacing():
    n, m = 5, 32
    f = ngon_fundamental_path(n, m)
    loop = reconstruct(f)
    radius = ngon_radius(n)
    for k in range(1, n):
        want = 2.0 * radius * np.sin(np.pi * k / n)
        dist = np.abs(loop.positions[0] - loop.positions[k])
        assert np.abs(dist - want).max() <= 1e-12


def test_reconstruct_round_trip_and_linearity(rng):
    f, _ = random_feasible_path(3, 16, rng)
    loop = reconstruct(f)
    half = f.n_nodes
    assert np.array_equal(loop.positions[0][:half], f.x0 + 1j * f.y0)

    g, _ = random_feasible_path(3, 16, rng)
    summed = FundamentalPath(3, 16, f.x0 + g.x0, f.y0 + g.y0)
    lhs = reconstruct(summed).positions
    rhs = reconstruct(f).positions + reconstruct(g).positions
    assert np.abs(lhs - rhs).max() <= 1e-12


def test_hn_symmetrize_projection(rng):
    for n in (3, 4, 5, 6):
        f, _ = random_feasible_path(n, 16, rng)
        s = hn_symmetrize(f)
        ss = hn_symmetrize(s)
        assert np.abs(ss.x0 - s.x0).max() <= 1e-15
        assert np.abs(ss.y0 - s.y0).max() <= 1e-15
        # the defining relation holds on grid nodes
        t = s.times
        if n % 2 == 0:
            err = np.abs(evaluate_z0(s, t + n / 2) + evaluate_z0(s, t)).max()
        else:
            err = np.abs(evaluate_z0(s, t + n / 2) + np.conj(evaluate_z0(s, t))).max()
        assert err <= 1e-13


def test_hn_symmetrize_linear_and_parallelogram(rng):
    f, _ = random_feasible_path(4, 16, rng)
    s = hn_symmetrize(f)
    loop = reconstruct(s)
    assert np.abs(loop.positions[2] + loop.positions[0]).max() <= 1e-13
    assert np.abs(loop.positions[3] + loop.positions[1]).max() <= 1e-13
