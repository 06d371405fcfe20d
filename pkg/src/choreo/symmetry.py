"""Dihedral group actions on sampled loops and equivariant reconstruction.

A loop of the N-body system is acted on by time shifts/reflections,
planar isometries (conjugation / negation), and index permutations.  The
dihedral symmetry of interest is generated by

* ``g``: shift time by -1 and cycle the body indices, and
* ``h``: reflect time about t = 1/2, conjugate the plane, and swap
  indices j <-> N-1-j.

Loops fixed by both are single-curve choreographies z_j(t) = z0(j + t)
whose curve satisfies z0(-t) = conj(z0(t)), so the whole loop is
recovered from z0 on [0, N/2] alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .loop_model import FullLoop, FundamentalPath

_SPACE_MAPS = ("identity", "conj", "neg", "negconj")


class IncompatibleGridError(ValueError):
    """Time map does not send grid nodes to grid nodes."""


@dataclass(frozen=True)
class GroupElementAction:
    """One symmetry: t -> time_sign*t + time_shift, a planar map, a permutation.

    ``index_perm[i]`` is the image of index i; ``space_map`` is one of
    identity, conj (complex conjugation), neg, negconj.
    """

    time_sign: int
    time_shift: float
    space_map: str
    index_perm: tuple[int, ...]

    def __post_init__(self):
        if self.time_sign not in (-1, 1):
            raise ValueError("time_sign must be +-1")
        if (2 * self.time_shift) != round(2 * self.time_shift):
            raise ValueError("time_shift must be a multiple of 1/2")
        if self.space_map not in _SPACE_MAPS:
            raise ValueError(f"unknown space_map {self.space_map!r}")
        if sorted(self.index_perm) != list(range(len(self.index_perm))):
            raise ValueError("index_perm is not a permutation")


def identity_action(n_bodies: int) -> GroupElementAction:
    return GroupElementAction(1, 0.0, "identity", tuple(range(n_bodies)))


def dn_generators(n_bodies: int) -> tuple[GroupElementAction, GroupElementAction]:
    """The two dihedral generators acting on N-body loops of period N."""
    if n_bodies < 3:
        raise ValueError(f"need at least 3 bodies, got {n_bodies}")
    cycle = tuple((j + 1) % n_bodies for j in range(n_bodies))
    swap = tuple(n_bodies - 1 - j for j in range(n_bodies))
    g = GroupElementAction(1, -1.0, "identity", cycle)
    h = GroupElementAction(-1, 1.0, "conj", swap)
    return g, h


def _apply_space(space_map: str, z: np.ndarray) -> np.ndarray:
    if space_map == "identity":
        return z
    if space_map == "conj":
        return np.conj(z)
    if space_map == "neg":
        return -z
    return -np.conj(z)


def _compose_space(outer: str, inner: str) -> str:
    flip = {"identity": (False, False), "conj": (False, True),
            "neg": (True, False), "negconj": (True, True)}
    names = {v: k for k, v in flip.items()}
    no, co = flip[outer]
    ni, ci = flip[inner]
    return names[(no ^ ni, co ^ ci)]


def compose(a: GroupElementAction, b: GroupElementAction) -> GroupElementAction:
    """Action of the product, so apply(compose(a, b), z) = apply(a, apply(b, z))."""
    sign = a.time_sign * b.time_sign
    shift = a.time_sign * b.time_shift + a.time_shift
    perm = tuple(a.index_perm[b.index_perm[i]] for i in range(len(a.index_perm)))
    return GroupElementAction(sign, shift, _compose_space(a.space_map, b.space_map), perm)


def apply(a: GroupElementAction, loop: FullLoop) -> FullLoop:
    """Transform a sampled loop by one group element.

    Output body j at time t is the planar map applied to body
    index_perm^-1(j) of the input at the inverse-mapped time.
    """
    n, m = loop.n_bodies, loop.samples_per_unit
    if len(a.index_perm) != n:
        raise ValueError("permutation size does not match loop")
    shift_nodes = a.time_shift * m
    if shift_nodes != round(shift_nodes):
        raise IncompatibleGridError(
            f"shift {a.time_shift} not resolvable on grid with M={m}"
        )
    total = n * m
    # inverse time map t -> s*t - s*c, as node indices
    src = (a.time_sign * np.arange(total) - a.time_sign * int(round(shift_nodes))) % total
    perm_inv = np.argsort(np.asarray(a.index_perm))
    out = _apply_space(a.space_map, loop.positions[perm_inv][:, src])
    return FullLoop(n, m, out)


def z0_period_samples(fund: FundamentalPath) -> np.ndarray:
    """Samples of the closed curve z0 over one full period [0, N).

    The second half-period is the conjugate mirror of the first:
    z0(N - t) = conj(z0(t)).
    """
    half = fund.x0 + 1j * fund.y0
    total = fund.n_bodies * fund.samples_per_unit
    out = np.empty(total, dtype=complex)
    out[: half.shape[0]] = half
    out[half.shape[0]:] = np.conj(half[-2:0:-1])
    return out


def evaluate_z0(fund: FundamentalPath, t) -> complex | np.ndarray:
    """Evaluate z0 at arbitrary times (period N, linear between nodes)."""
    t = np.asarray(t, dtype=float)
    n, m = fund.n_bodies, fund.samples_per_unit
    tm = np.mod(t, n)
    reflect = tm > n / 2
    tm = np.where(reflect, n - tm, tm)
    pos = tm * m
    k = np.minimum(pos.astype(int), fund.n_nodes - 2)
    frac = pos - k
    x = fund.x0[k] * (1 - frac) + fund.x0[k + 1] * frac
    y = fund.y0[k] * (1 - frac) + fund.y0[k + 1] * frac
    z = np.where(reflect, x - 1j * y, x + 1j * y)
    return z if z.shape else complex(z)


def body_position(fund: FundamentalPath, j: int, t) -> complex | np.ndarray:
    """Body j's position: the curve shifted by j time units."""
    if not 0 <= j < fund.n_bodies:
        raise IndexError(f"body index {j} out of range for N={fund.n_bodies}")
    return evaluate_z0(fund, j + np.asarray(t, dtype=float))


def reconstruct(fund: FundamentalPath) -> FullLoop:
    """Assemble the full equivariant loop: body j samples the curve shifted by j."""
    u = z0_period_samples(fund)
    m = fund.samples_per_unit
    positions = np.stack(
        [np.roll(u, -j * m) for j in range(fund.n_bodies)]
    )
    return FullLoop(fund.n_bodies, m, positions)


def hn_symmetrize(fund: FundamentalPath) -> FundamentalPath:
    """Project onto the subspace with the extra half-period relation.

    For odd N the relation is z0(t) = -z0(N/2 - t); for even N it is
    z0(t) = -conj(z0(N/2 - t)).  Both are linear involutions on the
    fundamental samples, so averaging with the image is the (idempotent)
    orthogonal projection onto their fixed subspace.
    """
    x_rev = fund.x0[::-1]
    y_rev = fund.y0[::-1]
    x_new = 0.5 * (fund.x0 - x_rev)
    if fund.n_bodies % 2 == 0:
        y_new = 0.5 * (fund.y0 + y_rev)
    else:
        y_new = 0.5 * (fund.y0 - y_rev)
    return FundamentalPath(fund.n_bodies, fund.samples_per_unit, x_new, y_new)
