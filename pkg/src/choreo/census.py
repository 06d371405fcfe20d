"""Census of sign-vector classes of simple choreographies.

A planar loop with the dihedral N-body symmetry crosses the half-integer
times j/2 (j = 1..N-1) with a definite vertical sign; the vector of those
signs selects a topological class of collision-free loops.  Two sign
vectors describe the same orbit up to time reversal (entrywise negation)
and up to the half-turn that reverses the index order, so classes are
orbits of the Klein four-group generated by ``negate`` and ``star``.

The class count has the closed form 2^(N-3) + 2^floor((N-3)/2); this
module reproduces it three independent ways (closed form, Burnside count
over the four-group, exhaustive orbit enumeration).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Exhaustive enumeration walks all 2^(N-1) sign vectors; 2^23 is the
# practical desk-scale limit.
MAX_ENUM_BODIES = 24


@dataclass(frozen=True)
class SignVector:
    """Signs (s_1, ..., s_{N-1}), each +1 or -1, for an N-body class."""

    n_bodies: int
    signs: tuple[int, ...]

    def __post_init__(self):
        if self.n_bodies < 3:
            raise ValueError(f"need at least 3 bodies, got {self.n_bodies}")
        if len(self.signs) != self.n_bodies - 1:
            raise ValueError(
                f"need {self.n_bodies - 1} signs for N={self.n_bodies}, "
                f"got {len(self.signs)}"
            )
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError(f"signs must be +-1, got {self.signs}")

    def __str__(self):
        return ",".join("+1" if s > 0 else "-1" for s in self.signs)


@dataclass(frozen=True)
class OrbitClass:
    """One class: its lex-smallest member plus the full orbit."""

    canonical: SignVector
    members: frozenset[SignVector]


def negate(omega: SignVector) -> SignVector:
    """Entrywise sign flip (the time-reversed loop's class)."""
    return SignVector(omega.n_bodies, tuple(-s for s in omega.signs))


def star(omega: SignVector) -> SignVector:
    """Index reversal s_j -> s_{N-j} (the half-turned loop's class)."""
    return SignVector(omega.n_bodies, omega.signs[::-1])


def _lex_key(omega: SignVector) -> tuple[int, ...]:
    # lexicographic order with +1 before -1
    return tuple(0 if s > 0 else 1 for s in omega.signs)


def orbit(omega: SignVector) -> OrbitClass:
    """Closure of {omega} under negate and star, with canonical member."""
    members = frozenset(
        {omega, negate(omega), star(omega), negate(star(omega))}
    )
    canonical = min(members, key=_lex_key)
    return OrbitClass(canonical, members)


def count_formula(n_bodies: int) -> int:
    """Closed-form class count 2^(N-3) + 2^floor((N-3)/2)."""
    if n_bodies < 3:
        raise ValueError(f"need at least 3 bodies, got {n_bodies}")
    return 2 ** (n_bodies - 3) + 2 ** ((n_bodies - 3) // 2)


def _all_vectors(width: int) -> np.ndarray:
    return np.arange(2**width, dtype=np.int64)


def _bit_reverse(v: np.ndarray, width: int) -> np.ndarray:
    out = np.zeros_like(v)
    w = v.copy()
    for _ in range(width):
        out = (out << 1) | (w & 1)
        w >>= 1
    return out


def _int_to_signs(v: int, width: int) -> tuple[int, ...]:
    # bit width-1 (most significant) is s_1; bit value 0 means +1
    return tuple(1 if ((v >> (width - 1 - k)) & 1) == 0 else -1 for k in range(width))


def count_burnside(n_bodies: int) -> int:
    """Class count via Burnside's lemma over {1, negate, star, negate*star}.

    Fixed vectors of each involution are counted exhaustively up to the
    enumeration cap; beyond it the fixed-point counts come from the pairing
    structure of the index reversal (negate fixes nothing; star fixes one
    free sign per index pair {j, N-j}; negate*star fixes nothing for even N
    because the middle sign would have to equal its own negative).
    """
    if n_bodies < 3:
        raise ValueError(f"need at least 3 bodies, got {n_bodies}")
    width = n_bodies - 1
    total = 2**width
    if n_bodies <= MAX_ENUM_BODIES:
        v = _all_vectors(width)
        mask = total - 1
        rev = _bit_reverse(v, width)
        fix_negate = int(np.count_nonzero((v ^ mask) == v))
        fix_star = int(np.count_nonzero(rev == v))
        fix_negate_star = int(np.count_nonzero((rev ^ mask) == v))
    else:
        fix_negate = 0
        if n_bodies % 2 == 0:
            fix_star = 2 ** (n_bodies // 2)
            fix_negate_star = 0
        else:
            fix_star = 2 ** ((n_bodies - 1) // 2)
            fix_negate_star = fix_star
    count4 = total + fix_negate + fix_star + fix_negate_star
    assert count4 % 4 == 0
    return count4 // 4


def enumerate_classes(n_bodies: int) -> list[OrbitClass]:
    """Partition all 2^(N-1) sign vectors into classes, sorted by canonical."""
    if not 3 <= n_bodies <= MAX_ENUM_BODIES:
        raise ValueError(
            f"enumeration supports 3 <= N <= {MAX_ENUM_BODIES}, got {n_bodies}"
        )
    width = n_bodies - 1
    v = _all_vectors(width)
    mask = 2**width - 1
    rev = _bit_reverse(v, width)
    canon = np.minimum(
        np.minimum(v, v ^ mask), np.minimum(rev, rev ^ mask)
    )
    classes = []
    for c in np.unique(canon):
        rep = SignVector(n_bodies, _int_to_signs(int(c), width))
        classes.append(orbit(rep))
    return classes


def hn_admissible(omega: SignVector) -> bool:
    """Whether omega is compatible with the extra half-period symmetry.

    The richer symmetry (figure-eight / super-eight families) forces
    s_j = -s_{N-j} for odd N and s_j = s_{N-j} for even N, for every index
    pair j = 1..floor((N-1)/2).
    """
    n = omega.n_bodies
    want = 2 if n % 2 == 1 else 0
    for j in range(1, (n - 1) // 2 + 1):
        if abs(omega.signs[j - 1] - omega.signs[n - j - 1]) != want:
            return False
    return True
