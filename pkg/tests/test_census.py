import itertools

import pytest

from choreo.census import (
    OrbitClass,
    SignVector,
    count_burnside,
    count_formula,
    enumerate_classes,
    hn_admissible,
    negate,
    orbit,
    star,
)
from conftest import random_sign_vector


def all_vectors(n):
    for signs in itertools.product((1, -1), repeat=n - 1):
        yield SignVector(n, signs)


def test_negate_examples():
    assert negate(SignVector(3, (1, 1))) == SignVector(3, (-1, -1))
    assert negate(SignVector(4, (1, -1, 1))) == SignVector(4, (-1, 1, -1))


def test_star_examples():
    assert star(SignVector(4, (1, -1, 1))) == SignVector(4, (1, -1, 1))
    assert star(SignVector(4, (1, 1, -1))) == SignVector(4, (-1, 1, 1))


def test_involutions_and_commutation(rng):
    for n in range(3, 13):
        for _ in range(10):
            w = random_sign_vector(n, rng)
            assert negate(negate(w)) == w
            assert star(star(w)) == w
            assert negate(star(w)) == star(negate(w))


def closure_oracle(w):
    # brute-force closure under the two maps
    members = {w}
    frontier = [w]
    while frontier:
        v = frontier.pop()
        for image in (negate(v), star(v)):
            if image not in members:
                members.add(image)
                frontier.append(image)
    return members


def test_orbit_examples():
    o3 = orbit(SignVector(3, (1, 1)))
    assert o3.members == frozenset({SignVector(3, (1, 1)), SignVector(3, (-1, -1))})
    assert len(orbit(SignVector(4, (1, -1, 1))).members) == 2
    w5 = SignVector(5, (1, 1, -1, -1))
    assert negate(star(w5)) == w5  # fixed by the composition
    assert orbit(w5).members == frozenset(closure_oracle(w5))


def test_orbit_matches_brute_closure(rng):
    for n in (3, 4, 5, 6, 7):
        for _ in range(20):
            w = random_sign_vector(n, rng)
            cls = orbit(w)
            want = closure_oracle(w)
            assert cls.members == frozenset(want)
            assert cls.canonical == min(
                want, key=lambda v: tuple(0 if s > 0 else 1 for s in v.signs)
            )


def test_count_formula_examples():
    assert count_formula(3) == 2
    assert count_formula(5) == 6
    assert count_formula(16) == 8256
    with pytest.raises(ValueError):
        count_formula(2)


def test_burnside_fixed_point_structure():
    # N=4: (8 + 0 + 4 + 0) / 4 = 3 and N=5: (16 + 0 + 4 + 4) / 4 = 6,
    # with the fixed counts checked by exhaustive search.
    for n, expected in ((4, (0, 4, 0)), (5, (0, 4, 4))):
        vectors = list(all_vectors(n))
        f_neg = sum(1 for w in vectors if negate(w) == w)
        f_star = sum(1 for w in vectors if star(w) == w)
        f_both = sum(1 for w in vectors if negate(star(w)) == w)
        assert (f_neg, f_star, f_both) == expected
        assert (len(vectors) + f_neg + f_star + f_both) // 4 == count_burnside(n)


def test_burnside_equals_formula():
    for n in range(3, 21):
        assert count_burnside(n) == count_formula(n)
    # beyond the exhaustive cap the closed-form fixed counts take over
    assert count_burnside(30) == count_formula(30)


def test_fixed_point_counts_small_n():
    for n in range(3, 13):
        vectors = list(all_vectors(n))
        f_star = sum(1 for w in vectors if star(w) == w)
        f_both = sum(1 for w in vectors if negate(star(w)) == w)
        if n % 2 == 0:
            assert f_both == 0
            assert f_star == 2 ** (n // 2)
        else:
            assert f_both == 2 ** ((n - 1) // 2)
            assert f_star == 2 ** ((n - 1) // 2)


def test_enumerate_classes_counts():
    assert len(enumerate_classes(3)) == 2
    assert len(enumerate_classes(4)) == 3
    assert len(enumerate_classes(10)) == 136
    with pytest.raises(ValueError):
        enumerate_classes(25)
    with pytest.raises(ValueError):
        enumerate_classes(2)


def test_enumerate_classes_is_partition():
    for n in (3, 4, 5, 6, 7):
        classes = enumerate_classes(n)
        seen = set()
        for c in classes:
            assert isinstance(c, OrbitClass)
            assert len(c.members) in (2, 4)
            assert c.canonical in c.members
            for member in c.members:
                assert member not in seen
                seen.add(member)
                assert orbit(member).canonical == c.canonical
        assert len(seen) == 2 ** (n - 1)
        # canonical representatives come out sorted and unique
        canons = [c.canonical.signs for c in classes]
        assert len(set(canons)) == len(canons)


def test_hn_admissible_examples():
    assert hn_admissible(SignVector(4, (1, -1, 1)))
    assert not hn_admissible(SignVector(4, (1, -1, -1)))
    assert hn_admissible(SignVector(3, (-1, 1)))
    # admissibility is a class invariant
    for n in (4, 5, 6):
        for c in enumerate_classes(n):
            flags = {hn_admissible(m) for m in c.members}
            assert len(flags) == 1


def test_sign_vector_validation():
    with pytest.raises(ValueError):
        SignVector(3, (1, 1, 1))
    with pytest.raises(ValueError):
        SignVector(3, (1, 0))
    with pytest.raises(ValueError):
        SignVector(2, (1,))
