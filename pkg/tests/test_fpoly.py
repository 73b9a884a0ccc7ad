from itertools import product

from hypothesis import given, strategies as st

from cuspidal_orbits import fpoly
from cuspidal_orbits.ring import FiniteField, field_of, least_irreducible

F2, F3 = FiniteField(2), FiniteField(3)


def _has_factor(F, f):
    n = fpoly.degree(f)
    for d in range(1, n // 2 + 1):
        for tail in product(range(F.q), repeat=d):
            if not fpoly.mod(F, f, tuple(tail) + (1,)):
                return True
    return False


def test_irreducibility_examples():
    assert fpoly.is_irreducible(F2, (1, 1, 1))
    assert not fpoly.is_irreducible(F2, (0, 0, 1))
    assert fpoly.is_irreducible(F2, (1, 1, 0, 1))


def test_irreducibility_matches_factor_search():
    for F, n in ((F2, 2), (F2, 3), (F2, 4), (F3, 2), (F3, 3)):
        for tail in product(range(F.q), repeat=n):
            f = tuple(tail) + (1,)
            assert fpoly.is_irreducible(F, f) == (not _has_factor(F, f))


def test_least_irreducible_is_irreducible():
    for p, f in ((2, 2), (2, 3), (3, 2), (5, 2)):
        assert fpoly.is_irreducible(FiniteField(p), least_irreducible(p, f))


@given(st.lists(st.integers(0, 2), max_size=5), st.lists(st.integers(0, 2), min_size=1, max_size=4))
def test_division_identity(a, b):
    F = F3
    a, b = fpoly.trim(a), fpoly.trim(b)
    if not b:
        return
    quo, rem = fpoly.divmod_(F, a, b)
    assert fpoly.add(F, fpoly.mul(F, quo, b), rem) == a
    assert fpoly.degree(rem) < fpoly.degree(b)


def test_field_tables_f4():
    F = field_of(2, 2, (1, 1, 1))
    for a in range(1, 4):
        assert F.mul(a, F.inv(a)) == 1
    assert sorted(F.trace(a) for a in range(4)) == [0, 0, 1, 1]
