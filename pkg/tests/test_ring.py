from itertools import product

import pytest
from hypothesis import given, strategies as st

from cuspidal_orbits.errors import (
    InsufficientPrecision, MixedNeedsPrimeField, NonUnit, NotPrime, BadModulus,
)
from cuspidal_orbits.ring import (
    AdditiveValue, AtLeast, Elem, Exact, FracElem, RingSpec, make_ring, psi, ring_for_q, trunc,
)

SMALL_RINGS = [
    make_ring("equal", 2, 1, 4), make_ring("mixed", 2, 1, 4), make_ring("equal", 3, 1, 2),
    make_ring("mixed", 3, 1, 2), make_ring("equal", 2, 2, 2), make_ring("equal", 2, 1, 2),
]
LARGE_RINGS = [
    make_ring("equal", 2, 1, 12), make_ring("mixed", 2, 1, 12), make_ring("equal", 3, 1, 7),
    make_ring("mixed", 3, 1, 7), make_ring("equal", 2, 2, 6), make_ring("equal", 5, 1, 5),
]


def test_make_ring_equal_characteristic():
    R = make_ring("equal", 2, 1, 3)
    assert (R.kind, R.q, R.r_w) == ("equal", 2, 3)
    assert str(R) == "F_2[t]/t^3"


def test_make_ring_mixed_characteristic():
    R = make_ring("mixed", 3, 1, 2)
    assert R.q == 3 and str(R) == "Z/3^2"
    assert trunc(R, 2).size == 9


def test_mixed_ring_needs_prime_residue_field():
    with pytest.raises(MixedNeedsPrimeField):
        make_ring("mixed", 2, 2, 2)


def test_non_prime_and_reducible_modulus_rejected():
    with pytest.raises(NotPrime):
        make_ring("equal", 4, 1, 2)
    with pytest.raises(BadModulus):
        make_ring("equal", 2, 2, 2, modulus=(1, 0, 1))


def test_default_modulus_for_f4():
    assert make_ring("equal", 2, 2, 1).modulus == (1, 1, 1)


def test_ring_json_round_trip():
    for R in SMALL_RINGS:
        assert RingSpec.from_json(R.to_json()) == R


def test_inverse_of_three_mod_eight():
    R = make_ring("mixed", 2, 1, 3)
    assert Elem.of(R, 3).inv() == Elem.of(R, 3)


def test_inverse_of_one_plus_t():
    R = make_ring("equal", 2, 1, 2)
    x = Elem.of(R, [1, 1])
    assert x.inv() == x


def test_inverse_of_non_unit_raises():
    R = make_ring("mixed", 2, 1, 3)
    with pytest.raises(NonUnit):
        Elem.of(R, 2).inv()


def test_valuation_examples():
    R = make_ring("equal", 2, 1, 3)
    assert Elem.of(R, [0, 1, 1]).valuation() == Exact(1)
    assert Elem.of(R, 0).valuation() == AtLeast(3)
    assert FracElem(1, Elem.of(R, 1)).valuation() == Exact(-1)


def test_psi_examples():
    R2 = make_ring("equal", 2, 1, 3)
    assert psi(Elem.of(R2, 1)) == AdditiveValue.make(2, 1, 1)
    for u in range(8):
        assert psi(Elem(R2, u, 3).mul_pi(1).lift(3)).is_zero()
    R3 = make_ring("mixed", 3, 1, 3)
    # mixed kind: the conductor-p normalization puts 1/3 at 1/9
    assert psi(FracElem(1, Elem.of(R3, 1))) == AdditiveValue.make(3, 1, 2)


def test_psi_needs_enough_digits():
    R = make_ring("equal", 2, 1, 3)
    with pytest.raises(InsufficientPrecision):
        psi(FracElem(2, Elem(R, 1, 2)))


@pytest.mark.parametrize("R", SMALL_RINGS, ids=str)
def test_ring_axioms_exhaustive(R):
    T = trunc(R, R.r_w)
    els = range(T.size)
    zero, one = 0, T.from_int(1)
    for a in els:
        assert T.add(a, zero) == a and T.mul(a, one) == a
        assert T.add(a, T.neg(a)) == 0
    for a, b in product(els, repeat=2):
        assert T.add(a, b) == T.add(b, a) and T.mul(a, b) == T.mul(b, a)
    for a, b, c in product(els, repeat=3):
        assert T.add(T.add(a, b), c) == T.add(a, T.add(b, c))
        assert T.mul(T.mul(a, b), c) == T.mul(a, T.mul(b, c))
        assert T.mul(a, T.add(b, c)) == T.add(T.mul(a, b), T.mul(a, c))


@pytest.mark.parametrize("R", SMALL_RINGS + LARGE_RINGS[:3], ids=str)
def test_every_unit_inverts(R):
    T = trunc(R, R.r_w)
    one = T.from_int(1)
    for u in T.units():
        assert T.mul(u, T.inv(u)) == one


@pytest.mark.parametrize("R", LARGE_RINGS, ids=str)
@given(data=st.data())
def test_ring_axioms_sampled_on_larger_rings(R, data):
    T = trunc(R, R.r_w)
    a, b, c = (data.draw(st.integers(0, T.size - 1)) for _ in range(3))
    assert T.add(T.add(a, b), c) == T.add(a, T.add(b, c))
    assert T.mul(T.mul(a, b), c) == T.mul(a, T.mul(b, c))
    assert T.mul(a, T.add(b, c)) == T.add(T.mul(a, b), T.mul(a, c))
    assert T.sub(T.add(a, b), b) == a


@pytest.mark.parametrize("R", SMALL_RINGS + LARGE_RINGS, ids=str)
@given(data=st.data())
def test_valuation_is_additive(R, data):
    T = trunc(R, R.r_w)
    x = Elem(R, data.draw(st.integers(1, T.size - 1)), R.r_w)
    y = Elem(R, data.draw(st.integers(1, T.size - 1)), R.r_w)
    vx, vy = x.valuation(), y.valuation()
    if vx.v + vy.v < R.r_w:
        assert (x * y).valuation() == Exact(vx.v + vy.v)


@pytest.mark.parametrize("R", SMALL_RINGS, ids=str)
def test_psi_is_additive_exhaustively(R):
    for s in (0, 1, 2):
        prec = s + 1
        if prec > R.r_w:
            continue
        vals = [FracElem(s, Elem(R, c, prec)) for c in range(R.q ** prec)]
        for x, y in product(vals, repeat=2):
            assert psi(x + y) == psi(x) + psi(y)


@pytest.mark.parametrize("R", SMALL_RINGS, ids=str)
def test_psi_kills_maximal_ideal_but_not_units(R):
    T = trunc(R, R.r_w)
    assert all(psi(Elem(R, c, R.r_w)).is_zero() for c in range(0, T.size, R.q))
    assert any(not psi(Elem(R, c, R.r_w)).is_zero() for c in range(T.size))


def test_precision_is_never_invented():
    R = make_ring("equal", 2, 1, 4)
    x, y = Elem(R, 3, 2), Elem(R, 5, 4)
    assert (x + y).prec == 2 and (x * y).prec == 2
    assert x.mul_pi(1).prec == 3 and x.mul_pi(1).div_pi(1) == x


def test_ring_for_q():
    assert ring_for_q(4, 2).f == 2 and ring_for_q(9, 1).p == 3
    with pytest.raises(ValueError):
        ring_for_q(6, 1)
