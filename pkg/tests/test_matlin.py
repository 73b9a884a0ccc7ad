import random

import pytest
from hypothesis import given, strategies as st

from cuspidal_orbits import oracle
from cuspidal_orbits.errors import DimensionTooLarge, NotFound, PrecisionTooLow
from cuspidal_orbits.matlin import (
    FracMat, Mat, MatSpace, commutant_dim, companion, cyclic_vector, eisenstein,
    is_regular_by_cyclic_vector, is_regular_modp, kpoly_irreducible, min_poly_degree_modp,
    reduce_to_companion,
)
from cuspidal_orbits.orders import I, OrderKind, pi_element
from cuspidal_orbits.ring import Elem, make_ring, ring_for_q

R2 = make_ring("equal", 2, 1, 3)


def t(R, k=1):
    return Elem.pi(R).mul_pi(k - 1) if k > 1 else Elem.pi(R)


def x2_minus_t(R):
    return (-t(R), Elem.of(R, 0), Elem.of(R, 1))


def test_charpoly_of_iwahori_prime():
    cp = pi_element(OrderKind(I, 2), R2).charpoly()
    assert cp == x2_minus_t(R2)


def test_charpoly_of_identity():
    R = make_ring("equal", 2, 1, 1)
    cp = Mat.identity(R, 2).charpoly()
    assert [c.code for c in cp] == [1, 0, 1]


def test_charpoly_dimension_limit():
    R = make_ring("equal", 2, 1, 1)
    with pytest.raises(DimensionTooLarge):
        Mat.identity(R, 7).charpoly()


@pytest.mark.parametrize("R", [make_ring("equal", 2, 1, 2), make_ring("mixed", 3, 1, 2),
                               make_ring("equal", 2, 2, 2)], ids=str)
@given(data=st.data())
def test_charpoly_matches_permutation_expansion(R, data):
    n = data.draw(st.integers(1, 4))
    S = MatSpace(R, n, R.r_w)
    x = tuple(data.draw(st.integers(0, S.R.size - 1)) for _ in range(n * n))
    m = S.to_mat(x)
    assert [c.code for c in m.charpoly()] == oracle.leibniz_charpoly(m)


def test_det_and_charpoly_invariants_exhaustive_q2_n2():
    for prec in (1, 2):
        R = make_ring("equal", 2, 1, prec)
        S = MatSpace(R, 2, prec)
        gl = S.gl_elements()
        mats = list(S.all_matrices())
        for a in mats:
            A = S.to_mat(a)
            for g in gl[:: max(1, len(gl) // 12)]:
                G = S.to_mat(g)
                assert (G @ A @ G.inverse()).charpoly() == A.charpoly()
        rng = random.Random(0)
        for _ in range(300):
            a, b = rng.choice(mats), rng.choice(mats)
            assert S.det(S.mul(a, b)) == S.R.mul(S.det(a), S.det(b))


def test_residue_irreducibility_examples():
    F2 = R2.field
    assert kpoly_irreducible((1, 1, 1), F2)
    assert not kpoly_irreducible((0, 0, 1), F2)
    assert kpoly_irreducible((1, 1, 0, 1), F2)


def test_eisenstein_examples():
    R = make_ring("equal", 2, 1, 2)
    assert eisenstein(x2_minus_t(R))
    R3 = make_ring("equal", 2, 1, 3)
    assert not eisenstein((-t(R3, 2), Elem.of(R3, 0), Elem.of(R3, 1)))
    with pytest.raises(PrecisionTooLow):
        eisenstein(tuple(c.truncate(1) for c in x2_minus_t(R)))


def test_eisenstein_for_every_iwahori_prime_times_unit():
    R = make_ring("equal", 2, 1, 2)
    S = MatSpace(R, 2, 2)
    Pi = pi_element(OrderKind(I, 2), R).codes
    count = 0
    for B in S.all_matrices():
        if S.R.val(B[2]) >= 1 and S.is_invertible(B):
            count += 1
            assert eisenstein(S.to_mat(S.mul(Pi, B)).charpoly())
    assert count == 32


def test_commutant_examples():
    R = make_ring("equal", 2, 1, 1)
    zero = Mat.zero(R, 2)
    assert commutant_dim(zero) == 4 and not is_regular_modp(zero)
    N = Mat.of(R, [[0, 1], [0, 0]])
    assert commutant_dim(N) == 2 and is_regular_modp(N)


def test_square_of_iwahori_prime_is_not_regular_at_n3():
    R = make_ring("equal", 2, 1, 1)
    Pi = pi_element(OrderKind(I, 3), R)
    assert not is_regular_modp(Pi @ Pi)


@pytest.mark.parametrize("q,n", [(2, 2), (3, 2), (2, 3)])
def test_regularity_methods_agree_exhaustively(q, n):
    R = ring_for_q(q, 1)
    S = MatSpace(R, n, 1)
    for x in S.all_matrices():
        A = S.to_mat(x)
        d = commutant_dim(A)
        assert d >= n
        assert (d == n) == is_regular_by_cyclic_vector(A) == (min_poly_degree_modp(A) == n)


def test_cyclic_vector_examples():
    C = companion(x2_minus_t(R2))
    assert [e.code for e in cyclic_vector(C)] == [1, 0]
    with pytest.raises(NotFound):
        cyclic_vector(Mat.zero(R2, 2))


def test_reduce_to_companion_fixed_points_and_round_trip():
    C = companion(x2_minus_t(R2))
    assert reduce_to_companion(C) == Mat.identity(R2, 2)
    h = Mat.of(R2, [[1, 1], [0, 1]])
    M = h @ C @ h.inverse()
    g = reduce_to_companion(M)
    assert g.inverse() @ M @ g == C
    Pi = pi_element(OrderKind(I, 2), R2)
    g = reduce_to_companion(Pi)
    assert g.inverse() @ Pi @ g == C


def test_reduce_to_companion_rejects_non_eisenstein():
    with pytest.raises(ValueError):
        reduce_to_companion(Mat.identity(R2, 2))


@given(st.integers(0, 2 ** 12 - 1), st.sampled_from([0, 4]), st.sampled_from([2, 6]))
def test_reduce_to_companion_is_bit_exact(gcode, a, b):
    S = MatSpace(R2, 2, 3)
    g = tuple((gcode >> (3 * i)) & 7 for i in range(4))
    if not S.is_invertible(g):
        return
    f = (Elem(R2, b, 3), Elem(R2, a, 3), Elem.of(R2, 1))
    C = companion(f)
    M = S.to_mat(S.conj(g, S.inv(g), C.codes))
    h = reduce_to_companion(M)
    assert h.inverse() @ M @ h == companion(M.charpoly())


def test_frac_mat_arithmetic():
    Pi = pi_element(OrderKind(I, 2), R2)
    b = FracMat(1, Pi)
    assert (b @ b) == FracMat(1, Mat.identity(R2, 2, 2))
    assert b.scale_pi(1).s == 0 and b.scale_pi(-1).s == 2
    assert b.det_valuation().v == -1
    assert FracMat.from_json(b.to_json()) == b


def test_mat_json_round_trip():
    m = Mat.of(R2, [[1, [0, 1]], [0, 1]])
    assert Mat.from_json(m.to_json()) == m
