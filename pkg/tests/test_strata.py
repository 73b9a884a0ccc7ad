from itertools import product

import pytest
from hypothesis import given, strategies as st

from cuspidal_orbits.acceptance import stratum_family
from cuspidal_orbits.errors import InsufficientPrecision, NotInSubgroup, NotSimple, ScalarEquivalent
from cuspidal_orbits.matlin import FracMat, Mat, MatSpace, companion, poly_from_values
from cuspidal_orbits.orders import I, M, OrderKind, pattern, pi_element
from cuspidal_orbits.ring import make_ring
from cuspidal_orbits.strata import (
    INCONCLUSIVE, RAMIFIED, UNRAMIFIED, Stratum, decomposition_exponent, field_certificate,
    is_simple, psi_beta, strata_equivalent, type_conductor,
)

R = make_ring("equal", 2, 1, 4)
I2, M2 = OrderKind(I, 2), OrderKind(M, 2)
PI = pi_element(I2, R)
C = companion(poly_from_values(R, [1, 1, 1]))


def test_equivalence_examples():
    beta = FracMat(1, C)
    s = Stratum(M2, 1, beta)
    assert strata_equivalent(s, s)
    assert strata_equivalent(s, Stratum(M2, 1, beta + FracMat(0, Mat.of(R, [[1, 1], [0, 1]]))))
    assert not strata_equivalent(s, Stratum(M2, 1, beta + FracMat(1, Mat.identity(R, 2))))


def test_field_certificates():
    assert field_certificate(FracMat(1, C)).kind == UNRAMIFIED
    cert = field_certificate(FracMat(1, PI))
    assert (cert.kind, cert.j, cert.e) == (RAMIFIED, 1, 2)
    assert field_certificate(FracMat(1, Mat.identity(R, 2))).kind == INCONCLUSIVE


@pytest.mark.parametrize("method", ["criterion", "definition"])
def test_simple_examples(method):
    assert is_simple(Stratum(M2, 1, FracMat(1, C)), method)
    B = Mat.of(R, [[1, 1], [0, 1]])
    assert is_simple(Stratum(I2, 1, FracMat(1, PI @ B)), method)
    # pi^-1 Pi^2 is the identity, whose I-valuation 0 is not the level -2
    assert not is_simple(Stratum(I2, 2, FracMat.make(1, PI @ PI)), method)


@pytest.mark.parametrize("method", ["criterion", "definition"])
def test_scalar_stratum_raises(method):
    with pytest.raises(ScalarEquivalent):
        is_simple(Stratum(M2, 1, FracMat(1, Mat.identity(R, 2))), method)


def test_type_conductors():
    assert type_conductor(Stratum(M2, 1, FracMat(1, C))) == 2
    assert type_conductor(Stratum(I2, 1, FracMat(1, PI))) == 2
    beta3 = FracMat(2, PI)  # Pi^-3 = pi^-2 Pi
    s3 = Stratum(I2, 3, beta3)
    assert is_simple(s3) and type_conductor(s3) == 3
    with pytest.raises(NotSimple):
        type_conductor(Stratum(M2, 1, FracMat(1, Mat.of(R, [[0, 1], [0, 0]]))))


@pytest.mark.parametrize("N,q,n", list(product((2, 3), (2, 3), (1, 2, 3))))
def test_decomposition_exponent_formula(N, q, n):
    for s in stratum_family(I, N, q, n, cap=150):
        try:
            simple = is_simple(s)
        except (ScalarEquivalent, InsufficientPrecision):
            continue
        if simple:
            j = decomposition_exponent(s)
            assert j == N * (n // N + 1) - n and 0 < j < N


@pytest.mark.parametrize("tag,n", [(M, 1), (M, 2), (I, 1), (I, 2)])
def test_psi_beta_is_a_character_exhaustive(tag, n):
    kind = OrderKind(tag, 2)
    Rr = make_ring("equal", 2, 1, n + 2)
    beta = next(iter(stratum_family(tag, 2, 2, n, cap=40))).beta
    beta = FracMat.make(beta.s, beta.m.truncate(n + 2).lift(n + 2))
    beta = FracMat(beta.s, Mat(Rr, 2, beta.m.codes, beta.m.prec))
    s = Stratum(kind, n, beta)
    m = n // 2 + 1
    S = MatSpace(Rr, 2, n + 1)
    pat_m, pat_top = pattern(kind, m), pattern(kind, n + 1)

    def group(pat):
        choices = [range(0, S.R.size, 2 ** min(pat[i][j], n + 1)) for i in range(2) for j in range(2)]
        one = S.one
        return [S.add(one, x) for x in product(*choices)]

    U = group(pat_m)
    val = {x: psi_beta(s, m, S.to_mat(x)) for x in U}
    assert val[S.one].is_zero()
    for x in U:
        for y in U[:: max(1, len(U) // 16)]:
            assert val[S.mul(x, y)] == val[x] + val[y]
    for x in group(pat_top):
        assert psi_beta(s, m, S.to_mat(x)).is_zero()


def test_psi_beta_domain_checks():
    s = Stratum(M2, 1, FracMat(1, C))
    with pytest.raises(NotInSubgroup):
        psi_beta(s, 1, Mat.of(R, [[0, 1], [1, 0]]))
    with pytest.raises(ValueError):
        psi_beta(s, 2, Mat.identity(R, 2))


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_equivalence_is_an_equivalence_relation(a, b, c):
    R2 = make_ring("equal", 2, 1, 3)

    def beta(code):
        digits = [(code >> (2 * i)) & 3 for i in range(4)]
        return FracMat(1, Mat(R2, 2, tuple(digits), 2).lift(3))

    sa, sb, sc = (Stratum(M2, 1, beta(x)) for x in (a, b, c))
    assert strata_equivalent(sa, sa)
    assert strata_equivalent(sa, sb) == strata_equivalent(sb, sa)
    if strata_equivalent(sa, sb) and strata_equivalent(sb, sc):
        assert strata_equivalent(sa, sc)


def test_stratum_json_round_trip():
    s = Stratum(I2, 1, FracMat(1, PI))
    assert Stratum.from_json(s.to_json()) == s


def test_beta_outside_radical_power_rejected():
    with pytest.raises(ValueError):
        Stratum(M2, 1, FracMat(2, Mat.identity(R, 2)))
