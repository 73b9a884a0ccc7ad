"""Strata [A, n, n-1, beta], their simplicity and their characters psi_beta."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from . import fpoly
from .errors import (
    InconclusiveFieldData, InsufficientPrecision, NotInNormalizer, NotInSubgroup,
    NotSimple, ScalarEquivalent,
)
from .matlin import FracMat, Mat, charpoly_codes, kpoly_irreducible, min_poly_degree_modp
from .orders import I, M, OrderKind, in_P, in_U, iwahori_decompose, nu
from .ring import AdditiveValue, Elem, Exact, psi

UNRAMIFIED = "UnramifiedDegreeP"
RAMIFIED = "TotallyRamified"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Stratum:
    order: OrderKind
    n: int
    beta: FracMat

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("stratum level must be >= 1")
        if self.beta.n != self.order.n:
            raise ValueError("beta has the wrong size")
        if not in_P(self.order, -self.n, self.beta):
            raise ValueError(f"beta does not lie in P^-{self.n}")

    def to_json(self) -> dict:
        return {"order": self.order.tag, "n": self.n, "beta": self.beta.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "Stratum":
        beta = FracMat.from_json(d["beta"])
        return cls(OrderKind(d["order"], beta.n), d["n"], beta)


@dataclass(frozen=True)
class FieldCertificate:
    kind: str
    e: int
    f_res: int
    nu_E_beta: int | None
    j: int | None = None


def strata_equivalent(s1: Stratum, s2: Stratum) -> bool:
    if s1.order != s2.order or s1.n != s2.n:
        raise ValueError("equivalence is only compared for equal order and level")
    return in_P(s1.order, 1 - s1.n, s1.beta - s2.beta)


def _det_valuation(beta: FracMat) -> int:
    v = beta.det_valuation()
    if not isinstance(v, Exact):
        raise InsufficientPrecision("determinant valuation not determined")
    return v.v


def _unit_normalized(beta: FracMat) -> Mat:
    """pi^{-nu_M(beta)} beta: an integral matrix with some entry a unit."""
    v = beta.m.min_valuation()
    if not isinstance(v, Exact):
        raise InsufficientPrecision("beta is zero at the available precision")
    return beta.m.div_pi(v.v)


def field_certificate(beta: FracMat) -> FieldCertificate:
    n = beta.n
    field = beta.ring.field
    u = _unit_normalized(beta)
    if u.prec < 1:
        raise InsufficientPrecision("normalized beta has no digits")
    cp = fpoly.trim(c % beta.ring.q for c in charpoly_codes(u.R, n, u.codes))
    if kpoly_irreducible(cp, field):
        return FieldCertificate(UNRAMIFIED, 1, n, _det_valuation(beta) // n)
    kind = OrderKind(I, n)
    v = nu(kind, beta)
    if not isinstance(v, Exact):
        raise InsufficientPrecision("nu_I(beta) not determined")
    level = -v.v
    try:
        j, _ = iwahori_decompose(beta.scale_pi(level // n + 1))
    except NotInNormalizer:
        return FieldCertificate(INCONCLUSIVE, 0, 0, None)
    if 0 < j < n:
        return FieldCertificate(RAMIFIED, n, 1, _det_valuation(beta), j)
    return FieldCertificate(INCONCLUSIVE, 0, 0, None)


def is_scalar_equivalent(s: Stratum) -> bool:
    """Is beta + P^{1-n} hit by some scalar matrix?"""
    kind, n, beta = s.order, s.n, s.beta
    if in_P(kind, 1 - n, beta):
        return True
    if n % kind.e:
        return False
    ring = beta.ring
    for c in range(1, ring.q):
        scal = FracMat.make(n // kind.e, Mat.scalar(ring, kind.n, Elem(ring, c, 1).lift()))
        if in_P(kind, 1 - n, beta - scal):
            return True
    return False


def _level_matches(s: Stratum) -> bool:
    v = nu(s.order, s.beta)
    if not isinstance(v, Exact):
        raise InsufficientPrecision("nu(beta) not determined")
    return v.v == -s.n


def _check_scalar(s: Stratum) -> None:
    if is_scalar_equivalent(s):
        raise ScalarEquivalent("stratum is equivalent to one with scalar beta")


def is_simple_via_criterion(s: Stratum) -> bool:
    if not _level_matches(s):
        return False
    _check_scalar(s)
    kind, n, beta, N = s.order, s.n, s.beta, s.order.n
    if kind.tag == M:
        g = beta.scale_pi(n)
        if g.s:
            return False
        cp = fpoly.trim(c % beta.ring.q for c in charpoly_codes(g.m.R, N, g.m.codes))
        return kpoly_irreducible(cp, beta.ring.field)
    try:
        j, _ = iwahori_decompose(beta.scale_pi(n // N + 1))
    except NotInNormalizer:
        return False
    return 0 < j < N


def _generates_radical_power(s: Stratum) -> bool:
    """beta * A = P^{-n}, given beta in P^{-n}: det(beta) has the least possible valuation."""
    need = -s.n * s.order.n
    v = s.beta.det_valuation()
    if isinstance(v, Exact):
        return v.v * s.order.e == need
    if v.bound * s.order.e > need:
        return False
    raise InsufficientPrecision("determinant valuation not determined")


def _minimal_given(beta: FracMat, e: int, nu_E: int) -> bool:
    """gcd(nu_E, e) = 1 and the residue of pi^{-nu_E} beta^e generates k_E."""
    N = beta.n
    if gcd(nu_E, e) != 1:
        return False
    y = (beta ** e).scale_pi(-nu_E)
    if y.s:
        return False
    if e == 1:
        ybar = y.m.residue()
        return min_poly_degree_modp(ybar) == N and _irreducible_char(ybar)
    # k_E = k_F: the residue is a single eigenvalue in k_F
    return _single_rational_eigenvalue(y.m.residue())


def _irreducible_char(ybar: Mat) -> bool:
    cp = fpoly.trim(charpoly_codes(ybar.R, ybar.n, ybar.codes))
    return kpoly_irreducible(cp, ybar.ring.field)


def _single_rational_eigenvalue(ybar: Mat) -> bool:
    F = ybar.ring.field
    cp = fpoly.trim(charpoly_codes(ybar.R, ybar.n, ybar.codes))
    roots = [a for a in F.elements() if fpoly.evaluate(F, cp, a) == 0]
    if len(roots) != 1:
        return False
    lin = (F.neg(roots[0]), 1)
    acc = (1,)
    for _ in range(ybar.n):
        acc = fpoly.mul(F, acc, lin)
    return acc == cp


def is_minimal(beta: FracMat) -> bool:
    """Minimality of beta, decided through a field certificate for F[beta]."""
    N = beta.n
    cert = field_certificate(beta)
    if cert.kind != INCONCLUSIVE:
        return _minimal_given(beta, cert.e, cert.nu_E_beta)
    # Without knowing F[beta] is a field, minimality may still be ruled out for
    # every possible ramification index.
    dv = _det_valuation(beta)
    for e in (1, N):
        if (e * dv) % N == 0 and _minimal_given(beta, e, e * dv // N):
            raise InconclusiveFieldData("cannot certify that F[beta] is a field")
    return False


def is_simple_via_definition(s: Stratum) -> bool:
    if not _level_matches(s):
        return False
    _check_scalar(s)
    if not _generates_radical_power(s):
        return False
    return is_minimal(s.beta)


def is_simple(s: Stratum, method: str = "criterion") -> bool:
    if method == "criterion":
        return is_simple_via_criterion(s)
    if method == "definition":
        return is_simple_via_definition(s)
    raise ValueError(f"unknown method {method!r}")


def decomposition_exponent(s: Stratum) -> int:
    """The j with pi^{floor(n/N)+1} beta = Pi_I^j B for an Iwahori stratum."""
    N = s.order.n
    return iwahori_decompose(s.beta.scale_pi(s.n // N + 1))[0]


def psi_beta(s: Stratum, m: int, x: Mat) -> AdditiveValue:
    """psi(tr(beta (x - 1))) on U^m, for floor(n/2)+1 <= m <= n."""
    if not s.n // 2 + 1 <= m <= s.n:
        raise ValueError(f"level m={m} outside [floor(n/2)+1, n]")
    if not in_U(s.order, m, x):
        raise NotInSubgroup(f"x is not in U^{m}")
    return psi_beta_raw(s.beta, x)


def psi_beta_raw(beta: FracMat, x: Mat) -> AdditiveValue:
    y = x - Mat.identity(x.ring, x.n, x.prec)
    return psi((beta @ y).trace())


def type_conductor(s: Stratum) -> int:
    if not is_simple_via_criterion(s):
        raise NotSimple("stratum is not simple")
    if s.order.tag == M:
        return s.n + 1
    return s.n // s.order.n + 2
