"""Exhaustive computations inside the finite groups GL_n(O/p^r).

Subgroups are given by entry-wise valuation requirements (a SubgroupSpec)
and are enumerated constructively.  One-dimensional characters are exact
AdditiveValue-valued functions with memoized tables.  The checks at the end
of the module reproduce, by brute force, the finite-group facts used in the
classification of cuspidal types for GL_2 and GL_p.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable

from .errors import (
    DomainMismatch, InsufficientPrecision, NotAGroup, PrecisionTooLow, SizeGuard,
)
from .matlin import FracMat, Mat, MatSpace, eisenstein
from .orders import I, OrderKind, pattern
from .ring import AdditiveValue, Elem, Exact, RingSpec, at_least, psi, trunc

DEFAULT_GUARD = 2 ** 20
INF = 10 ** 9

ONE, SCALAR, GL = "one", "scalar", "gl"

Codes = tuple[int, ...]


# subgroups ---------------------------------------------------------------------


@dataclass(frozen=True)
class SubgroupSpec:
    """Entry-wise valuation requirements with a diagonal rule.

    ``one``: x - 1 meets ``reqs``.  ``scalar``: x[0][0] is a unit, every other
    diagonal entry is congruent to it to the stated depth, off-diagonal
    entries meet ``reqs``.  ``gl``: x meets ``reqs`` and det x is a unit.
    Requirements above the truncation r are read as "zero mod p^r".
    """

    n: int
    reqs: tuple[tuple[int, ...], ...]
    diag: str = ONE
    name: str = ""

    def contains(self, S: MatSpace, x: Codes) -> bool:
        n, R, r = self.n, S.R, S.k
        one = R.from_int(1)
        for i in range(n):
            for j in range(n):
                c = x[i * n + j]
                if i == j:
                    if self.diag == ONE:
                        c = R.sub(c, one)
                    elif self.diag == SCALAR:
                        if i == 0:
                            if not R.is_unit(c):
                                return False
                            continue
                        c = R.sub(c, x[0])
                if R.val(c) < min(self.reqs[i][j], r):
                    return False
        return self.diag != GL or S.is_invertible(x)

    def elements(self, S: MatSpace, guard: int = DEFAULT_GUARD) -> list[Codes]:
        n, R, r = self.n, S.R, S.k
        one = R.from_int(1)
        step = lambda i, j: S.q ** min(self.reqs[i][j], r)
        choices = []
        for i in range(n):
            for j in range(n):
                if i == j and self.diag == SCALAR and i == 0:
                    choices.append(R.units())
                else:
                    choices.append(list(range(0, R.size, step(i, j))))
        count = 1
        for c in choices:
            count *= len(c)
        if count > guard:
            raise SizeGuard(f"{count} candidate elements exceed guard {guard}")
        out = []
        for raw in product(*choices):
            x = list(raw)
            for i in range(n):
                k = i * n + i
                if self.diag == ONE:
                    x[k] = R.add(x[k], one)
                elif self.diag == SCALAR and i > 0:
                    x[k] = R.add(x[k], x[0])
            x = tuple(x)
            if S.is_invertible(x):
                out.append(x)
        return sorted(out)


def subgroup_elements(spec: SubgroupSpec, ring: RingSpec, r: int,
                      guard: int = DEFAULT_GUARD, validate: bool = True) -> list[Codes]:
    S = MatSpace(ring, spec.n, r)
    elems = spec.elements(S, guard)
    if validate:
        check_closed(S, elems)
    return elems


def greedy_generators(S: MatSpace, elems: list[Codes]) -> list[Codes]:
    """A generating subset of elems; raises NotAGroup unless elems is closed."""
    H = set(elems)
    if not H:
        raise NotAGroup("empty set")
    gens: list[Codes] = []
    span = {S.one}
    for h in elems:
        if h in span:
            continue
        gens.append(h)
        # span stays closed under right multiplication by gens, so it is the generated subgroup
        frontier = list(span)
        while frontier:
            nxt = []
            for y in frontier:
                for g in gens:
                    z = S.mul(y, g)
                    if z not in H:
                        raise NotAGroup(f"product {z} leaves the set")
                    if z not in span:
                        span.add(z)
                        nxt.append(z)
            frontier = nxt
    if span != H:
        raise NotAGroup("set is not generated by its own elements")
    return gens


def check_closed(S: MatSpace, elems: list[Codes]) -> None:
    greedy_generators(S, elems)


def congruence_subgroup(n: int, m: int) -> SubgroupSpec:
    """U_M^m = 1 + p^m M_n(O); m = 0 gives GL_n(O)."""
    if m == 0:
        return SubgroupSpec(n, tuple((0,) * n for _ in range(n)), GL, "GL")
    return SubgroupSpec(n, tuple((m,) * n for _ in range(n)), ONE, f"U_M^{m}")


def iwahori_subgroup(n: int, m: int) -> SubgroupSpec:
    """U_I^m; m = 0 gives the Iwahori group itself."""
    pat = pattern(OrderKind(I, n), m)
    return SubgroupSpec(n, pat, GL if m == 0 else ONE, f"U_I^{m}")


def scalar_mod_p_subgroup() -> SubgroupSpec:
    """S = union over units a of (a+p, O; p, a+p)."""
    return SubgroupSpec(2, ((0, 0), (1, 1)), SCALAR, "S")


def unipotent_subgroup(r: int) -> SubgroupSpec:
    """(1, p^{r-2}; 0, 1)."""
    return SubgroupSpec(2, ((INF, r - 2), (INF, INF)), ONE, "N")


def gl_elements(ring: RingSpec, n: int, r: int, guard: int = DEFAULT_GUARD) -> list[Codes]:
    S = MatSpace(ring, n, r)
    if S.count > guard:
        raise SizeGuard(f"{S.count} matrices exceed guard {guard}")
    return S.gl_elements()


# stabilizers ---------------------------------------------------------------------


def stabilizer_bruteforce(alpha_bar: Mat, r: int, guard: int = DEFAULT_GUARD) -> list[Codes]:
    """{g in GL_n(O/p^r) : g mod p^lp commutes with alpha_bar}, lp = prec(alpha_bar)."""
    ring, n, lp = alpha_bar.ring, alpha_bar.n, alpha_bar.prec
    Slp = MatSpace(ring, n, lp)
    a = alpha_bar.codes
    out = []
    for g in gl_elements(ring, n, r, guard):
        gb = Slp.reduce(g, lp)
        if Slp.mul(gb, a) == Slp.mul(a, gb):
            out.append(g)
    return out


def stabilizer_formula(beta_hat: Mat, r: int, guard: int = DEFAULT_GUARD) -> list[Codes]:
    """(O/p^r)[beta_hat]^x * K^1 for a 2x2 matrix regular mod p."""
    from .matlin import is_regular_modp
    if beta_hat.n != 2:
        raise ValueError("the product formula is only used for n = 2")
    if not is_regular_modp(beta_hat.residue()):
        raise ValueError("the product formula needs beta_hat regular mod p")
    ring = beta_hat.ring
    S = MatSpace(ring, 2, r)
    b = beta_hat.lift(r).truncate(r).codes
    R = S.R
    algebra = []
    for a0, a1 in product(range(R.size), repeat=2):
        u = S.add(S.scalar(a0), tuple(R.mul(a1, c) for c in b))
        if S.is_invertible(u):
            algebra.append(u)
    K1 = subgroup_elements(congruence_subgroup(2, 1), ring, r, guard, validate=False)
    return sorted({S.mul(u, k) for u in algebra for k in K1})


# conjugate intersections ------------------------------------------------------------


def frac_inverse(g: FracMat) -> FracMat:
    """Inverse of pi^{-s} m through the adjugate, for 2x2 m."""
    m = g.m
    if m.n != 2:
        raise ValueError("fractional inverse implemented for n = 2")
    d = m.det()
    v = d.valuation()
    if not isinstance(v, Exact):
        raise InsufficientPrecision("determinant vanishes at available precision")
    unit = d.div_pi(v.v).inv()
    a, b, c, e = m[0, 0], m[0, 1], m[1, 0], m[1, 1]
    adj = Mat.from_elems(m.ring, 2, [e * unit, -b * unit, -c * unit, a * unit])
    return FracMat.make(v.v, adj).scale_pi(g.s)


def _frac_contains(spec: SubgroupSpec, y: FracMat, r: int) -> bool:
    n = spec.n
    ring = y.ring
    one = Elem.of(ring, 1)
    for i in range(n):
        for j in range(n):
            e = y.entry(i, j)
            if i == j:
                if spec.diag == ONE:
                    e = e - one
                elif spec.diag == SCALAR:
                    if i == 0:
                        if e.valuation() != Exact(0):
                            return False
                        continue
                    e = e - y.entry(0, 0)
            if not at_least(e.valuation(), min(spec.reqs[i][j], r)):
                return False
    if spec.diag == GL:
        return y.det_valuation() == Exact(0)
    return True


def conj_intersect(spec: SubgroupSpec, g, other: SubgroupSpec, ring: RingSpec, r: int,
                   guard: int = DEFAULT_GUARD) -> list[Codes]:
    """Elements h of `other` mod p^r with g h g^{-1} in `spec`, i.e. g^{-1} spec g cap other."""
    g = g if isinstance(g, FracMat) else FracMat(0, g)
    g_inv = frac_inverse(g)
    S = MatSpace(ring, spec.n, r)
    out = []
    for h in other.elements(S, guard):
        hm = FracMat(0, Mat(ring, spec.n, h, r))
        if _frac_contains(spec, g @ hm @ g_inv, r):
            out.append(h)
    return out


def g_one(ring: RingSpec, n: int, c: int = 1) -> Mat:
    """diag(1, c pi^n)."""
    return Mat.of(ring, [[1, 0], [0, Elem.of(ring, c).mul_pi(n)]])


def g_two(ring: RingSpec, n: int, c: int = 1) -> Mat:
    """diag(c pi^n, 1)."""
    return Mat.of(ring, [[Elem.of(ring, c).mul_pi(n), 0], [0, 1]])


def displayed_pattern(which: int, n: int, r: int) -> SubgroupSpec:
    """The congruence pattern claimed for (U_M^{r-1})^{g} cap Stab."""
    if which == 1:
        reqs = ((r - 1, r - 1 + n), (max(r - 1 - n, 1), r - 1))
    else:
        reqs = ((r - 1, max(r - 1 - n, 0)), (r - 1 + n, r - 1))
    return SubgroupSpec(2, reqs, ONE, f"display{which}")


# characters ------------------------------------------------------------------------


@dataclass
class Character1D:
    """A one-dimensional character on a subgroup of GL_n(O/p^r), valued in Q/Z."""

    ring: RingSpec
    n: int
    r: int
    domain: SubgroupSpec
    rule: Callable[[Codes], AdditiveValue]
    name: str = ""
    table: dict = field(default_factory=dict, repr=False)

    @cached_property
    def space(self) -> MatSpace:
        return MatSpace(self.ring, self.n, self.r)

    def __call__(self, h: Codes) -> AdditiveValue:
        try:
            return self.table[h]
        except KeyError:
            if not self.domain.contains(self.space, h):
                raise DomainMismatch(f"{h} is outside the domain of {self.name}")
            v = self.table[h] = self.rule(h)
            return v


def theta_value(beta: FracMat, ring: RingSpec, r: int, h: Codes, a: int | None = None) -> AdditiveValue:
    """psi(tr(a^{-1} beta x)) for h = a Id + x; a defaults to h[0][0]."""
    n = beta.n
    R = trunc(ring, r)
    a = h[0] if a is None else a
    x = Mat(ring, n, tuple(R.sub(c, a) if i % (n + 1) == 0 else c for i, c in enumerate(h)), r)
    a_inv = Elem(ring, R.inv(a), r)
    return psi((beta @ x).trace() * a_inv)


def beta_one(ring: RingSpec) -> FracMat:
    return FracMat(1, Mat.of(ring, [[0, 1], [Elem.pi(ring), 0]]))


def beta_two(ring: RingSpec) -> FracMat:
    return FracMat(1, Mat.of(ring, [[0, 1], [0, 0]]))


def beta_perturbed(ring: RingSpec) -> FracMat:
    """beta_2 with a unit in the lower-left corner."""
    return FracMat(1, Mat.of(ring, [[0, 1], [1, 0]]))


def theta_from_beta(beta: FracMat, ring: RingSpec, r: int = 2, name: str = "") -> Character1D:
    return Character1D(ring, 2, r, scalar_mod_p_subgroup(),
                       lambda h: theta_value(beta, ring, r, h), name)


def theta_build(which: int, ring: RingSpec) -> Character1D:
    beta = {1: beta_one, 2: beta_two}[which](ring)
    return theta_from_beta(beta, ring, 2, f"theta{which}")


def trivial_character(ring: RingSpec, r: int = 2) -> Character1D:
    return Character1D(ring, 2, r, scalar_mod_p_subgroup(),
                       lambda h: AdditiveValue.zero(ring.p), "trivial")


def char_trivial_on(chi: Character1D, spec: SubgroupSpec) -> bool:
    S = chi.space
    return all(chi(h).is_zero() for h in spec.elements(S))


def _first_or_none(it):
    return next(iter(it), None)


@dataclass
class Report:
    check: str
    params: dict
    passed: bool
    witness: object = None

    def to_json(self) -> dict:
        d = {"check": self.check, "params": self.params, "pass": self.passed}
        if self.witness is not None or not self.passed:
            d["witness"] = self.witness
        return d

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = "" if self.passed or self.witness is None else f"  witness={self.witness}"
        return f"[{status}] {self.check} {self.params}{extra}"


def well_defined_witness(beta: FracMat, ring: RingSpec, r: int = 2):
    """A pair of decompositions of one element of S giving different values, if any."""
    S = MatSpace(ring, 2, r)
    R = S.R
    for h in scalar_mod_p_subgroup().elements(S):
        base = theta_value(beta, ring, r, h)
        for t in range(0, R.size, ring.q):
            a = R.add(h[0], t)
            if a != h[0] and R.val(R.sub(h[3], a)) >= 1:
                v = theta_value(beta, ring, r, h, a)
                if v != base:
                    return {"element": h, "a": a, "values": [str(base), str(v)]}
    return None


def multiplicativity_witness(chi: Character1D, exhaustive: bool = False):
    """A pair breaking chi(h1 h2) = chi(h1) + chi(h2), or None.

    By default h1 runs over a generating set, which is equivalent: additivity
    in the first slot for generators extends to all words by induction.
    """
    S = chi.space
    elems = chi.domain.elements(S)
    vals = {h: chi(h) for h in elems}
    for h1 in (elems if exhaustive else greedy_generators(S, elems)):
        v1 = vals[h1]
        for h2 in elems:
            if vals[S.mul(h1, h2)] != v1 + vals[h2]:
                return {"pair": [h1, h2]}
    return None


def theta_checks(ring: RingSpec) -> list[Report]:
    q = ring.q
    S = MatSpace(ring, 2, 2)
    alpha = Mat.of(ring, [[0, 1], [0, 0]], 1)
    stab = set(stabilizer_bruteforce(alpha, 2))
    dom = set(scalar_mod_p_subgroup().elements(S))
    reports = [Report("stabilizer_is_S", {"q": q}, stab == dom)]
    K1 = congruence_subgroup(2, 1).elements(S)
    b1 = beta_one(ring)
    for which in (1, 2):
        beta = {1: b1, 2: beta_two(ring)}[which]
        chi = theta_build(which, ring)
        reports.append(Report(f"theta{which}_well_defined", {"q": q},
                              *_pass_witness(well_defined_witness(beta, ring))))
        reports.append(Report(f"theta{which}_multiplicative", {"q": q},
                              *_pass_witness(multiplicativity_witness(chi))))
        # on K^1 the character is psi(tr(pi^{-1} alpha x)) with alpha = pi*beta_1 mod p
        bad = _first_or_none(h for h in K1 if chi(h) != _psi_tr(b1, ring, h))
        nontrivial = any(not chi(h).is_zero() for h in K1)
        reports.append(Report(f"theta{which}_orbit_contains_pi_beta1_conductor_2", {"q": q},
                              bad is None and nontrivial, bad))
    return reports


def _pass_witness(w):
    return (w is None, w)


def _psi_tr(beta: FracMat, ring: RingSpec, h: Codes) -> AdditiveValue:
    n = beta.n
    x = Mat(ring, n, h, 2) - Mat.identity(ring, n, 2)
    return psi((beta @ x).trace())


def gl2_small_conductor_check(beta: FracMat, theta: Character1D, r: int) -> bool:
    """theta agrees with psi_beta on U_M^{floor((r+1)/2)} and is nontrivial on (1, p^{r-2}; 0, 1)."""
    if r not in (2, 3):
        raise ValueError("small-conductor check is for r in {2, 3}")
    if theta.r != r:
        raise DomainMismatch(f"theta lives mod p^{theta.r}, not mod p^{r}")
    scaled = beta.scale_pi(r - 1)
    if scaled.s:
        raise ValueError("pi^{r-1} beta is not integral")
    if not eisenstein(scaled.m.charpoly()):
        raise ValueError("pi^{r-1} beta does not have an Eisenstein characteristic polynomial")
    ring = theta.ring
    S = theta.space
    for h in congruence_subgroup(2, (r + 1) // 2).elements(S):
        x = Mat(ring, 2, h, r) - Mat.identity(ring, 2, r)
        if theta(h) != psi((beta @ x).trace()):
            return False
    return not char_trivial_on(theta, unipotent_subgroup(r))


def example4(ring: RingSpec) -> list[Report]:
    """Every claim of the worked GL_2 counterexample, as pass/fail reports."""
    q = ring.q
    reports = theta_checks(ring)
    th1, th2 = theta_build(1, ring), theta_build(2, ring)
    b1 = beta_one(ring)
    upper = SubgroupSpec(2, ((1, 0), (INF, 1)), ONE, "(1+p,O;0,1+p)")
    lower = SubgroupSpec(2, ((1, INF), (1, 1)), ONE, "(1+p,0;p,1+p)")
    reports.append(Report("theta2_trivial_on_(1+p,O;0,1+p)", {"q": q}, char_trivial_on(th2, upper)))
    reports.append(Report("theta1_nontrivial_on_(1+p,0;p,1+p)", {"q": q},
                          not char_trivial_on(th1, lower)))
    ok1 = gl2_small_conductor_check(b1, th1, 2)
    ok2 = gl2_small_conductor_check(b1, th2, 2)
    reports.append(Report("rho1_IsType", {"q": q}, ok1))
    reports.append(Report("rho2_NotType", {"q": q}, not ok2))
    return reports


# character checks ----------------------------------------------------------------------


def containment_witness(N: int, i: int, m: int, ring: RingSpec, r_w: int,
                        guard: int = DEFAULT_GUARD):
    """An element of U_M^{2+m} outside U_I^{i+N m} mod p^{r_w}, or None."""
    S = MatSpace(ring, N, r_w)
    target = iwahori_subgroup(N, i + N * m)
    for h in congruence_subgroup(N, 2 + m).elements(S, guard):
        if not target.contains(S, h):
            return h
    return None


def verify_containment(N: int, m: int, ring: RingSpec, r_w: int | None = None,
                       guard: int = DEFAULT_GUARD) -> Report:
    """U_I^{i+Nm} contains U_M^{2+m} for every 1 < i <= N+1."""
    r_w = 3 + m if r_w is None else r_w
    if r_w < 3 + m:
        raise PrecisionTooLow("need truncation at least 2 + m + 1")
    for i in range(2, N + 2):
        w = containment_witness(N, i, m, ring, r_w, guard)
        if w is not None:
            return Report("containment", {"N": N, "m": m, "q": ring.q}, False, {"i": i, "element": w})
    return Report("containment", {"N": N, "m": m, "q": ring.q}, True)


def det_character_scalar_check(tag: str, m: int, r: int, ring: RingSpec, n: int = 2) -> Report:
    """Characters of U^m/U^{m+1} that factor through det come from scalar beta."""
    kind = OrderKind(tag, n)
    if m < 1:
        raise ValueError("need m >= 1")
    S = MatSpace(ring, n, r)
    R, p = S.R, ring.p
    pat_m, pat_m1 = pattern(kind, m), pattern(kind, m + 1)
    slots = [(i, j) for i in range(n) for j in range(n) if pat_m1[i][j] > pat_m[i][j]]
    if any(pat_m[i][j] >= r for i, j in slots):
        raise PrecisionTooLow(f"truncation r={r} cannot see the quotient U^{m}/U^{m+1}")
    # quotient elements: coordinate vectors (residue digits in each slot)
    coords = list(product(range(ring.q), repeat=len(slots)))

    def element(cv):
        x = list(S.one)
        for (i, j), c in zip(slots, cv):
            x[i * n + j] = R.add(x[i * n + j], c * ring.q ** pat_m[i][j])
        return tuple(x)

    elems = [element(cv) for cv in coords]
    higher = subgroup_elements(SubgroupSpec(n, pat_m1, ONE), ring, r, validate=False)
    D_higher = {S.det(h) for h in higher}
    det_key = [min(R.mul(S.det(x), d) for d in D_higher) for x in elems]

    # F_p-linear functionals on the quotient, via F_p coordinates of each slot digit
    f = ring.f
    def fp_coords(cv):
        out = []
        for c in cv:
            for _ in range(f):
                c, d = divmod(c, p)
                out.append(d)
        return out
    vecs = [fp_coords(cv) for cv in coords]
    det_factoring = []
    for w in product(range(p), repeat=len(slots) * f):
        vals = [sum(a * b for a, b in zip(w, v)) % p for v in vecs]
        by_key = {}
        if all(by_key.setdefault(k, v) == v for k, v in zip(det_key, vals)):
            det_factoring.append(tuple(vals))

    scalar_chars = set()
    for c in range(ring.q):
        beta = FracMat.make(m // kind.e, Mat.scalar(ring, n, Elem(ring, c, 1).lift()))
        vals = []
        for x in elems:
            y = Mat(ring, n, x, r) - Mat.identity(ring, n, r)
            v = psi((beta @ y).trace())
            assert v.k <= 1
            vals.append(v.num)
        scalar_chars.add(tuple(vals))
    missing = [chi for chi in det_factoring if chi not in scalar_chars]
    params = {"order": tag, "m": m, "r": r, "q": ring.q, "n": n,
              "det_factoring": len(det_factoring)}
    return Report("det_character_scalar", params, not missing, missing[:1] or None)
