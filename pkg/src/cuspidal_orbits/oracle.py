"""Brute-force reference implementations used by the test suite.

Everything here shares only the ring and matrix arithmetic layer with the
rest of the package; the searches are deliberately naive.
"""

from __future__ import annotations

from itertools import permutations, product
from math import gcd

from . import fpoly
from .errors import InconclusiveFieldData, InsufficientPrecision, SizeGuard
from .matlin import FracMat, Mat, MatSpace
from .ring import RingSpec, ring_for_q, trunc

GUARD = 2 ** 20

Codes = tuple[int, ...]


def _full_gl(S: MatSpace) -> list[Codes]:
    return [g for g in product(range(S.R.size), repeat=S.n * S.n) if S.is_invertible(g)]


def _conjugate(S: MatSpace, gl: list[Codes], x: Codes, y: Codes) -> bool:
    return any(S.mul(g, x) == S.mul(y, g) for g in gl)


def brute_conjugacy_partition(q: int, n: int, lp: int, kind: str = "equal") -> list[frozenset]:
    """All of M_n(O/p^lp) split into conjugacy classes by direct testing."""
    if q ** (n * n * lp) > GUARD:
        raise SizeGuard(f"{q}^{n * n * lp} matrices exceed {GUARD}")
    ring = ring_for_q(q, lp, kind)
    S = MatSpace(ring, n, lp)
    gl = _full_gl(S)
    blocks: list[list[Codes]] = []
    for x in product(range(S.R.size), repeat=n * n):
        for block in blocks:
            if _conjugate(S, gl, block[0], x):
                block.append(x)
                break
        else:
            blocks.append([x])
    return sorted((frozenset(b) for b in blocks), key=min)


def brute_coset_intersect(class_members, j: int, lp: int, ring: RingSpec, n: int) -> bool:
    """Does the class meet {Pi^j B mod p^lp : B a unit of the Iwahori order}?"""
    if ring.q ** (n * n * lp) > GUARD:
        raise SizeGuard("coset too large to enumerate")
    S = MatSpace(ring, n, lp)
    R = S.R
    pi = [0] * (n * n)
    for i in range(n - 1):
        pi[i * n + i + 1] = R.from_int(1)
    pi[(n - 1) * n] = ring.q % R.size
    P = S.one
    for _ in range(j):
        P = S.mul(P, tuple(pi))
    members = set(class_members)
    for B in product(range(R.size), repeat=n * n):
        below = all(R.val(B[a * n + b]) >= 1 for a in range(n) for b in range(a))
        if below and S.is_invertible(B) and S.mul(P, B) in members:
            return True
    return False


def naive_closure(S: MatSpace, gens) -> set[Codes]:
    """The subgroup generated by gens, by multiplying until nothing new appears."""
    H = {S.one}
    while True:
        new = {S.mul(a, b) for a in H for b in gens} - H
        if not new:
            return H
        H |= new


# definitional minimality ----------------------------------------------------------


def leibniz_charpoly(m: Mat) -> list[int]:
    """det(x - m) by permutation expansion, constant coefficient first."""
    R, n = m.R, m.n

    def pmul(a, b):
        out = [0] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            for k, v in enumerate(b):
                out[i + k] = R.add(out[i + k], R.mul(u, v))
        return out

    def entry(i, k):
        c = R.neg(m.codes[i * n + k])
        return [c, R.from_int(1)] if i == k else [c]

    total = [0] * (n + 1)
    for perm in permutations(range(n)):
        sign = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b]) % 2
        term = [R.from_int(1)]
        for i in range(n):
            term = pmul(term, entry(i, perm[i]))
        for i, c in enumerate(term):
            total[i] = R.sub(total[i], c) if sign else R.add(total[i], c)
    return total


def min_poly_degree_search(ybar: Mat) -> int:
    """Least d with I, y, ..., y^d dependent over k, by searching all coefficient tuples."""
    F = ybar.ring.field
    n = ybar.n
    R1 = trunc(ybar.ring, 1)
    S = MatSpace(ybar.ring, n, 1)
    powers = [S.one]
    for d in range(1, n + 1):
        powers.append(S.mul(powers[-1], ybar.codes))
        for coeffs in product(range(F.q), repeat=d):
            acc = powers[d]
            for c, pw in zip(coeffs, powers):
                acc = tuple(R1.add(a, R1.mul(c, b)) for a, b in zip(acc, pw))
            if not any(acc):
                return d
    return n


def irreducible_by_search(f: tuple[int, ...], F) -> bool:
    n = fpoly.degree(f)
    for d in range(1, n // 2 + 1):
        for tail in product(range(F.q), repeat=d):
            g = tuple(tail) + (1,)
            if not fpoly.divmod_(F, f, g)[1]:
                return False
    return True


def _residue_in_base_field(ybar: Mat) -> bool:
    """Is ybar - a nilpotent for some a in k?  Then y mod p_E is a, of degree 1 over k."""
    S = MatSpace(ybar.ring, ybar.n, 1)
    for a in range(ybar.ring.q):
        z = S.sub(ybar.codes, S.scalar(a))
        p = S.one
        for _ in range(ybar.n):
            p = S.mul(p, z)
        if not any(p):
            return True
    return False


def _val(R, c: int):
    return None if c == 0 else R.val(c)


def brute_minimality(beta: FracMat) -> bool:
    """Minimality evaluated from the definition when F[beta] is visibly a field of degree n."""
    s, m, n = beta.s, beta.m, beta.n
    R = m.R
    cp = leibniz_charpoly(m)
    v0 = _val(R, cp[0])
    if v0 is None:
        raise InsufficientPrecision("determinant vanishes at available precision")
    d = v0 - s * n
    # unramified: the unit-normalized residue has irreducible characteristic polynomial
    vmin = min((R.val(c) for c in m.codes if c), default=None)
    if vmin is None:
        raise InsufficientPrecision("beta vanishes at available precision")
    u = m.div_pi(vmin)
    ubar = u.residue()
    F = beta.ring.field
    ucp = fpoly.trim(leibniz_charpoly(ubar))
    if irreducible_by_search(ucp, F):
        nu_E = d // n
        return gcd(nu_E, 1) == 1 and min_poly_degree_search(ubar) == n
    # totally ramified: Newton polygon of charpoly(beta) is one segment of slope d/n, gcd(d, n) = 1
    if gcd(d, n) == 1:
        ok = True
        for i in range(1, n):
            v = _val(R, cp[i])
            need = -(-(n - i) * d // n)
            shifted = None if v is None else v - s * (n - i)
            if shifted is None:
                if m.prec - s * (n - i) < need:
                    raise InsufficientPrecision("Newton polygon not determined")
            elif shifted < need:
                ok = False
        if ok:
            nu_E = d
            y = (beta ** n).scale_pi(-nu_E)
            if y.s:
                return False
            return gcd(nu_E, n) == 1 and _residue_in_base_field(y.m.residue())
    raise InconclusiveFieldData("F[beta] is not certified to be a degree-n field")
