"""Matrices over truncated rings and over the residue field.

A :class:`Mat` stores its entries as a flat row-major tuple of ring codes at
one uniform precision.  Residue-field matrices are simply matrices at
precision 1.  Polynomials over O are tuples of :class:`Elem` and polynomials
over F_q are tuples of field codes; both are listed constant term first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

from . import fpoly
from .errors import (
    DimensionTooLarge, InsufficientPrecision, NonUnit, NotFound, PrecisionTooLow,
)
from .ring import AtLeast, Elem, Exact, FracElem, RingSpec, Trunc, Valuation, trunc

MAX_CHARPOLY_DIM = 6

OPoly = tuple[Elem, ...]
KPoly = tuple[int, ...]


# code-level kernels -----------------------------------------------------


def mm(R: Trunc, n: int, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    add, mul = R.add, R.mul
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            acc = 0
            for k in range(n):
                x = row[k]
                if x:
                    y = b[k * n + j]
                    if y:
                        acc = add(acc, mul(x, y))
            out.append(acc)
    return tuple(out)


def madd(R: Trunc, a, b) -> tuple[int, ...]:
    return tuple(map(R.add, a, b))


def msub(R: Trunc, a, b) -> tuple[int, ...]:
    return tuple(map(R.sub, a, b))


def mident(R: Trunc, n: int, c: int | None = None) -> tuple[int, ...]:
    c = R.from_int(1) if c is None else c
    return tuple(c if i == j else 0 for i in range(n) for j in range(n))


def charpoly_codes(R: Trunc, n: int, a: Sequence[int]) -> list[int]:
    """Berkowitz's division-free characteristic polynomial, constant term first."""
    if n > MAX_CHARPOLY_DIM:
        raise DimensionTooLarge(f"characteristic polynomial limited to n <= {MAX_CHARPOLY_DIM}")
    add, mul, neg = R.add, R.mul, R.neg
    A = [list(a[i * n:(i + 1) * n]) for i in range(n)]
    one = R.from_int(1)

    def dot(u, v):
        acc = 0
        for x, y in zip(u, v):
            acc = add(acc, mul(x, y))
        return acc

    coeffs = [one, neg(A[0][0])]  # highest degree first
    for r in range(1, n):
        row = A[r][:r]
        t = [one, neg(A[r][r])]
        v = [A[i][r] for i in range(r)]
        for _ in range(r):
            t.append(neg(dot(row, v)))
            v = [dot(A[i][:r], v) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = 0
            for k in range(len(coeffs)):
                if 0 <= i - k < len(t):
                    acc = add(acc, mul(t[i - k], coeffs[k]))
            new.append(acc)
        coeffs = new
    return coeffs[::-1]


def det_codes(R: Trunc, n: int, a: Sequence[int]) -> int:
    if n == 1:
        return a[0]
    if n == 2:
        return R.sub(R.mul(a[0], a[3]), R.mul(a[1], a[2]))
    c0 = charpoly_codes(R, n, a)[0]
    return c0 if n % 2 == 0 else R.neg(c0)


def inverse_codes(R: Trunc, n: int, a: Sequence[int]) -> tuple[int, ...]:
    """Gauss-Jordan elimination with unit pivots; raises NonUnit if singular mod p."""
    M = [list(a[i * n:(i + 1) * n]) + [R.from_int(1) if i == j else 0 for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if R.is_unit(M[r][col])), None)
        if piv is None:
            raise NonUnit("matrix is not invertible")
        M[col], M[piv] = M[piv], M[col]
        inv = R.inv(M[col][col])
        M[col] = [R.mul(inv, x) for x in M[col]]
        for r in range(n):
            if r != col and M[r][col]:
                c = M[r][col]
                M[r] = [R.sub(x, R.mul(c, y)) for x, y in zip(M[r], M[col])]
    return tuple(x for row in M for x in row[n:])


def rank_codes(F, rows: list[list[int]]) -> int:
    """Rank over the residue field F of a list of row vectors (field codes)."""
    M = [list(r) for r in rows]
    rank, ncols = 0, len(M[0]) if M else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][col]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = F.inv(M[rank][col])
        M[rank] = [F.mul(inv, x) for x in M[rank]]
        for r in range(len(M)):
            if r != rank and M[r][col]:
                c = M[r][col]
                M[r] = [F.sub(x, F.mul(c, y)) for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


# matrices ---------------------------------------------------------------


@dataclass(frozen=True)
class Mat:
    """An n x n matrix over O/p^{prec}."""

    ring: RingSpec
    n: int
    codes: tuple[int, ...]
    prec: int

    def __post_init__(self):
        if len(self.codes) != self.n * self.n:
            raise ValueError("wrong number of entries")
        bound = self.ring.q ** self.prec
        if any(not 0 <= c < bound for c in self.codes):
            raise ValueError("entries not reduced modulo p^prec")

    # construction --------------------------------------------------
    @classmethod
    def of(cls, ring: RingSpec, rows, prec: int | None = None) -> "Mat":
        """Build from nested rows of ints, coefficient lists or Elems."""
        prec = ring.r_w if prec is None else prec
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        entries = [x if isinstance(x, Elem) else Elem.of(ring, x, prec) for r in rows for x in r]
        prec = min([prec] + [e.prec for e in entries])
        return cls(ring, n, tuple(e.code % ring.q ** prec for e in entries), prec)

    @classmethod
    def from_elems(cls, ring: RingSpec, n: int, entries: Iterable[Elem]) -> "Mat":
        entries = list(entries)
        prec = min(e.prec for e in entries)
        return cls(ring, n, tuple(e.code % ring.q ** prec for e in entries), prec)

    @classmethod
    def identity(cls, ring: RingSpec, n: int, prec: int | None = None) -> "Mat":
        return cls.scalar(ring, n, 1, prec)

    @classmethod
    def zero(cls, ring: RingSpec, n: int, prec: int | None = None) -> "Mat":
        prec = ring.r_w if prec is None else prec
        return cls(ring, n, (0,) * (n * n), prec)

    @classmethod
    def scalar(cls, ring: RingSpec, n: int, c: int | Elem, prec: int | None = None) -> "Mat":
        prec = ring.r_w if prec is None else prec
        if not isinstance(c, Elem):
            c = Elem.of(ring, c, prec)
        prec = min(prec, c.prec)
        return cls(ring, n, mident(trunc(ring, prec), n, c.code % ring.q ** prec), prec)

    # access ---------------------------------------------------------
    @property
    def R(self) -> Trunc:
        return trunc(self.ring, self.prec)

    def __getitem__(self, ij: tuple[int, int]) -> Elem:
        i, j = ij
        return Elem(self.ring, self.codes[i * self.n + j], self.prec)

    def rows(self) -> list[list[Elem]]:
        return [[self[i, j] for j in range(self.n)] for i in range(self.n)]

    def row_codes(self) -> list[tuple[int, ...]]:
        n = self.n
        return [self.codes[i * n:(i + 1) * n] for i in range(n)]

    def values(self) -> list[list]:
        return [[e.value for e in row] for row in self.rows()]

    def to_json(self) -> dict:
        return {"ring": self.ring.to_json(), "n": self.n,
                "entries": [[e.to_json() for e in row] for row in self.rows()]}

    @classmethod
    def from_json(cls, d: dict, prec: int | None = None) -> "Mat":
        ring = RingSpec.from_json(d["ring"])
        return cls.of(ring, d["entries"], prec)

    def __repr__(self) -> str:
        return f"Mat({self.values()}, prec={self.prec})"

    # arithmetic -------------------------------------------------------
    def _align(self, other: "Mat"):
        if other.ring != self.ring or other.n != self.n:
            raise ValueError("incompatible matrices")
        k = min(self.prec, other.prec)
        m = self.ring.q ** k
        a = self.codes if k == self.prec else tuple(c % m for c in self.codes)
        b = other.codes if k == other.prec else tuple(c % m for c in other.codes)
        return trunc(self.ring, k), a, b

    def __add__(self, other: "Mat") -> "Mat":
        R, a, b = self._align(other)
        return Mat(self.ring, self.n, madd(R, a, b), R.k)

    def __sub__(self, other: "Mat") -> "Mat":
        R, a, b = self._align(other)
        return Mat(self.ring, self.n, msub(R, a, b), R.k)

    def __neg__(self) -> "Mat":
        return Mat(self.ring, self.n, tuple(map(self.R.neg, self.codes)), self.prec)

    def __matmul__(self, other: "Mat") -> "Mat":
        R, a, b = self._align(other)
        return Mat(self.ring, self.n, mm(R, self.n, a, b), R.k)

    def __mul__(self, other) -> "Mat":
        if isinstance(other, Mat):
            return self @ other
        c = other if isinstance(other, Elem) else Elem.of(self.ring, other)
        k = min(self.prec, c.prec)
        R = trunc(self.ring, k)
        m = self.ring.q ** k
        return Mat(self.ring, self.n, tuple(R.mul(x % m, c.code % m) for x in self.codes), k)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "Mat":
        out = Mat.identity(self.ring, self.n, self.prec)
        for _ in range(e):
            out = out @ self
        return out

    def transpose(self) -> "Mat":
        n = self.n
        return Mat(self.ring, n, tuple(self.codes[j * n + i] for i in range(n) for j in range(n)),
                   self.prec)

    def truncate(self, k: int) -> "Mat":
        k = min(k, self.prec)
        m = self.ring.q ** k
        return Mat(self.ring, self.n, tuple(c % m for c in self.codes), k)

    def lift(self, k: int | None = None) -> "Mat":
        """Reinterpret with zero higher digits at precision k (default r_w)."""
        k = self.ring.r_w if k is None else k
        return Mat(self.ring, self.n, self.codes, max(k, self.prec))

    def residue(self) -> "Mat":
        if self.prec < 1:
            raise InsufficientPrecision("no digits known")
        return self.truncate(1)

    def mul_pi(self, e: int = 1) -> "Mat":
        return Mat.from_elems(self.ring, self.n, (x.mul_pi(e) for x in self.entries()))

    def div_pi(self, e: int = 1) -> "Mat":
        return Mat.from_elems(self.ring, self.n, (x.div_pi(e) for x in self.entries()))

    def entries(self) -> Iterator[Elem]:
        for c in self.codes:
            yield Elem(self.ring, c, self.prec)

    def trace(self) -> Elem:
        R, n = self.R, self.n
        acc = 0
        for i in range(n):
            acc = R.add(acc, self.codes[i * n + i])
        return Elem(self.ring, acc, self.prec)

    def det(self) -> Elem:
        return Elem(self.ring, det_codes(self.R, self.n, self.codes), self.prec)

    def charpoly(self) -> OPoly:
        return tuple(Elem(self.ring, c, self.prec)
                     for c in charpoly_codes(self.R, self.n, self.codes))

    def is_invertible(self) -> bool:
        return self.det().is_unit()

    def inverse(self) -> "Mat":
        return Mat(self.ring, self.n, inverse_codes(self.R, self.n, self.codes), self.prec)

    def is_zero(self) -> bool:
        return not any(self.codes)

    def min_valuation(self) -> Valuation:
        vals = [x.valuation() for x in self.entries()]
        exact = [v.v for v in vals if isinstance(v, Exact)]
        return Exact(min(exact)) if exact else AtLeast(self.prec)

    def apply(self, v: Sequence[Elem]) -> tuple[Elem, ...]:
        rows = self.rows()
        return tuple(sum((a * b for a, b in zip(row, v)), Elem(self.ring, 0, self.prec))
                     for row in rows)


def charpoly(A: Mat) -> OPoly:
    return A.charpoly()


def det(A: Mat) -> Elem:
    return A.det()


def trace(A: Mat) -> Elem:
    return A.trace()


@dataclass(frozen=True)
class FracMat:
    """The matrix pi^{-s} * m."""

    s: int
    m: Mat

    @classmethod
    def make(cls, s: int, m: Mat) -> "FracMat":
        q = m.ring.q
        while s > 0 and m.prec > 0 and all(c % q == 0 for c in m.codes):
            m = m.div_pi(1)
            s -= 1
        return cls(s, m)

    @classmethod
    def integral(cls, m: Mat) -> "FracMat":
        return cls(0, m)

    @property
    def ring(self) -> RingSpec:
        return self.m.ring

    @property
    def n(self) -> int:
        return self.m.n

    def entry(self, i: int, j: int) -> FracElem:
        return FracElem(self.s, self.m[i, j])

    def _common(self, other: "FracMat"):
        s = max(self.s, other.s)
        return s, self.m.mul_pi(s - self.s), other.m.mul_pi(s - other.s)

    def __add__(self, other: "FracMat") -> "FracMat":
        s, a, b = self._common(other)
        return FracMat.make(s, a + b)

    def __sub__(self, other: "FracMat") -> "FracMat":
        s, a, b = self._common(other)
        return FracMat.make(s, a - b)

    def __neg__(self) -> "FracMat":
        return FracMat(self.s, -self.m)

    def __matmul__(self, other) -> "FracMat":
        if isinstance(other, Mat):
            other = FracMat(0, other)
        return FracMat.make(self.s + other.s, self.m @ other.m)

    def __rmatmul__(self, other: Mat) -> "FracMat":
        return FracMat(0, other) @ self

    def scale_pi(self, e: int) -> "FracMat":
        """Multiply by pi^e (e may be negative)."""
        if e >= 0:
            take = min(e, self.s)
            return FracMat.make(self.s - take, self.m.mul_pi(e - take) if e > take else self.m)
        return FracMat.make(self.s - e, self.m)

    def __pow__(self, e: int) -> "FracMat":
        return FracMat.make(self.s * e, self.m ** e)

    def trace(self) -> FracElem:
        return FracElem.make(self.s, self.m.trace())

    def det_valuation(self) -> Valuation:
        """Valuation of det, pi^{-s n} * det(m)."""
        return self.m.det().valuation() + (-self.s * self.n)

    def to_json(self) -> dict:
        return {"s": self.s, "mat": self.m.to_json()}

    @classmethod
    def from_json(cls, d: dict) -> "FracMat":
        return cls.make(d["s"], Mat.from_json(d["mat"]))

    def __repr__(self) -> str:
        return f"pi^-{self.s}*{self.m!r}"


# polynomials ----------------------------------------------------------------


def reduce_poly(f: OPoly) -> KPoly:
    return fpoly.trim(c.residue() for c in f)


def kpoly_irreducible(f: KPoly, field) -> bool:
    return fpoly.is_irreducible(field, fpoly.trim(f))


def eisenstein(f: OPoly) -> bool:
    """val(a_i) >= 1 for 0 < i < n and val(a_0) exactly 1."""
    lower = f[:-1]
    if min(c.prec for c in lower) < 2:
        raise PrecisionTooLow("Eisenstein test needs coefficients known mod p^2")
    if any(c.residue() for c in lower[1:]):
        return False
    return lower[0].valuation() == Exact(1)


def companion(f: OPoly) -> Mat:
    """Companion matrix: ones below the diagonal, last column -a_0 .. -a_{n-1}."""
    ring = f[0].ring
    n = len(f) - 1
    prec = min(c.prec for c in f)
    R = trunc(ring, prec)
    one = R.from_int(1)
    codes = [0] * (n * n)
    for i in range(1, n):
        codes[i * n + i - 1] = one
    for i in range(n):
        codes[i * n + n - 1] = R.neg(f[i].code % R.size)
    return Mat(ring, n, tuple(codes), prec)


def poly_from_values(ring: RingSpec, coeffs, prec: int | None = None) -> OPoly:
    return tuple(c if isinstance(c, Elem) else Elem.of(ring, c, prec) for c in coeffs)


# residue-field linear algebra -----------------------------------------------


def commutant_dim(A: Mat) -> int:
    """Dimension over F_q of {X : XA = AX} for the reduction of A mod p."""
    A = A.residue()
    n, F = A.n, A.ring.field
    a = A.codes
    rows = []
    # coefficient of X[k][l] in (XA - AX)[i][j]
    for i in range(n):
        for j in range(n):
            row = [0] * (n * n)
            for l in range(n):
                row[i * n + l] = F.add(row[i * n + l], a[l * n + j])
            for k in range(n):
                row[k * n + j] = F.sub(row[k * n + j], a[i * n + k])
            rows.append(row)
    return n * n - rank_codes(F, rows)


def is_regular_modp(A: Mat) -> bool:
    return commutant_dim(A) == A.n


def min_poly_degree_modp(A: Mat) -> int:
    """Degree of the minimal polynomial of A mod p, by ranks of power spans."""
    A = A.residue()
    F = A.ring.field
    powers = [list(Mat.identity(A.ring, A.n, 1).codes)]
    P = Mat.identity(A.ring, A.n, 1)
    for d in range(1, A.n + 1):
        P = P @ A
        powers.append(list(P.codes))
        if rank_codes(F, powers) == d:
            return d
    return A.n


def krylov(M: Mat, v: Sequence[Elem]) -> Mat:
    """The matrix with columns v, Mv, ..., M^{n-1} v."""
    cols = [tuple(v)]
    for _ in range(M.n - 1):
        cols.append(M.apply(cols[-1]))
    n = M.n
    return Mat.from_elems(M.ring, n, (cols[j][i] for i in range(n) for j in range(n)))


def cyclic_vector(M: Mat) -> tuple[Elem, ...]:
    """First residue vector (lexicographic order) that is cyclic for M, lifted by zeros."""
    q, n = M.ring.q, M.n
    Mbar = M.residue()
    for digits in product(range(q), repeat=n):
        if not any(digits):
            continue
        v = tuple(Elem(M.ring, d, 1) for d in digits)
        if krylov(Mbar, v).is_invertible():
            return tuple(Elem(M.ring, d, M.prec) for d in digits)
    raise NotFound("no cyclic vector: the reduction mod p is not regular")


def is_regular_by_cyclic_vector(A: Mat) -> bool:
    try:
        cyclic_vector(A.residue())
        return True
    except NotFound:
        return False


def reduce_to_companion(M: Mat) -> Mat:
    """g with g^{-1} M g = companion(charpoly(M)), for Eisenstein charpoly."""
    f = M.charpoly()
    if not eisenstein(f):
        raise ValueError("characteristic polynomial is not Eisenstein")
    g = krylov(M, cyclic_vector(M))
    return g


# fast matrix spaces for enumeration -------------------------------------------


class MatSpace:
    """M_n(O/p^k) on flat code tuples, with the group GL_n(O/p^k)."""

    def __init__(self, ring: RingSpec, n: int, k: int):
        self.ring, self.n, self.k = ring, n, k
        self.R = trunc(ring, k)
        self.q = ring.q
        self.one = mident(self.R, n)
        self.zero = (0,) * (n * n)

    @property
    def count(self) -> int:
        return self.R.size ** (self.n * self.n)

    def mul(self, a, b):
        return mm(self.R, self.n, a, b)

    def add(self, a, b):
        return madd(self.R, a, b)

    def sub(self, a, b):
        return msub(self.R, a, b)

    def scalar(self, c: int):
        return mident(self.R, self.n, c)

    def det(self, a) -> int:
        return det_codes(self.R, self.n, a)

    def is_invertible(self, a) -> bool:
        return self.R.is_unit(self.det(a))

    def inv(self, a):
        return inverse_codes(self.R, self.n, a)

    def conj(self, g, g_inv, x):
        return mm(self.R, self.n, mm(self.R, self.n, g, x), g_inv)

    def reduce(self, a, k: int):
        m = self.q ** k
        return tuple(c % m for c in a)

    def to_mat(self, a) -> Mat:
        return Mat(self.ring, self.n, tuple(a), self.k)

    def from_mat(self, M: Mat):
        if M.prec < self.k:
            raise InsufficientPrecision(f"need precision {self.k}, matrix has {M.prec}")
        return M.truncate(self.k).codes

    def all_matrices(self) -> Iterator[tuple[int, ...]]:
        return product(range(self.R.size), repeat=self.n * self.n)

    def gl_elements(self) -> list[tuple[int, ...]]:
        return [a for a in self.all_matrices() if self.is_invertible(a)]

    def elementary(self, i: int, j: int, c: int):
        e = list(self.one)
        e[i * self.n + j] = c
        return tuple(e)

    @cached_property
    def generators(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """Pairs (g, g^{-1}) generating GL_n(O/p^k): transvections and diag(u, 1, ..., 1)."""
        n, R = self.n, self.R
        gens = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    for c in R.additive_generators():
                        gens.append((self.elementary(i, j, c), self.elementary(i, j, R.neg(c))))
        for u in R.units():
            if u != R.from_int(1):
                g = self.elementary(0, 0, u)
                gens.append((g, self.elementary(0, 0, R.inv(u))))
        return gens
