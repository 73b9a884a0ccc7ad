"""Truncated local rings O/p^k, their valuations and the additive character psi.

Two families are supported: the equal-characteristic rings F_q[t]/t^k and the
mixed-characteristic rings Z/p^k.  In both, an element known to precision k
is stored as a single integer *code* whose base-q digits are its expansion
coefficients in the uniformizer (t or p).  Truncation, multiplication by the
uniformizer and exact division by it are therefore the same integer
operations for both kinds; only addition and multiplication differ.

Residue field elements are integers in ``range(q)``.  For q = p^f with f > 1,
the base-p digits of such an integer are the coefficients of a polynomial in
a root of the chosen modulus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence, Union

from . import fpoly
from .errors import (
    BadModulus, InsufficientPrecision, MixedNeedsPrimeField, NonUnit,
    NotDivisible, NotPrime,
)

EQUAL = "equal"
MIXED = "mixed"

# Rings up to this many elements get precomputed addition and multiplication tables.
TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


class FiniteField:
    """The field F_q, q = p^f, on integer codes 0..q-1."""

    def __init__(self, p: int, f: int = 1, modulus: Sequence[int] | None = None):
        self.p, self.f, self.q = p, f, p ** f
        self.modulus = tuple(modulus) if modulus is not None else (0, 1)
        if f == 1:
            self._mul_t = None
            return
        q = self.q
        add = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]
        mul = [[self._mul_slow(a, b) for b in range(q)] for a in range(q)]
        self._add_t, self._mul_t = add, mul
        self._neg_t = [next(b for b in range(q) if add[a][b] == 0) for a in range(q)]
        self._inv_t = [0] + [next(b for b in range(q) if mul[a][b] == 1) for a in range(1, q)]

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.f):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def _from_digits(self, ds) -> int:
        return sum(d * self.p ** i for i, d in enumerate(ds))

    def _add_slow(self, a, b):
        return self._from_digits((x + y) % self.p for x, y in zip(self._digits(a), self._digits(b)))

    def _mul_slow(self, a, b):
        prime = FiniteField(self.p)
        prod = fpoly.mul(prime, fpoly.trim(self._digits(a)), fpoly.trim(self._digits(b)))
        rem = fpoly.mod(prime, prod, self.modulus)
        return self._from_digits(rem)

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p if self._mul_t is None else self._add_t[a][b]

    def neg(self, a: int) -> int:
        return -a % self.p if self._mul_t is None else self._neg_t[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p if self._mul_t is None else self._mul_t[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in a field")
        return pow(a, -1, self.p) if self._mul_t is None else self._inv_t[a]

    def pow(self, a: int, e: int) -> int:
        out = 1
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def trace(self, a: int) -> int:
        """Absolute trace to F_p, returned as an integer in range(p)."""
        acc, x = 0, a
        for _ in range(self.f):
            acc = self.add(acc, x)
            x = self.pow(x, self.p)
        return acc

    def elements(self) -> range:
        return range(self.q)

    def from_int(self, n: int) -> int:
        return n % self.p


def least_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Monic irreducible of degree f over F_p with the smallest lower-coefficient code."""
    prime = FiniteField(p)
    for code in range(p ** f):
        lower = [(code // p ** i) % p for i in range(f)]
        cand = tuple(lower) + (1,)
        if fpoly.is_irreducible(prime, cand):
            return cand
    raise BadModulus(f"no irreducible polynomial of degree {f} over F_{p}")


@dataclass(frozen=True)
class RingSpec:
    """Parameters of O/p^{r_w}: kind, residue characteristic p, residue degree f."""

    kind: str
    p: int
    f: int
    r_w: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def field(self) -> FiniteField:
        return field_of(self.p, self.f, self.modulus)

    def at(self, k: int) -> "Trunc":
        return trunc(self, k)

    def with_precision(self, r_w: int) -> "RingSpec":
        return RingSpec(self.kind, self.p, self.f, r_w, self.modulus)

    def to_json(self) -> dict:
        return {"kind": self.kind, "p": self.p, "f": self.f, "r": self.r_w,
                "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, d: dict) -> "RingSpec":
        modulus = d.get("modulus")
        return make_ring(d.get("kind", EQUAL), d["p"], d.get("f", 1), d["r"],
                         modulus=None if modulus is None or d.get("f", 1) == 1 else modulus)

    def __str__(self) -> str:
        if self.kind == MIXED:
            return f"Z/{self.p}^{self.r_w}"
        return f"F_{self.q}[t]/t^{self.r_w}"


@lru_cache(maxsize=None)
def field_of(p: int, f: int, modulus: tuple[int, ...]) -> FiniteField:
    return FiniteField(p, f, modulus)


def make_ring(kind: str = EQUAL, p: int = 2, f: int = 1, r_w: int = 3,
              modulus: Sequence[int] | None = None) -> RingSpec:
    if kind not in (EQUAL, MIXED):
        raise ValueError(f"unknown ring kind {kind!r}")
    if not is_prime(p):
        raise NotPrime(p)
    if f < 1 or r_w < 1:
        raise ValueError("need f >= 1 and r_w >= 1")
    if kind == MIXED and f > 1:
        raise MixedNeedsPrimeField(f"Z/p^r has residue field F_p, got f={f}")
    if f == 1:
        return RingSpec(kind, p, 1, r_w, (0, 1))
    if modulus is None:
        return RingSpec(kind, p, f, r_w, least_irreducible(p, f))
    mod = fpoly.trim(c % p for c in modulus)
    if len(mod) != f + 1 or mod[-1] != 1 or not fpoly.is_irreducible(FiniteField(p), mod):
        raise BadModulus(f"{list(modulus)} is not a monic irreducible of degree {f} over F_{p}")
    return RingSpec(kind, p, f, r_w, mod)


def ring_for_q(q: int, r_w: int, kind: str = EQUAL) -> RingSpec:
    """The ring with residue field of size q (a prime power)."""
    for p in range(2, q + 1):
        if q % p == 0:
            f = round(math.log(q, p))
            if p ** f != q:
                raise ValueError(f"{q} is not a prime power")
            return make_ring(kind, p, f, r_w)
    raise ValueError(f"{q} is not a prime power")


class Trunc:
    """The finite ring O/p^k acting on integer codes in range(q**k)."""

    def __init__(self, spec: RingSpec, k: int):
        self.spec, self.k = spec, k
        self.q = spec.q
        self.size = spec.q ** k
        self.F = spec.field
        if spec.kind == MIXED:
            self.add = self._add_mixed
            self.mul = self._mul_mixed
            self.neg = self._neg_mixed
        elif self.size <= TABLE_LIMIT:
            at = [[self._add_equal(a, b) for b in range(self.size)] for a in range(self.size)]
            mt = [[self._mul_equal(a, b) for b in range(self.size)] for a in range(self.size)]
            nt = [self._neg_equal(a) for a in range(self.size)]
            self.add_table, self.mul_table = at, mt
            self.add = lambda a, b: at[a][b]
            self.mul = lambda a, b: mt[a][b]
            self.neg = nt.__getitem__
        else:
            self.add = self._add_equal
            self.mul = self._mul_equal
            self.neg = self._neg_equal

    def __reduce__(self):
        return trunc, (self.spec, self.k)

    # digit helpers -------------------------------------------------
    def digits(self, a: int) -> list[int]:
        q, out = self.q, []
        for _ in range(self.k):
            a, d = divmod(a, q)
            out.append(d)
        return out

    def from_digits(self, ds) -> int:
        acc = 0
        for d in reversed(list(ds)):
            acc = acc * self.q + d
        return acc

    # arithmetic ---------------------------------------------------
    def _add_mixed(self, a, b):
        return (a + b) % self.size

    def _mul_mixed(self, a, b):
        return a * b % self.size

    def _neg_mixed(self, a):
        return -a % self.size

    def _add_equal(self, a, b):
        if self.spec.p == 2:
            return a ^ b
        F = self.F
        return self.from_digits(F.add(x, y) for x, y in zip(self.digits(a), self.digits(b)))

    def _neg_equal(self, a):
        if self.spec.p == 2:
            return a
        return self.from_digits(self.F.neg(x) for x in self.digits(a))

    def _mul_equal(self, a, b):
        F, k = self.F, self.k
        da, db = self.digits(a), self.digits(b)
        out = [0] * k
        for i, x in enumerate(da):
            if x:
                for j in range(k - i):
                    if db[j]:
                        out[i + j] = F.add(out[i + j], F.mul(x, db[j]))
        return self.from_digits(out)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def from_int(self, n: int) -> int:
        if self.spec.kind == MIXED:
            return n % self.size
        return n % self.spec.p if self.k else 0

    def val(self, a: int) -> int:
        """Number of trailing zero digits, capped at k."""
        if a == 0:
            return self.k
        v = 0
        while a % self.q == 0:
            a //= self.q
            v += 1
        return v

    def is_unit(self, a: int) -> bool:
        return self.k > 0 and a % self.q != 0

    def inv(self, a: int) -> int:
        if not self.is_unit(a):
            raise NonUnit(f"code {a} is not a unit of {self.spec} at precision {self.k}")
        if self.spec.kind == MIXED:
            return pow(a, -1, self.size)
        x = self.F.inv(a % self.q)
        two = self.from_int(2)
        for _ in range(max(1, self.k.bit_length())):
            x = self.mul(x, self.sub(two, self.mul(a, x)))
        return x

    def pow(self, a: int, e: int) -> int:
        out = self.from_int(1)
        for _ in range(e):
            out = self.mul(out, a)
        return out

    def residue(self, a: int) -> int:
        return a % self.q

    def elements(self) -> range:
        return range(self.size)

    def units(self) -> list[int]:
        return [a for a in range(self.size) if a % self.q]

    def additive_generators(self) -> list[int]:
        """Codes generating (O/p^k, +)."""
        if self.spec.kind == MIXED:
            return [1] if self.k else []
        basis = [self.spec.p ** i for i in range(self.spec.f)]
        return [b * self.q ** l for l in range(self.k) for b in basis]


@lru_cache(maxsize=None)
def trunc(spec: RingSpec, k: int) -> Trunc:
    return Trunc(spec, k)


# valuations ---------------------------------------------------------


@dataclass(frozen=True)
class Exact:
    v: int

    def __add__(self, shift: int) -> "Exact":
        return Exact(self.v + shift)


@dataclass(frozen=True)
class AtLeast:
    bound: int

    def __add__(self, shift: int) -> "AtLeast":
        return AtLeast(self.bound + shift)


Valuation = Union[Exact, AtLeast]


def at_least(val: Valuation, req: int) -> bool:
    """Decide val >= req, raising when the known digits cannot tell."""
    if isinstance(val, Exact):
        return val.v >= req
    if val.bound >= req:
        return True
    raise InsufficientPrecision(f"valuation known only to be >= {val.bound}, need {req}")


def lower_bound(val: Valuation) -> int:
    return val.v if isinstance(val, Exact) else val.bound


# elements -----------------------------------------------------------


@dataclass(frozen=True)
class Elem:
    """An element of O/p^{prec}, viewed inside O/p^{r_w}."""

    ring: RingSpec
    code: int
    prec: int

    def __post_init__(self):
        if not 0 <= self.prec <= self.ring.r_w:
            raise ValueError(f"precision {self.prec} outside [0, {self.ring.r_w}]")
        if not 0 <= self.code < self.ring.q ** self.prec:
            raise ValueError(f"code {self.code} not reduced modulo p^{self.prec}")

    @classmethod
    def of(cls, ring: RingSpec, value: int | Sequence[int] = 0, prec: int | None = None) -> "Elem":
        """Build from an integer or (equal kind) a coefficient list, lowest degree first."""
        prec = ring.r_w if prec is None else prec
        R = trunc(ring, prec)
        if isinstance(value, int):
            return cls(ring, R.from_int(value), prec)
        if ring.kind == MIXED:
            raise TypeError("mixed-kind elements are built from integers")
        coeffs = list(value)[:prec]
        if any(not 0 <= c < ring.q for c in coeffs):
            raise ValueError("coefficients must be residue-field codes")
        return cls(ring, R.from_digits(coeffs + [0] * (prec - len(coeffs))), prec)

    @classmethod
    def pi(cls, ring: RingSpec, prec: int | None = None) -> "Elem":
        prec = ring.r_w if prec is None else prec
        return cls(ring, ring.q % ring.q ** prec if prec else 0, prec)

    @property
    def R(self) -> Trunc:
        return trunc(self.ring, self.prec)

    @property
    def value(self) -> int | tuple[int, ...]:
        """Canonical residue: an integer (mixed) or the coefficient tuple (equal)."""
        if self.ring.kind == MIXED:
            return self.code
        return tuple(self.R.digits(self.code))

    def to_json(self):
        v = self.value
        return list(v) if isinstance(v, tuple) else v

    def _coerce(self, other) -> "Elem":
        if isinstance(other, Elem):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other
        if isinstance(other, int):
            return Elem.of(self.ring, other)
        return NotImplemented

    def _pair(self, other):
        other = self._coerce(other)
        k = min(self.prec, other.prec)
        m = self.ring.q ** k
        return trunc(self.ring, k), self.code % m, other.code % m

    def __add__(self, other):
        if self._coerce(other) is NotImplemented:
            return NotImplemented
        R, a, b = self._pair(other)
        return Elem(self.ring, R.add(a, b), R.k)

    __radd__ = __add__

    def __sub__(self, other):
        if self._coerce(other) is NotImplemented:
            return NotImplemented
        R, a, b = self._pair(other)
        return Elem(self.ring, R.sub(a, b), R.k)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if self._coerce(other) is NotImplemented:
            return NotImplemented
        R, a, b = self._pair(other)
        return Elem(self.ring, R.mul(a, b), R.k)

    __rmul__ = __mul__

    def __neg__(self):
        return Elem(self.ring, self.R.neg(self.code), self.prec)

    def __pow__(self, e: int):
        return Elem(self.ring, self.R.pow(self.code, e), self.prec)

    def inv(self) -> "Elem":
        return Elem(self.ring, self.R.inv(self.code), self.prec)

    def valuation(self) -> Valuation:
        if self.code == 0:
            return AtLeast(self.prec)
        return Exact(self.R.val(self.code))

    def is_unit(self) -> bool:
        return self.R.is_unit(self.code)

    def is_zero(self) -> bool:
        """True when every known digit vanishes."""
        return self.code == 0

    def residue(self) -> int:
        if self.prec == 0:
            raise InsufficientPrecision("no digits known")
        return self.code % self.ring.q

    def truncate(self, k: int) -> "Elem":
        k = min(k, self.prec)
        return Elem(self.ring, self.code % self.ring.q ** k, k)

    def lift(self, k: int | None = None) -> "Elem":
        """Reinterpret with zero digits up to precision k (default r_w)."""
        k = self.ring.r_w if k is None else k
        return Elem(self.ring, self.code, max(k, self.prec))

    def mul_pi(self, e: int = 1) -> "Elem":
        k = min(self.prec + e, self.ring.r_w)
        return Elem(self.ring, self.code * self.ring.q ** e % self.ring.q ** k, k)

    def div_pi(self, e: int = 1) -> "Elem":
        if e > self.prec:
            raise InsufficientPrecision(f"cannot divide by pi^{e} at precision {self.prec}")
        d = self.ring.q ** e
        if self.code % d:
            raise NotDivisible(f"{self} is not divisible by pi^{e}")
        return Elem(self.ring, self.code // d, self.prec - e)

    def __repr__(self) -> str:
        return f"Elem({self.value!r}, prec={self.prec})"


@dataclass(frozen=True)
class FracElem:
    """The fraction pi^{-s} * u."""

    s: int
    u: Elem

    @classmethod
    def make(cls, s: int, u: Elem) -> "FracElem":
        while s > 0 and u.prec > 0 and u.code % u.ring.q == 0:
            u = u.div_pi(1)
            s -= 1
        return cls(s, u)

    @property
    def ring(self) -> RingSpec:
        return self.u.ring

    def valuation(self) -> Valuation:
        return self.u.valuation() + (-self.s)

    def _common(self, other: "FracElem"):
        s = max(self.s, other.s)
        return s, self.u.mul_pi(s - self.s), other.u.mul_pi(s - other.s)

    def __add__(self, other):
        if isinstance(other, Elem):
            other = FracElem(0, other)
        s, a, b = self._common(other)
        return FracElem.make(s, a + b)

    def __neg__(self):
        return FracElem(self.s, -self.u)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Elem):
            other = FracElem(0, other)
        return FracElem.make(self.s + other.s, self.u * other.u)

    def __repr__(self) -> str:
        return f"pi^-{self.s}*{self.u!r}"


def valuation(x: Elem | FracElem) -> Valuation:
    return x.valuation()


# the additive character -----------------------------------------------


@dataclass(frozen=True)
class AdditiveValue:
    """The class of num / p^k in Q/Z."""

    p: int
    num: int
    k: int

    @classmethod
    def make(cls, p: int, num: int, k: int) -> "AdditiveValue":
        num %= p ** k
        if num == 0:
            return cls(p, 0, 0)
        while k > 0 and num % p == 0:
            num //= p
            k -= 1
        return cls(p, num, k)

    @classmethod
    def zero(cls, p: int) -> "AdditiveValue":
        return cls(p, 0, 0)

    def __add__(self, other: "AdditiveValue") -> "AdditiveValue":
        k = max(self.k, other.k)
        return AdditiveValue.make(self.p, self.num * self.p ** (k - self.k)
                                  + other.num * self.p ** (k - other.k), k)

    def __neg__(self) -> "AdditiveValue":
        return AdditiveValue.make(self.p, -self.num, self.k)

    def __sub__(self, other: "AdditiveValue") -> "AdditiveValue":
        return self + (-other)

    def is_zero(self) -> bool:
        return self.num == 0

    def __repr__(self) -> str:
        return f"{self.num}/{self.p}^{self.k}"


def psi(x: FracElem | Elem) -> AdditiveValue:
    """The fixed additive character of conductor p_F, valued in Q/Z."""
    if isinstance(x, Elem):
        x = FracElem(0, x)
    u, s = x.u, x.s
    ring = u.ring
    if u.prec < s + 1:
        raise InsufficientPrecision(f"psi needs {s + 1} digits, have {u.prec}")
    if ring.kind == MIXED:
        return AdditiveValue.make(ring.p, u.code % ring.p ** (s + 1), s + 1)
    digit = (u.code // ring.q ** s) % ring.q
    return AdditiveValue.make(ring.p, ring.field.trace(digit), 1)


def all_elems(ring: RingSpec, prec: int | None = None) -> Iterator[Elem]:
    prec = ring.r_w if prec is None else prec
    for c in range(ring.q ** prec):
        yield Elem(ring, c, prec)

