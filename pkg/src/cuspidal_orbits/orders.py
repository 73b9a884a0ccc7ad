"""The maximal order M = M_n(O) and the standard Iwahori order I.

Both orders are described by valuation patterns: x lies in the m-th power
of the Jacobson radical exactly when every entry x[i][j] has valuation at
least ``pattern(kind, n, m)[i][j]``.  Fractional matrices pi^{-s} m are
handled by shifting the requirements, so negative powers never need to be
materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import InsufficientPrecision, NotInNormalizer
from .matlin import FracMat, Mat
from .ring import AtLeast, Elem, Exact, RingSpec, Valuation, at_least

M, I = "M", "I"


@dataclass(frozen=True)
class OrderKind:
    tag: str
    n: int

    def __post_init__(self):
        if self.tag not in (M, I):
            raise ValueError(f"order tag must be 'M' or 'I', got {self.tag!r}")
        if self.n < 2:
            raise ValueError("orders are defined here for n >= 2")

    @property
    def e(self) -> int:
        """Period of the lattice chain: P^e = p_F * A."""
        return 1 if self.tag == M else self.n


def ceil_div(a: int, b: int) -> int:
    return -(-a // b)


@lru_cache(maxsize=None)
def pattern(kind: OrderKind, m: int) -> tuple[tuple[int, ...], ...]:
    """Minimum entry valuations for membership in P^m."""
    n = kind.n
    if kind.tag == M:
        return tuple(tuple(m for _ in range(n)) for _ in range(n))
    return tuple(tuple(ceil_div(m - (j - i), n) for j in range(n)) for i in range(n))


def pi_element(kind: OrderKind, ring: RingSpec, prec: int | None = None) -> Mat:
    n = kind.n
    prec = ring.r_w if prec is None else prec
    if kind.tag == M:
        return Mat.scalar(ring, n, Elem.pi(ring, prec), prec)
    rows = [[0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = 1
    rows[n - 1][0] = Elem.pi(ring, prec)
    return Mat.of(ring, rows, prec)


def _as_frac(x) -> FracMat:
    return x if isinstance(x, FracMat) else FracMat(0, x)


def _entry_vals(x: FracMat):
    n = x.n
    for i in range(n):
        for j in range(n):
            yield i, j, x.entry(i, j).valuation()


def in_P(kind: OrderKind, m: int, x) -> bool:
    x = _as_frac(x)
    pat = pattern(kind, m)
    return all(at_least(v, pat[i][j]) for i, j, v in _entry_vals(x))


def in_U(kind: OrderKind, m: int, x: Mat) -> bool:
    if m < 1:
        raise ValueError("in_U needs m >= 1; use in_U0 for the unit group")
    return in_P(kind, m, x - Mat.identity(x.ring, x.n, x.prec))


def in_U0(kind: OrderKind, x: Mat) -> bool:
    if not in_P(kind, 0, x):
        return False
    if x.prec < 1:
        raise InsufficientPrecision("unit test needs one digit")
    return x.det().is_unit()


def nu(kind: OrderKind, x) -> Valuation:
    """Largest m with x in P^m, computed as a min over entries of n_e*v + offset."""
    x = _as_frac(x)
    e = kind.e
    exact, bounds = [], []
    for i, j, v in _entry_vals(x):
        off = (j - i) if kind.tag == I else 0
        if isinstance(v, Exact):
            exact.append(e * v.v + off)
        else:
            bounds.append(e * v.bound + off)
    if exact and (not bounds or min(exact) <= min(bounds)):
        return Exact(min(exact))
    return AtLeast(min(exact + bounds))


def pi_inverse_left(x: Mat) -> Mat:
    """Pi_I^{-1} x: rotate rows down and divide the former last row by pi."""
    n = x.n
    rows = x.rows()
    top = [e.div_pi(1) for e in rows[-1]]
    new = [top] + rows[:-1]
    return Mat.from_elems(x.ring, n, (e for row in new for e in row))


def iwahori_decompose(x) -> tuple[int, Mat]:
    """Write x = Pi_I^j * B with B a unit of I; j = nu_I(x)."""
    x = _as_frac(x)
    kind = OrderKind(I, x.n)
    v0 = nu(kind, FracMat(0, x.m))
    if not isinstance(v0, Exact):
        raise InsufficientPrecision("matrix is zero at the available precision")
    j0 = v0.v
    B = x.m
    for _ in range(j0):
        B = pi_inverse_left(B)
    if B.prec < 1:
        raise InsufficientPrecision("no digits left after removing Pi_I powers")
    if not in_U0(kind, B):
        raise NotInNormalizer("matrix is not a power of Pi_I times a unit of I")
    return j0 - x.s * kind.n, B
