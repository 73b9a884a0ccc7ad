"""Dense polynomials over a finite field.

A polynomial is a tuple of field codes, constant term first, with no
trailing zeros (the zero polynomial is the empty tuple).  The field is
any object exposing ``q``, ``add``, ``sub``, ``mul``, ``neg`` and ``inv``
on integer codes, such as :class:`cuspidal_orbits.ring.FiniteField`.
"""

from __future__ import annotations

Poly = tuple[int, ...]


def trim(a) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def degree(a: Poly) -> int:
    return len(a) - 1


def add(K, a: Poly, b: Poly) -> Poly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = K.add(out[i], c)
    return trim(out)


def sub(K, a: Poly, b: Poly) -> Poly:
    return add(K, a, tuple(K.neg(c) for c in b))


def mul(K, a: Poly, b: Poly) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = K.add(out[i + j], K.mul(x, y))
    return trim(out)


def divmod_(K, a: Poly, b: Poly) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    lead_inv = K.inv(b[-1])
    quo = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1, db - 1, -1):
        c = r[k]
        if c:
            c = K.mul(c, lead_inv)
            quo[k - db] = c
            for i, y in enumerate(b):
                r[k - db + i] = K.sub(r[k - db + i], K.mul(c, y))
    return trim(quo), trim(r[:db])


def mod(K, a: Poly, b: Poly) -> Poly:
    return divmod_(K, a, b)[1]


def monic(K, a: Poly) -> Poly:
    if not a:
        return a
    c = K.inv(a[-1])
    return tuple(K.mul(c, x) for x in a)


def gcd(K, a: Poly, b: Poly) -> Poly:
    while b:
        a, b = b, mod(K, a, b)
    return monic(K, a)


def powmod(K, a: Poly, e: int, m: Poly) -> Poly:
    result: Poly = (1,)
    base = mod(K, a, m)
    while e:
        if e & 1:
            result = mod(K, mul(K, result, base), m)
        base = mod(K, mul(K, base, base), m)
        e >>= 1
    return mod(K, result, m)


def is_irreducible(K, f: Poly) -> bool:
    """Irreducibility test: gcd(x^(q^d) - x, f) = 1 for every d <= deg/2."""
    n = degree(f)
    if n < 1:
        raise ValueError("irreducibility is only defined in positive degree")
    if n == 1:
        return True
    f = monic(K, f)
    x: Poly = (0, 1)
    h = x
    for _ in range(n // 2):
        h = powmod(K, h, K.q, f)
        if degree(gcd(K, sub(K, h, x), f)) > 0:
            return False
    return True


def evaluate(K, a: Poly, x: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = K.add(K.mul(acc, x), c)
    return acc
