"""Conjugacy orbits in M_n(O/p^{lp}) and their cuspidal-type classification.

A representation of GL_n(O) of conductor r >= 2 restricts on the congruence
subgroup K^l to a sum of characters indexed by one conjugacy class of
matrices mod p^{lp}, where l = floor((r+1)/2) and lp = r - l.  Each class
is stored through its lexicographically least member (as a row-major code
tuple) and classified by scalar twists into one of three labels:
``IrredModP`` (residual characteristic polynomial irreducible),
``PiForm(j)`` (the class meets Pi_I^j U_I) and ``NoCriterion``.
"""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable

from . import fpoly
from .errors import InsufficientPrecision, SizeGuard
from .matlin import (
    Mat, MatSpace, charpoly_codes, eisenstein, is_regular_modp, kpoly_irreducible,
)
from .orders import I, OrderKind, pattern
from .ring import AtLeast, Elem, Exact, RingSpec, trunc

DEFAULT_GUARD = 2 ** 24

IRRED = "IrredModP"
PIFORM = "PiForm"
NOCRIT = "NoCriterion"

IS_TYPE = "IsType"
NOT_TYPE = "NotType"
INDETERMINATE = "IndeterminateSmallConductor"


@dataclass(frozen=True)
class LevelData:
    r: int

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("orbit data needs conductor r >= 2")

    @property
    def l(self) -> int:
        return (self.r + 1) // 2

    @property
    def lp(self) -> int:
        return self.r - self.l


@dataclass(frozen=True)
class Orbit:
    level: LevelData
    rep: Mat
    size: int | None = None

    @property
    def space(self) -> MatSpace:
        return space(self.rep.ring, self.rep.n, self.level.lp)


@dataclass(frozen=True)
class ClassificationRecord:
    twist: Elem
    label: str
    j: int | None
    verdict: str
    regular: bool

    def to_json(self) -> dict:
        return {"twist": self.twist.to_json(), "label": self.label, "j": self.j,
                "verdict": self.verdict, "regular": self.regular}


@lru_cache(maxsize=None)
def space(ring: RingSpec, n: int, k: int) -> MatSpace:
    if k > ring.r_w:
        raise InsufficientPrecision(f"ring precision {ring.r_w} below {k}")
    return MatSpace(ring, n, k)


def _check_guard(S: MatSpace, guard: int) -> None:
    if S.count > guard:
        raise SizeGuard(f"{S.count} matrices exceed the size guard {guard}")


def orbit_members(S: MatSpace, x: tuple[int, ...]) -> set[tuple[int, ...]]:
    """Breadth-first closure of x under conjugation by the generators."""
    seen = {x}
    frontier = [x]
    gens = S.generators
    while frontier:
        nxt = []
        for y in frontier:
            for g, gi in gens:
                z = S.conj(g, gi, y)
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return seen


def orbit_of(mat: Mat, r: int, guard: int = DEFAULT_GUARD) -> Orbit:
    level = LevelData(r)
    if mat.prec < level.lp:
        raise InsufficientPrecision(f"matrix known to precision {mat.prec} < lp = {level.lp}")
    S = space(mat.ring, mat.n, level.lp)
    _check_guard(S, guard)
    members = orbit_members(S, S.from_mat(mat))
    return Orbit(level, S.to_mat(min(members)), len(members))


def members_of(o: Orbit) -> set[tuple[int, ...]]:
    S = o.space
    return orbit_members(S, S.from_mat(o.rep))


def enumerate_classes(ring: RingSpec, n: int, lp: int, r: int | None = None,
                      guard: int = DEFAULT_GUARD) -> list[Orbit]:
    """All conjugacy classes of M_n(O/p^{lp}), sorted by canonical representative."""
    level = LevelData(2 * lp if r is None else r)
    if level.lp != lp:
        raise ValueError(f"r={r} does not give lp={lp}")
    S = space(ring, n, lp)
    _check_guard(S, guard)
    seen: set[tuple[int, ...]] = set()
    out = []
    for x in S.all_matrices():
        if x in seen:
            continue
        members = orbit_members(S, x)
        seen |= members
        out.append(Orbit(level, S.to_mat(min(members)), len(members)))
    out.sort(key=lambda o: o.rep.codes)
    return out


def twist(o: Orbit, c: Elem | int, guard: int = DEFAULT_GUARD) -> Orbit:
    lp = o.level.lp
    if isinstance(c, int):
        c = Elem.of(o.rep.ring, c, lp)
    shift = Mat.scalar(o.rep.ring, o.rep.n, c.truncate(lp), lp)
    return orbit_of(o.rep + shift, o.level.r, guard)


def _residual_charpoly(rep: Mat) -> tuple[int, ...]:
    R1 = trunc(rep.ring, 1)
    return fpoly.trim(charpoly_codes(R1, rep.n, rep.truncate(1).codes))


def detect_irred(o: Orbit) -> bool:
    return kpoly_irreducible(_residual_charpoly(o.rep), o.rep.ring.field)


def newton_prefilter(rep: Mat, j: int) -> bool:
    """Necessary valuation pattern of charpoly(Pi_I^j B) visible mod p^{lp}."""
    n, lp = rep.n, rep.prec
    cp = rep.charpoly()
    for i in range(1, n):
        v = cp[n - i].valuation()
        if isinstance(v, Exact) and v.v < -(-j * i // n):
            return False
    v0 = cp[0].valuation()
    return v0 == Exact(j) if j < lp else isinstance(v0, AtLeast)


@lru_cache(maxsize=None)
def piform_set(ring: RingSpec, n: int, j: int, lp: int) -> frozenset:
    """{Pi_I^j B mod p^{lp} : B a unit of I}, as code tuples."""
    S = space(ring, n, lp)
    R = S.R
    pat = pattern(OrderKind(I, n), 0)
    choices = []
    for i in range(n):
        for k in range(n):
            v = min(pat[i][k], lp)
            step = ring.q ** v
            vals = range(0, R.size, step)
            if i == k:
                vals = [c for c in vals if R.is_unit(c)]
            choices.append(list(vals))
    pi_I = _pi_codes(S)
    P = S.one
    for _ in range(j):
        P = S.mul(P, pi_I)
    return frozenset(S.mul(P, B) for B in product(*choices))


def _pi_codes(S: MatSpace) -> tuple[int, ...]:
    n, R = S.n, S.R
    codes = [0] * (n * n)
    for i in range(n - 1):
        codes[i * n + i + 1] = R.from_int(1)
    codes[(n - 1) * n] = S.q % R.size
    return tuple(codes)


def detect_piform(o: Orbit, j: int, guard: int = DEFAULT_GUARD, fast: bool = True) -> bool:
    n, lp = o.rep.n, o.level.lp
    if not 0 < j < n:
        raise ValueError(f"need 0 < j < n, got j={j}")
    if fast:
        if not newton_prefilter(o.rep, j):
            return False
        if j == 1 and lp >= 2:
            return eisenstein(o.rep.charpoly())
    S = o.space
    _check_guard(S, guard)
    target = piform_set(o.rep.ring, n, j, lp)
    return not members_of(o).isdisjoint(target)


def is_regular_orbit(o: Orbit) -> bool:
    return is_regular_modp(o.rep.residue())


def _verdict(label: str, r: int) -> str:
    if label == IRRED:
        return IS_TYPE
    if label == PIFORM:
        return IS_TYPE if r >= 4 else INDETERMINATE
    return NOT_TYPE


def classify(o: Orbit, guard: int = DEFAULT_GUARD) -> ClassificationRecord:
    ring, n, lp = o.rep.ring, o.rep.n, o.level.lp
    regular = is_regular_orbit(o)
    twists = [Elem(ring, c, lp) for c in range(ring.q ** lp)]
    shifted = [o.rep + Mat.scalar(ring, n, c, lp) for c in twists]
    for c, m in zip(twists, shifted):
        if detect_irred(Orbit(o.level, m)):
            return ClassificationRecord(c, IRRED, None, IS_TYPE, regular)
    for j in range(1, n):
        for c, m in zip(twists, shifted):
            if detect_piform(Orbit(o.level, m), j, guard):
                return ClassificationRecord(c, PIFORM, j, _verdict(PIFORM, o.level.r), regular)
    return ClassificationRecord(Elem(ring, 0, lp), NOCRIT, None, NOT_TYPE, regular)


# atlas --------------------------------------------------------------------------

ATLAS_COLUMNS = ["ring", "n", "r", "l", "lp", "class_id", "canonical_rep", "charpoly",
                 "label", "j", "twist_c", "verdict", "regular", "class_size"]


def _compact(obj) -> str:
    return json.dumps(obj, separators=(",", ":"))


def _classify_job(args):
    o, guard = args
    return classify(o, guard)


def atlas(ring: RingSpec, n: int, r: int, jobs: int = 1,
          guard: int = DEFAULT_GUARD) -> list[dict]:
    """Every class of M_n(O/p^{lp}) with its classification, in canonical order."""
    level = LevelData(r)
    classes = enumerate_classes(ring, n, level.lp, r, guard)
    work = [(o, guard) for o in classes]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            records = list(ex.map(_classify_job, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        records = [_classify_job(w) for w in work]
    rows = []
    for k, (o, rec) in enumerate(zip(classes, records)):
        rows.append({
            "ring": str(ring.with_precision(level.lp)),
            "n": n, "r": r, "l": level.l, "lp": level.lp,
            "class_id": k,
            "canonical_rep": _compact(o.rep.values()),
            "charpoly": _compact([c.to_json() for c in o.rep.charpoly()]),
            "label": rec.label if rec.j is None else f"{rec.label}({rec.j})",
            "j": "" if rec.j is None else rec.j,
            "twist_c": _compact(rec.twist.to_json()),
            "verdict": rec.verdict,
            "regular": str(rec.regular).lower(),
            "class_size": o.size,
        })
    return rows


def atlas_csv(rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=ATLAS_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def atlas_summary(rows: Iterable[dict]) -> Counter:
    return Counter((row["label"], row["verdict"], row["regular"]) for row in rows)
