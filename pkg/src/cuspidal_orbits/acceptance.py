"""The acceptance suite: eleven exact checks, each returning (name, passed, detail)."""

from __future__ import annotations

import random
from itertools import product

from . import grpfin, oracle, orbits
from .errors import Error
from .matlin import (
    FracMat, Mat, MatSpace, commutant_dim, companion, eisenstein, is_regular_by_cyclic_vector,
    is_regular_modp, poly_from_values, reduce_to_companion,
)
from .orders import I, M, OrderKind, pattern, pi_element
from .ring import AdditiveValue, Elem, FracElem, RingSpec, make_ring, psi, ring_for_q
from .strata import Stratum, is_simple, is_simple_via_criterion, type_conductor

FAMILY_CAP = 1000
SEED = 20240601


def _ring(q: int, r_w: int) -> RingSpec:
    return ring_for_q(q, r_w)


# 1 -------------------------------------------------------------------------------


def atlas_correctness():
    R = _ring(2, 1)
    classes = orbits.enumerate_classes(R, 2, 1)
    ours = {frozenset(orbits.members_of(o)) for o in classes}
    brute = set(oracle.brute_conjugacy_partition(2, 2, 1))
    irred = sum(orbits.classify(o).label == orbits.IRRED for o in classes)
    pif = [orbits.detect_piform(o, 1) for o in classes]
    brute_pif = [oracle.brute_coset_intersect(orbits.members_of(o), 1, 1, R, 2) for o in classes]
    ok = len(classes) == 6 and ours == brute and irred == 1 and sum(pif) == 1 and pif == brute_pif
    return ok, f"classes={len(classes)} partition_match={ours == brute} irred={irred} piform={sum(pif)}"


# 2 -------------------------------------------------------------------------------


def stratum_family(tag: str, N: int, q: int, n: int, cap: int = FAMILY_CAP):
    """Strata Pi^{-n} X with X running over the order mod p^2 (sampled past the cap)."""
    kind = OrderKind(tag, N)
    r_w = n + 3
    R = _ring(q, r_w)
    pat = pattern(kind, 0)
    choices = [range(0, q ** 2, q ** min(pat[i][j], 2)) for i in range(N) for j in range(N)]
    total = 1
    for c in choices:
        total *= len(c)
    if total <= cap:
        xs = product(*choices)
    else:
        rng = random.Random(f"{SEED}-{tag}{N}{q}{n}")
        xs = (tuple(rng.choice(c) for c in choices) for _ in range(cap))
    if tag == M:
        pi_inv = FracMat(1, Mat.identity(R, N))
    else:
        pi_inv = FracMat(1, pi_element(kind, R) ** (N - 1))
    pre = pi_inv ** n
    for x in xs:
        yield Stratum(kind, n, pre @ Mat(R, N, tuple(x), 2).lift(r_w))


def _outcome(s: Stratum, method: str):
    try:
        return is_simple(s, method)
    except Error as e:
        return type(e).__name__


def simple_stratum_equivalence():
    seen, bad = 0, []
    for tag, N, q, n in product((M, I), (2, 3), (2, 3), (1, 2, 3)):
        for s in stratum_family(tag, N, q, n):
            seen += 1
            a, b = _outcome(s, "criterion"), _outcome(s, "definition")
            if a != b:
                bad.append((tag, N, q, n, a, b))
    return not bad, f"strata={seen} disagreements={len(bad)}"


# 3 -------------------------------------------------------------------------------


def eisenstein_polys(R: RingSpec):
    T = R.at(R.r_w)
    for a in range(0, T.size, R.q):
        for b in range(0, T.size, R.q):
            f = (Elem(R, b, R.r_w), Elem(R, a, R.r_w), Elem.of(R, 1))
            if eisenstein(f):
                yield f


def companion_reduction():
    R = make_ring("equal", 2, 1, r_w=3)
    S = MatSpace(R, 2, 3)
    rng = random.Random(SEED)
    gl = S.gl_elements()
    polys, bad = 0, 0
    for f in eisenstein_polys(R):
        polys += 1
        C = companion(f)
        for _ in range(50):
            g = rng.choice(gl)
            Mx = S.to_mat(S.conj(g, S.inv(g), C.codes))
            h = reduce_to_companion(Mx)
            if (h.inverse() @ Mx @ h).codes != C.codes:
                bad += 1
    return polys > 0 and bad == 0, f"polys={polys} conjugates={50 * polys} failures={bad}"


# 4 -------------------------------------------------------------------------------


def _iwahori_units_mod_p(R: RingSpec, N: int):
    S = MatSpace(R, N, 1)
    upper = [(i, j) for i in range(N) for j in range(N) if j >= i]
    for vals in product(range(R.q), repeat=len(upper)):
        x = [0] * (N * N)
        for (i, j), v in zip(upper, vals):
            x[i * N + j] = v
        if S.is_invertible(tuple(x)):
            yield tuple(x)


def _sample_iwahori_units_mod_p(R: RingSpec, N: int, count: int, rng: random.Random):
    S = MatSpace(R, N, 1)
    out = []
    while len(out) < count:
        x = tuple(rng.randrange(R.q) if j >= i else 0 for i in range(N) for j in range(N))
        if S.is_invertible(x):
            out.append(x)
    return out


def regularity_split():
    notes = []
    ok = True
    R = make_ring("equal", 2, 1, r_w=2)
    for N, exhaustive in ((3, True), (5, False)):
        S = MatSpace(R, N, 1)
        Pi = pi_element(OrderKind(I, N), R, 1).codes
        Bs = (list(_iwahori_units_mod_p(R, N)) if exhaustive
              else _sample_iwahori_units_mod_p(R, N, 100, random.Random(SEED)))
        for j in range(1, N):
            P = S.one
            for _ in range(j):
                P = S.mul(P, Pi)
            want = j == 1
            for B in Bs:
                x = S.to_mat(S.mul(P, B))
                got = (orbits.is_regular_orbit(orbits.orbit_of(x, 2)) if exhaustive
                       else is_regular_modp(x))
                if got != want:
                    ok = False
                    notes.append(f"N={N} j={j} B={B}")
    agree = 0
    for q, N in ((2, 2), (3, 2), (2, 3)):
        Rq = _ring(q, 1)
        S = MatSpace(Rq, N, 1)
        for x in S.all_matrices():
            A = S.to_mat(x)
            by_comm = commutant_dim(A) == N
            if by_comm != is_regular_by_cyclic_vector(A):
                ok = False
                notes.append(f"method mismatch q={q} N={N} {x}")
            agree += 1
    return ok, f"matrices_compared={agree} " + ("; ".join(notes[:3]) or "no failures")


# 5 -------------------------------------------------------------------------------


def stabilizer_formula_check():
    details, ok = [], True
    for q in (2, 3):
        R = _ring(q, 2)
        cases = {"nilpotent": Mat.of(R, [[0, 1], [0, 0]], 2),
                 "companion": companion(poly_from_values(R, [1, 1, 1], 2))}
        for name, beta_hat in cases.items():
            brute = set(grpfin.stabilizer_bruteforce(beta_hat.truncate(1), 2))
            formula = set(grpfin.stabilizer_formula(beta_hat, 2))
            ok &= brute == formula
            details.append(f"q={q} {name}: {len(brute)}")
            if q == 2:
                ok &= len(brute) == {"nilpotent": 32, "companion": 48}[name]
    return ok, ", ".join(details)


# 6 -------------------------------------------------------------------------------


def worked_example():
    failures = []
    for q in (2, 3):
        R = _ring(q, 2)
        reports = grpfin.example4(R)
        for which in (1, 2):
            w = grpfin.multiplicativity_witness(grpfin.theta_build(which, R), exhaustive=True)
            reports.append(grpfin.Report(f"theta{which}_multiplicative_all_pairs", {"q": q}, w is None, w))
        failures += [f"q={q}:{r.check}" for r in reports if not r.passed]
    return not failures, "; ".join(failures) or "all claims hold at q=2,3"


# 7 -------------------------------------------------------------------------------


def _psi_tr(beta: FracMat, y: tuple[int, ...], prec: int) -> AdditiveValue:
    """psi(tr(beta y)) for y given by codes mod p^prec."""
    R = beta.m.ring.at(prec)
    n = beta.n
    m = beta.m.lift(prec).truncate(prec).codes
    t = 0
    for i in range(n):
        for j in range(n):
            t = R.add(t, R.mul(m[j * n + i], y[i * n + j]))
    return psi(FracElem(beta.s, Elem(beta.ring, t, prec)))


def simple_examples(tag: str, N: int, q: int, n: int, count: int = 3):
    out = []
    for s in stratum_family(tag, N, q, n, cap=200):
        try:
            if is_simple_via_criterion(s):
                out.append(s)
        except Error:
            continue
        if len(out) == count:
            break
    return out


def _layer(N: int, reqs, prec: int, q: int):
    """All y mod p^prec with val(y_ij) >= reqs[i][j]."""
    choices = [range(0, q ** prec, q ** min(reqs[i][j], prec)) for i in range(N) for j in range(N)]
    return product(*choices)


def containment_and_conductor():
    ok, notes = True, []
    for N, m, q in product((2, 3), (0, 1), (2, 3)):
        rep = grpfin.verify_containment(N, m, make_ring("equal", q, 1, r_w=3 + m))
        ok &= rep.passed
    checked = 0
    for tag, N, q, n in product((M, I), (2, 3), (2, 3), (1, 2, 3, 4)):
        for s in simple_examples(tag, N, q, n):
            r = type_conductor(s)
            beta = s.beta
            top = pattern(OrderKind(M, N), r)
            trivial = all(_psi_tr(beta, y, r + 1).is_zero() for y in _layer(N, top, r + 1, q))
            below = pattern(s.order, n // 2 + 1)
            reqs = tuple(tuple(max(r - 1, below[i][j]) for j in range(N)) for i in range(N))
            nontrivial = any(not _psi_tr(beta, y, r).is_zero() for y in _layer(N, reqs, r, q))
            checked += 1
            if not (trivial and nontrivial):
                ok = False
                notes.append(f"{tag} N={N} q={q} n={n} r={r}")
    return ok, f"simple strata checked={checked} " + ("; ".join(notes[:3]) or "conductors as predicted")


# 8 -------------------------------------------------------------------------------


def proof_displays():
    R = make_ring("equal", 2, 1, r_w=6)
    r, ok, sizes = 3, True, []
    stab = grpfin.scalar_mod_p_subgroup()
    for n in (0, 1):
        for which, g in ((1, grpfin.g_one(R, n)), (2, grpfin.g_two(R, n))):
            lhs = set(grpfin.conj_intersect(grpfin.congruence_subgroup(2, r - 1), g, stab, R, r))
            rhs = set(grpfin.subgroup_elements(grpfin.displayed_pattern(which, n, r), R, r))
            ok &= lhs == rhs
            sizes.append(f"n={n} g{which}: {len(lhs)}")
    return ok, ", ".join(sizes)


# 9 -------------------------------------------------------------------------------


def det_character_scalars():
    ok, notes = True, []
    for tag, q in product((M, I), (2, 3)):
        rep = grpfin.det_character_scalar_check(tag, 1, 2, _ring(q, 2))
        ok &= rep.passed
        notes.append(f"{tag} q={q}: {rep.params['det_factoring']}")
    return ok, ", ".join(notes)


# 10 ------------------------------------------------------------------------------


def twist_conductor():
    R = _ring(2, 2)
    S = orbits.space(R, 2, 2)
    count, bad = 0, 0
    for o in orbits.enumerate_classes(R, 2, 2):
        if not eisenstein(o.rep.charpoly()):
            continue
        count += 1
        for c in range(S.R.size):
            x = S.add(o.rep.codes, S.scalar(c))
            if all(v % R.q == 0 for v in x):
                bad += 1
    return count > 0 and bad == 0, f"eisenstein classes={count} scalar hits={bad}"


# 11 ------------------------------------------------------------------------------


def determinism():
    R = _ring(2, 2)
    one = orbits.atlas_csv(orbits.atlas(R, 2, 4, jobs=1))
    four = orbits.atlas_csv(orbits.atlas(R, 2, 4, jobs=4))
    return one == four, f"bytes={len(one.encode())}"


CRITERIA = [
    ("atlas correctness", atlas_correctness),
    ("simple-stratum equivalence", simple_stratum_equivalence),
    ("companion reduction", companion_reduction),
    ("regularity split", regularity_split),
    ("stabilizer formula", stabilizer_formula_check),
    ("worked GL2 example", worked_example),
    ("containment and conductor", containment_and_conductor),
    ("conjugate intersections", proof_displays),
    ("determinant characters", det_character_scalars),
    ("twist conductor", twist_conductor),
    ("determinism", determinism),
]


def run(which=None):
    """Yield (index, name, passed, detail) for the selected criteria."""
    for k, (name, fn) in enumerate(CRITERIA, 1):
        if which and k not in which:
            continue
        try:
            passed, detail = fn()
        except Exception as e:  # a crash is a failure, reported with its message
            passed, detail = False, f"{type(e).__name__}: {e}"
        yield k, name, bool(passed), detail


def format_line(k: int, name: str, passed: bool, detail: str) -> str:
    return f"criterion {k:2d} {'PASS' if passed else 'FAIL'}  {name}: {detail}"
