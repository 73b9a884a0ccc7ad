"""Command-line entry point.

Exit codes: 0 on success (IsType or NotType for ``classify``), 2 when the
answer is an indeterminate small-conductor case, 1 on any error or failed
check.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import acceptance, grpfin, orbits
from .errors import Error
from .matlin import Mat, reduce_to_companion
from .ring import make_ring, ring_for_q

EXIT_OK, EXIT_ERROR, EXIT_INDETERMINATE = 0, 1, 2


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", choices=["equal", "mixed"], default="equal")
    common.add_argument("--p", type=_positive, default=2)
    common.add_argument("--f", type=_positive, default=1)
    common.add_argument("--r-working", type=_positive, default=None,
                        help="working precision (defaults to what the command needs)")
    common.add_argument("--guard", type=_positive, default=orbits.DEFAULT_GUARD)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("--file", help="JSON matrix file (default: stdin)")

    ap = argparse.ArgumentParser(prog="cuspidal-orbits", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common, matrix], help="classify the orbit of a matrix")
    p.add_argument("--r", type=int, required=True, help="conductor r >= 2")

    p = sub.add_parser("atlas", parents=[common], help="classify every orbit for (q, n, r)")
    p.add_argument("q", type=_positive)
    p.add_argument("n", type=_positive)
    p.add_argument("r", type=int)
    p.add_argument("--jobs", type=_positive, default=1)
    p.add_argument("--out", help="write here instead of stdout")

    p = sub.add_parser("stabilizer", parents=[common, matrix],
                       help="stabilizer of the character attached to a matrix mod p^lp")
    p.add_argument("--r", type=int, required=True)

    sub.add_parser("companion", parents=[common, matrix], help="conjugate a matrix to companion form")

    p = sub.add_parser("example4", parents=[common], help="check the worked GL_2 example")
    p.add_argument("--q", type=_positive, default=2)

    p = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    p.add_argument("level", nargs="?", choices=["quick", "full"], default="full")
    return ap


def _ring(args, need: int):
    r_w = max(need, args.r_working or 0)
    return make_ring(args.ring, args.p, args.f, r_w)


def _read_matrix(args) -> list:
    text = open(args.file).read() if args.file else sys.stdin.read()
    data = json.loads(text)
    rows = data["rows"] if isinstance(data, dict) else data
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ValueError("matrix JSON must be a list of rows or {\"rows\": [...]}")
    return rows


def _emit(args, obj) -> None:
    if args.format == "text" and isinstance(obj, dict):
        for k, v in obj.items():
            print(f"{k}: {v}")
    else:
        print(json.dumps(obj, sort_keys=True))


def cmd_classify(args) -> int:
    level = orbits.LevelData(args.r)
    R = _ring(args, level.lp)
    x = Mat.of(R, _read_matrix(args), level.lp)
    o = orbits.orbit_of(x, args.r, args.guard)
    rec = orbits.classify(o, args.guard)
    out = rec.to_json()
    out["canonical_rep"] = o.rep.values()
    _emit(args, out)
    return EXIT_INDETERMINATE if rec.verdict == orbits.INDETERMINATE else EXIT_OK


def cmd_atlas(args) -> int:
    level = orbits.LevelData(args.r)
    ring = ring_for_q(args.q, max(level.lp, args.r_working or 0), args.ring)
    rows = orbits.atlas(ring, args.n, args.r, args.jobs, args.guard)
    if args.format == "csv":
        text = orbits.atlas_csv(rows)
    elif args.format == "json":
        text = json.dumps(rows, sort_keys=True) + "\n"
    else:
        text = "".join(f"{label} {verdict} regular={reg}: {count}\n"
                       for (label, verdict, reg), count in sorted(orbits.atlas_summary(rows).items()))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_stabilizer(args) -> int:
    level = orbits.LevelData(args.r)
    R = _ring(args, args.r)
    beta = Mat.of(R, _read_matrix(args), level.lp)
    brute = grpfin.stabilizer_bruteforce(beta, args.r, args.guard)
    out = {"r": args.r, "lp": level.lp, "size": len(brute)}
    try:
        formula = grpfin.stabilizer_formula(beta, args.r, args.guard)
        out["formula_size"] = len(formula)
        out["formula_agrees"] = set(formula) == set(brute)
    except ValueError as e:
        out["formula"] = str(e)
    _emit(args, out)
    return EXIT_OK if out.get("formula_agrees", True) else EXIT_ERROR


def cmd_companion(args) -> int:
    R = _ring(args, 1)
    x = Mat.of(R, _read_matrix(args))
    g = reduce_to_companion(x)
    _emit(args, {"g": g.values(), "companion": (g.inverse() @ x @ g).values()})
    return EXIT_OK


def cmd_example4(args) -> int:
    R = ring_for_q(args.q, max(4, args.r_working or 0), args.ring)
    reports = grpfin.example4(R)
    if args.format == "json":
        print(json.dumps([r.to_json() for r in reports], sort_keys=True))
    else:
        for r in reports:
            print(r.line())
    return EXIT_OK if all(r.passed for r in reports) else EXIT_ERROR


def cmd_selftest(args) -> int:
    which = None if args.level == "full" else {1, 3, 4, 5, 6, 8, 9, 10, 11}
    ok = True
    for line in acceptance.run(which):
        print(acceptance.format_line(*line), flush=True)
        ok &= line[2]
    return EXIT_OK if ok else EXIT_ERROR


COMMANDS = {
    "classify": cmd_classify, "atlas": cmd_atlas, "stabilizer": cmd_stabilizer,
    "companion": cmd_companion, "example4": cmd_example4, "selftest": cmd_selftest,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (Error, ValueError, ArithmeticError, LookupError, OSError, KeyError, TypeError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
