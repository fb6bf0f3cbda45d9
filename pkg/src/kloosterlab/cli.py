"""Command line front end.

Subcommands: eval (single sums), count (reciprocal-difference counts),
suite (identity battery), calibrate (fix bound constants), sweep (grid
verification runs), moments (short-average moments), divisor (progression
sums).  All paths are explicit flags; no environment variables are read.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from kloosterlab import divisor as dv
from kloosterlab import expsums, moments
from kloosterlab.counting import CountQuery, j_count_brute, j_count_fast, \
    j_count_restricted
from kloosterlab.harness import calibration as cal
from kloosterlab.harness import identity, sweeps
from kloosterlab.harness.reports import summarize
from kloosterlab.weights import Interval


def _fmt(sv: expsums.SumValue) -> str:
    return f"{sv.value.real:+.12g}{sv.value.imag:+.12g}i  [{sv.method}, {sv.terms} terms]"


def _cmd_eval(args) -> int:
    q = args.q
    paths = []
    if args.both or args.brute or not args.fast:
        paths.append("brute")
    if args.both or args.fast:
        paths.append("fast")
    if args.kind == "kloosterman":
        fns = {"brute": expsums.kloosterman_brute, "fast": expsums.kloosterman_fast}
        for p in paths:
            print(f"{p}: {_fmt(fns[p](args.m, args.n, q))}")
    elif args.kind == "salie":
        print(f"brute: {_fmt(expsums.salie(args.m, args.n, q))}")
    elif args.kind == "gauss":
        print(f"full : {_fmt(expsums.gauss(args.m, args.n, q))}")
        print(f"units: {_fmt(expsums.gauss_star(args.m, args.n, q))}")
    elif args.kind == "ramanujan":
        print(f"c_q(m) = {expsums.ramanujan(args.m, q)}")
    elif args.kind == "t":
        fns = {"brute": expsums.t_transform_brute, "fast": expsums.t_transform_fast}
        for p in paths:
            print(f"{p}: {_fmt(fns[p](args.x, args.y, args.z, q))}")
    return 0


def _cmd_count(args) -> int:
    qr = CountQuery.of(args.q, args.a, args.K, args.r, args.c)
    if args.r is not None:
        print(f"restricted count = {j_count_restricted(qr)}")
    else:
        fast = j_count_fast(qr)
        print(f"count = {fast}")
        if args.check:
            brute = j_count_brute(qr)
            print(f"brute = {brute} ({'match' if brute == fast else 'MISMATCH'})")
    return 0


def _cmd_suite(args) -> int:
    results = identity.run_identity_suite(args.budget, args.scope)
    failed = 0
    for res in results:
        status = "pass" if res.passed else "FAIL"
        print(f"[{status}] {res.scope:9s} {res.name:22s} cases={res.cases:<6d} "
              f"worst={res.worst:.3e}")
        failed += not res.passed
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def _cmd_calibrate(args) -> int:
    store = cal.CalibrationStore(args.file)
    names = None if args.all else [args.target]
    if not args.all and args.target is None:
        print("error: give --target NAME or --all", file=sys.stderr)
        return 2
    entries = cal.calibrate_all(store, args.cap, args.epsilon, args.seed, names)
    for name in sorted(entries):
        e = entries[name]
        print(f"{name:28s} constant={e['constant']:<10g} "
              f"max_ratio={e['max_ratio']:.4f} cap={e['cap']} eps={e['epsilon']}")
    return 0


def _cmd_sweep(args) -> int:
    cfg = sweeps.parse_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.workers is not None:
        cfg.workers = args.workers
    if args.out is not None:
        cfg.out = args.out
    records, summary = sweeps.run_sweep(cfg, name=args.name)
    violated = 0
    for target in sorted(summary):
        s = summary[target]
        print(f"{target:28s} ok={s['ok']:<5d} skipped={s['skipped']:<4d} "
              f"violated={s['violated']:<3d} max_ratio={s['max_ratio']:.4f}")
        violated += s["violated"]
    print(f"{len(records)} records -> {cfg.out}/{args.name}.csv")
    return 1 if violated else 0


def _cmd_moments(args) -> int:
    from kloosterlab.harness.targets import next_prime

    p = next_prime(args.p_min)
    rows = []
    while p <= args.p_max:
        if args.n_rule.startswith("pow:"):
            N = max(1, math.ceil(p ** float(args.n_rule.split(":")[1])))
        elif args.n_rule == "max":
            N = max(1, math.floor(p ** (1 - 1 / args.r)))
        else:
            raise SystemExit(f"unknown N-rule {args.n_rule!r}")
        N = min(N, p - 1)
        prof = moments.short_sum_profile(p, Interval(0, N))
        m = moments.moment(prof, args.alpha)
        rows.append({"p": p, "N": N, "alpha": args.alpha, "moment": m})
        print(f"p={p:<8d} N={N:<7d} moment_{args.alpha:g} = {m:.6e}")
        p = next_prime(2 * p)
    if args.json:
        print(json.dumps(rows, indent=2, sort_keys=True))
    return 0


def _cmd_divisor(args) -> int:
    sieve = dv.DivisorSieve(args.X)
    if args.a is not None:
        s = dv.divisor_sum_ap(sieve, args.a, args.q)
        m = dv.main_term(args.X, args.q)
        print(f"S = {s}")
        print(f"main term = {m:.6f}")
        print(f"error = {s - m:+.6f}")
    elif args.A is not None:
        err = dv.family_error(sieve, Interval(args.offset, args.A), args.q)
        print(f"family error over {args.A} classes = {err:+.6f}")
    else:
        print("error: give --a (pointwise) or --A (family length)", file=sys.stderr)
        return 2
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kloosterlab",
                                 description="exponential-sum evaluation and "
                                             "bound verification toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate one exponential sum")
    pe.add_argument("kind", choices=["kloosterman", "salie", "gauss",
                                     "ramanujan", "t"])
    pe.add_argument("-m", type=int, default=0)
    pe.add_argument("-n", type=int, default=0)
    pe.add_argument("-x", type=int, default=0)
    pe.add_argument("-y", type=int, default=0)
    pe.add_argument("-z", type=int, default=0)
    pe.add_argument("-q", type=int, required=True)
    pe.add_argument("--brute", action="store_true")
    pe.add_argument("--fast", action="store_true")
    pe.add_argument("--both", action="store_true")
    pe.set_defaults(fn=_cmd_eval)

    pc = sub.add_parser("count", help="reciprocal-difference counts")
    pc.add_argument("which", choices=["j"])
    pc.add_argument("-q", type=int, required=True)
    pc.add_argument("-a", type=int, required=True)
    pc.add_argument("-K", type=int, required=True)
    pc.add_argument("-r", type=int, default=None)
    pc.add_argument("-c", type=int, default=None)
    pc.add_argument("--check", action="store_true",
                    help="also run the pair-loop oracle")
    pc.set_defaults(fn=_cmd_count)

    ps = sub.add_parser("suite", help="run the identity suite")
    ps.add_argument("--budget", type=int, default=500,
                    help="maximum modulus exercised")
    ps.add_argument("--scope", default=None,
                    choices=["expsums", "counting", "bilinear", "moments",
                             "divisor"])
    ps.set_defaults(fn=_cmd_suite)

    pk = sub.add_parser("calibrate", help="fix bound constants on a small grid")
    pk.add_argument("--target", default=None)
    pk.add_argument("--all", action="store_true")
    pk.add_argument("--cap", type=int, default=500)
    pk.add_argument("--epsilon", type=float, default=0.05)
    pk.add_argument("--seed", type=int, default=1)
    pk.add_argument("--file", default="calibration.json")
    pk.set_defaults(fn=_cmd_calibrate)

    pw = sub.add_parser("sweep", help="run a configured verification sweep")
    pw.add_argument("--config", required=True)
    pw.add_argument("--seed", type=int, default=None)
    pw.add_argument("--workers", type=int, default=None)
    pw.add_argument("--out", default=None)
    pw.add_argument("--name", default="sweep")
    pw.set_defaults(fn=_cmd_sweep)

    pm = sub.add_parser("moments", help="moments of short Kloosterman averages")
    pm.add_argument("--p-min", type=int, required=True)
    pm.add_argument("--p-max", type=int, required=True)
    pm.add_argument("--n-rule", default="pow:0.5",
                    help='"pow:E" for N = ceil(p^E), or "max" for p^(1-1/r)')
    pm.add_argument("--r", type=int, default=2)
    pm.add_argument("--alpha", type=float, default=1.0)
    pm.add_argument("--json", action="store_true")
    pm.set_defaults(fn=_cmd_moments)

    pd = sub.add_parser("divisor", help="divisor sums in progressions")
    pd.add_argument("--X", type=int, required=True)
    pd.add_argument("--q", type=int, required=True)
    pd.add_argument("--a", type=int, default=None)
    pd.add_argument("--A", type=int, default=None)
    pd.add_argument("--offset", type=int, default=0)
    pd.set_defaults(fn=_cmd_divisor)
    return ap


def main(argv: "list[str] | None" = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
