"""Command-line entry point: ``contactred verify|reduce|orbit|corpus``."""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import orbit_arith as orb
from .corpus import build_manifest, corpus_list, corpus_manifest, load_manifest, run
from .corpus.runner import EXIT_FALSIFIED, EXIT_INCONCLUSIVE, EXIT_INPUT, EXIT_OK
from .errors import ContactRedError

SEED_ENV = "CONTACTRED_SEED"


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"contactred: {SEED_ENV} must be an integer, got {raw!r}")


def _run_opts(p):
    p.add_argument("--seed", type=int, default=None, help=f"sampler seed (default ${SEED_ENV} or 0)")
    p.add_argument("--samples", type=int, default=None, help="random points per sampled check")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--parallel", type=int, default=1, metavar="N")
    p.add_argument("--timings", action="store_true", help="include wall time per task (breaks byte-identity)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="contactred", description="Symbolic checks for contact groupoid reduction.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run every task of a manifest")
    p.add_argument("manifest")
    _run_opts(p)

    p = sub.add_parser("reduce", help="run a single task of a manifest")
    p.add_argument("manifest")
    p.add_argument("--task", required=True)
    _run_opts(p)

    p = sub.add_parser("orbit", help="torus arithmetic for coadjoint orbits")
    osub = p.add_subparsers(dest="orbit_command", required=True)
    q = osub.add_parser("t0", help="period data of a torus point, e.g. '(2,1)/sqrt(5)'")
    q.add_argument("xi")
    q = osub.add_parser("prequant", help="prequantization report for an integer vector")
    q.add_argument("d", type=int, nargs="+")
    q = osub.add_parser("u2lens", help="lens parameter of the U(2) reduced space at diag(m, n)")
    q.add_argument("m", type=int)
    q.add_argument("n", type=int)
    for q in osub.choices.values():
        q.add_argument("--format", choices=("json", "text"), default="json")

    p = sub.add_parser("corpus", help="built-in examples")
    csub = p.add_subparsers(dest="corpus_command", required=True)
    q = csub.add_parser("list")
    q.add_argument("--format", choices=("json", "text"), default="text")
    q = csub.add_parser("run")
    q.add_argument("entry", nargs="?")
    _run_opts(q)
    q = csub.add_parser("export", help="print an entry as a manifest file")
    q.add_argument("entry")
    return ap


def _emit(report, fmt):
    sys.stdout.write(report.dumps() if fmt == "json" else report.to_text())


def _run_manifest(m, args, only=None):
    seed = args.seed if args.seed is not None else _default_seed()
    return run(m, seed=seed, parallelism=args.parallel, samples=args.samples, only=only,
               fmt=args.format, timings=args.timings)


def combined_exit(codes) -> int:
    codes = set(codes)
    for c in (EXIT_INPUT, EXIT_FALSIFIED, EXIT_INCONCLUSIVE):
        if c in codes:
            return c
    return EXIT_OK


def _orbit(args) -> int:
    if args.orbit_command == "t0":
        spec = orb.OrbitSpec.parse(args.xi)
        t0, T, count = orb.compute_t0(spec)
        out = {"xi": str(spec), "norm": str(spec.norm), "t0": str(t0), "T": str(T), "count": count}
    elif args.orbit_command == "prequant":
        out = orb.prequant_report(args.d).to_json()
    else:
        out = {"m": args.m, "n": args.n, "lens": orb.u2_lens(args.m, args.n)}
    if args.format == "json":
        print(json.dumps(out, ensure_ascii=False))
    else:
        for k, v in out.items():
            print(f"{k}: {v}")
    return EXIT_OK


def _corpus(args) -> int:
    if args.corpus_command == "list":
        items = corpus_list()
        if args.format == "json":
            print(json.dumps(items, indent=2, ensure_ascii=False))
        else:
            width = max(len(i["name"]) for i in items)
            for i in items:
                print(f"{i['name']:<{width}}  {i['anchor']}")
        return EXIT_OK
    if args.corpus_command == "export":
        print(json.dumps(corpus_manifest(args.entry), indent=2, ensure_ascii=False))
        return EXIT_OK
    names = [args.entry] if args.entry else [i["name"] for i in corpus_list()]
    reports = [_run_manifest(build_manifest(corpus_manifest(n), n), args) for n in names]
    if len(reports) == 1:
        _emit(reports[0], args.format)
        return reports[0].exit_code
    code = combined_exit(r.exit_code for r in reports)
    if args.format == "json":
        doc = {"corpus": [r.to_json() for r in reports], "exit_code": code}
        sys.stdout.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        for r in reports:
            sys.stdout.write(r.to_text())
        print(f"corpus exit {code}")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "orbit":
            return _orbit(args)
        if args.command == "corpus":
            return _corpus(args)
        m = load_manifest(args.manifest)
        report = _run_manifest(m, args, only=args.task if args.command == "reduce" else None)
        _emit(report, args.format)
        return report.exit_code
    except ContactRedError as exc:
        print(f"contactred: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
