"""Command line entry point: list, run, report, verify-all."""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import experiments  # noqa: F401  (registers the experiments)
from .core import REGISTRY, ConfigError, load_config, run_experiment
from .report import ReportError, report

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _seed(text: str) -> int:
    v = int(text, 0)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="hamlab", description="Hamming cube numerical verification experiments")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="show the experiment registry with defaults")

    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("id")
    run.add_argument("--config", help="flat TOML file of parameter overrides")
    run.add_argument("--seed", type=_seed)
    run.add_argument("--out", default="results")

    rep = sub.add_parser("report", help="summarize result CSV files per claim")
    rep.add_argument("files", nargs="*")
    rep.add_argument("--all", action="store_true", help="require every registered claim")
    rep.add_argument("--out", help="also write the table to this file")

    va = sub.add_parser("verify-all", help="run every experiment with defaults and report")
    va.add_argument("--out", default="results")
    va.add_argument("--seed", type=_seed)
    va.add_argument("--jobs", type=int, default=1)
    va.add_argument("--only", nargs="*", help="restrict to these ids")
    return ap


def cmd_list() -> int:
    for exp in REGISTRY.values():
        print(f"{exp.id}  [{exp.module}]")
        print(f"    {exp.description}")
        print(f"    anchor: {exp.anchor}")
        print(f"    claims: {'; '.join(exp.claims)}")
        for k, v in exp.defaults.items():
            print(f"    {k} = {json.dumps(v)}")
    print(f"{len(REGISTRY)} experiments")
    return EXIT_OK


def _run_one(exp_id, overrides, seed, out):
    res = run_experiment(exp_id, overrides, seed)
    csv_path, _ = res.write(out)
    return exp_id, res.passed, res.runtime, csv_path


def cmd_run(args) -> int:
    overrides = load_config(args.config) if args.config else None
    exp_id, passed, runtime, path = _run_one(args.id, overrides, args.seed, args.out)
    print(f"{exp_id}: {'pass' if passed else 'FAIL'} ({runtime:.1f} s) -> {path}")
    return EXIT_OK if passed else EXIT_FAIL


def cmd_report(args) -> int:
    text, ok = report(args.files, require_all=args.all)
    sys.stdout.write(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify_all(args) -> int:
    ids = args.only or list(REGISTRY)
    for i in ids:
        if i not in REGISTRY:
            raise ConfigError(f"unknown experiment {i!r}")
    t0 = time.perf_counter()
    paths, all_passed = [], True

    def done(exp_id, passed, runtime, path):
        nonlocal all_passed
        all_passed &= passed
        paths.append(path)
        print(f"{exp_id:28s} {'pass' if passed else 'FAIL'}  {runtime:7.1f} s", flush=True)

    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            futs = [pool.submit(_run_one, i, None, args.seed, args.out) for i in ids]
            for f in futs:
                done(*f.result())
    else:
        for i in ids:
            done(*_run_one(i, None, args.seed, args.out))
    text, ok = report(sorted(paths), require_all=not args.only)
    with open(os.path.join(args.out, "report.md"), "w") as fh:
        fh.write(text)
    print(f"total {time.perf_counter() - t0:.1f} s; report at {os.path.join(args.out, 'report.md')}")
    return EXIT_OK if all_passed and ok else EXIT_FAIL


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "list":
            return cmd_list()
        if args.command == "run":
            return cmd_run(args)
        if args.command == "report":
            return cmd_report(args)
        return cmd_verify_all(args)
    except (ConfigError, ReportError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
