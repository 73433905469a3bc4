"""Command-line entry point: ``ostcert <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from ostcert import __version__
from ostcert._seeding import derive_seed
from ostcert.coherence import check_coherence_property
from ostcert.design import (
    gen_gaussian,
    gen_rademacher,
    matrix_to_text,
    parse_complex,
    read_matrix_file,
    write_matrix_file,
)
from ostcert.errors import OSTError, ValidationError
from ostcert.experiment import (
    cells_to_csv,
    oracle_exhaustive,
    parse_config,
    parse_lambda_rule,
    run_sweep,
    trials_to_csv,
)
from ostcert.ost import measure, ost, threshold_lemma, threshold_theorem
from ostcert.signal import SparseSignal, alpha_min, gen_signal
from ostcert.stoc import lemma2_bound, lemma3_bound, lemma_hypothesis, stoc_delta_estimate


def _emit(obj):
    print(json.dumps(obj))


def _csv_ints(s):
    return [int(t) for t in s.split(",") if t.strip()]


def _csv_complex(s):
    return [parse_complex(t) for t in s.split(",") if t.strip()]


def _add_signal_args(p):
    p.add_argument("--k", type=int, help="sparsity for a randomly drawn signal")
    p.add_argument("--value-model", default="equal", choices=["equal", "equal-random-sign"])
    p.add_argument("--values", help="comma-separated nonzero values (a, a+bi); renormalized")
    p.add_argument("--support", help="comma-separated 0-based indices matching --values")


def _signal_from_args(args, C):
    if args.values is not None or args.support is not None:
        if args.values is None or args.support is None:
            raise ValidationError("--values and --support must be given together")
        return SparseSignal.from_values(C, _csv_ints(args.support), _csv_complex(args.values))
    if args.k is None:
        raise ValidationError("give either --k or --values/--support")
    return gen_signal(C, args.k, args.value_model, derive_seed(args.seed, 0))


def cmd_gen_matrix(args):
    gen = gen_gaussian if args.family == "gaussian" else gen_rademacher
    phi = gen(args.N, args.C, args.seed)
    if args.out:
        write_matrix_file(phi, args.out)
    else:
        sys.stdout.write(matrix_to_text(phi))


def cmd_check_coherence(args):
    phi = read_matrix_file(args.matrix_file, normalize=args.normalize)
    _emit(check_coherence_property(phi).to_dict())


def _lambda_from_args(args, phi):
    if args.lam is not None:
        return args.lam
    kind, val = parse_lambda_rule(args.lambda_rule)
    if kind == "theorem":
        return threshold_theorem(check_coherence_property(phi).mu, args.sigma2, phi.cols)
    if kind == "lemma":
        return threshold_lemma(val, args.sigma2, phi.cols)
    return val


def cmd_run_ost(args):
    phi = read_matrix_file(args.matrix_file, normalize=args.normalize)
    s = _signal_from_args(args, phi.cols)
    lam = _lambda_from_args(args, phi)
    meas = measure(phi, s, args.sigma2, derive_seed(args.seed, 1))
    est = ost(phi, meas, lam)
    _emit({
        "selected": list(est.selected),
        "support": sorted(s.support),
        "lambda": lam,
        "alpha_min": alpha_min(s),
        "exact_recovery": est.matches(s.support),
    })


def cmd_oracle(args):
    phi = read_matrix_file(args.matrix_file, normalize=args.normalize)
    s = _signal_from_args(args, phi.cols)
    meas = measure(phi, s, args.sigma2, derive_seed(args.seed, 1))
    found = oracle_exhaustive(phi, meas, s.k)
    _emit({
        "oracle_support": list(found),
        "support": sorted(s.support),
        "exact_recovery": set(found) == set(s.support),
    })


def cmd_stoc_estimate(args):
    phi = read_matrix_file(args.matrix_file, normalize=args.normalize)
    z = _csv_complex(args.z) if args.z else [1.0 / math.sqrt(args.k)] * args.k
    rep = check_coherence_property(phi)
    est = stoc_delta_estimate(phi, args.k, z, args.epsilon, args.trials, args.seed,
                              allow_large_epsilon=args.allow_large_epsilon)
    out = est.to_dict()
    out.update({
        "k": args.k,
        "epsilon": args.epsilon,
        "mu": rep.mu,
        "nu": rep.nu,
        # both bounds need mu > 0; null for an orthonormal design
        "lemma2_bound": lemma2_bound(args.k, args.epsilon, rep.mu) if rep.mu > 0 else None,
        "lemma3_bound": lemma3_bound(phi.cols, args.epsilon, rep.mu) if rep.mu > 0 else None,
        "lemma_hypothesis": lemma_hypothesis(args.k, args.epsilon, rep.nu, phi.cols),
    })
    _emit(out)


def cmd_sweep(args):
    text = Path(args.config).read_text() if args.config else ""
    overrides = {
        "family": args.family, "N": args.N, "C": args.C, "k": args.k, "sigma2": args.sigma2,
        "trials": args.trials, "seed": args.seed, "lambda_rule": args.lambda_rule,
        "value_model": args.value_model, "matrix_file": args.matrix_file,
        "epsilon": args.epsilon, "record_stoc": args.record_stoc,
    }
    cfg = parse_config(text, overrides)
    result = run_sweep(cfg, threads=args.threads)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    agg = out / "aggregate.csv"
    agg.write_text(cells_to_csv(result.cells), encoding="utf-8")
    summary = {"aggregate": str(agg), "cells": len(result.cells)}
    if args.per_trial:
        per = out / "trials.csv"
        per.write_text(trials_to_csv(result.trials), encoding="utf-8")
        summary["per_trial"] = str(per)
    _emit(summary)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ostcert", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ostcert {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-matrix", help="write a random design matrix file")
    p.add_argument("--family", choices=["gaussian", "rademacher"], default="gaussian")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--C", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=cmd_gen_matrix)

    def matrix_arg(p):
        p.add_argument("--matrix-file", required=True)
        p.add_argument("--normalize", action="store_true", help="rescale columns to unit norm")

    p = sub.add_parser("check-coherence", help="coherence measures and certificate as JSON")
    matrix_arg(p)
    p.set_defaults(func=cmd_check_coherence)

    p = sub.add_parser("run-ost", help="one measurement + one-step thresholding")
    matrix_arg(p)
    _add_signal_args(p)
    p.add_argument("--sigma2", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="lam", type=float)
    g.add_argument("--lambda-rule", default="theorem", help="theorem | lemma:EPS | fixed:LAMBDA")
    p.set_defaults(func=cmd_run_ost)

    p = sub.add_parser("oracle", help="exhaustive least-squares support search (small C)")
    matrix_arg(p)
    _add_signal_args(p)
    p.add_argument("--sigma2", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("stoc-estimate", help="Monte Carlo StOC failure rates and bounds")
    matrix_arg(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--z", help="fixed comma-separated z values (default: equal 1/sqrt(k))")
    p.add_argument("--allow-large-epsilon", action="store_true", help="accept epsilon >= 1")
    p.set_defaults(func=cmd_stoc_estimate)

    p = sub.add_parser("sweep", help="Monte Carlo grid sweep written as CSV")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--per-trial", action="store_true", help="also write trials.csv")
    p.add_argument("--family")
    p.add_argument("--N")
    p.add_argument("--C")
    p.add_argument("--k")
    p.add_argument("--sigma2")
    p.add_argument("--trials")
    p.add_argument("--seed")
    p.add_argument("--lambda-rule")
    p.add_argument("--value-model")
    p.add_argument("--matrix-file")
    p.add_argument("--epsilon")
    p.add_argument("--record-stoc", choices=["true", "false"])
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (OSTError, OSError) as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"ostcert: error: {msg}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
