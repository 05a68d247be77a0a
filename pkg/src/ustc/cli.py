"""Command-line interface: ``ustc {inject,select,run,bench,report,synth}``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections import defaultdict

import numpy as np

from . import plotting
from .data import (
    DataFormatError,
    inject_uncertainty,
    load_ucr_tsv,
    planted_pattern,
    read_uncertain_tsv,
    save_ucr_tsv,
    smooth_subspace_like,
    write_uncertain_tsv,
)
from .experiment import (
    MODEL_NAMES,
    ConfigError,
    ModelSpec,
    append_results,
    bench,
    read_results,
    results_csv,
    run_experiment,
    write_results,
)
from .ordering import OrderingStrategy
from .shapelet import SearchStats, SelectionConfig, select_shapelets

def _selection_args(p):
    p.add_argument("--k", type=int, default=10, help="number of shapelets (default 10)")
    p.add_argument("--min-len", type=int, default=3)
    p.add_argument("--max-len", type=int, default=None, help="default: series length - 1")
    p.add_argument(
        "--contract-seconds",
        type=float,
        default=600.0,
        help="wall-clock budget of the shapelet search, 'inf' for exhaustive (default 600)",
    )
    p.add_argument("--cdf-k", type=int, default=100, help="grid size of the stochastic ordering")


def _model_args(p):
    p.add_argument("--measure", choices=["ed", "ued", "dust-uniform", "dust-normal"], default="ued")
    p.add_argument(
        "--ordering",
        choices=["simple", "stochastic", "interval", "natural"],
        default=None,
        help="default: interval for ued, natural otherwise",
    )
    p.add_argument("--classifier", choices=["gnb", "ugnb"], default="gnb")


def _injection_args(p):
    p.add_argument("--c", type=float, default=0.0, help="uncertainty level (default 0)")
    p.add_argument("--seed", type=int, default=0)


def _selection(args, spec=None):
    return SelectionConfig(
        k=args.k,
        min_len=args.min_len,
        max_len=args.max_len,
        contract=args.contract_seconds,
        ordering=spec.strategy if spec else OrderingStrategy(),
        measure=spec.measure if spec else "ued",
    )


def _spec(args):
    return ModelSpec(args.measure, args.ordering, args.classifier, args.cdf_k)


def _looks_uncertain(path):
    with open(path) as fh:
        for line in fh:
            if line.strip():
                return ":" in line.split("\t", 2)[-1]
    return False


def _parent(path):
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)


def cmd_inject(args):
    raw = load_ucr_tsv(args.train)
    D = inject_uncertainty(raw, args.c, args.seed)
    _parent(args.out)
    write_uncertain_tsv(D, args.out)
    print(f"wrote {D.n} uncertain series of length {D.m} to {args.out}")
    if args.figure:
        plotting.uncertain_series(D, args.index, args.figure, original=raw.series[args.index])
        print(f"figure: {args.figure}")


def cmd_select(args):
    spec = ModelSpec(args.measure, args.ordering, "gnb", args.cdf_k)
    if _looks_uncertain(args.train):
        D = read_uncertain_tsv(args.train)
    else:
        D = inject_uncertainty(load_ucr_tsv(args.train), args.c, args.seed)
    stats = SearchStats()
    found = select_shapelets(D, _selection(args, spec), stats)
    doc = {
        "dataset": D.name,
        "measure": spec.measure.value,
        "ordering": spec.ordering.value,
        "evaluated": stats.evaluated,
        "total_candidates": stats.total_candidates,
        "seconds": stats.elapsed,
        "shapelets": [s.to_dict() for s in found],
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    if args.figure:
        plotting.shapelets(D, found, args.figure)


def cmd_run(args):
    spec = _spec(args)
    result = run_experiment(args.train, args.test, spec, args.c, args.seed, _selection(args, spec))
    sys.stdout.write(results_csv([result]))
    if args.out:
        _parent(args.out)
        append_results([result], args.out)


def _figures(results, out_dir, stem):
    os.makedirs(out_dir, exist_ok=True)
    paths = [
        plotting.accuracy_vs_level(results, os.path.join(out_dir, f"{stem}_accuracy.png"),
                                   title=results[0].dataset if results else None),
        plotting.training_time(results, os.path.join(out_dir, f"{stem}_train_time.png")),
    ]
    return paths


def _summary(results):
    table = defaultdict(list)
    for r in results:
        table[(r.model, r.ordering, r.c)].append(r.accuracy)
    lines = ["model\tordering\tc\tmedian_accuracy\truns"]
    for (model, ordering, c), acc in sorted(table.items()):
        lines.append(f"{model}\t{ordering}\t{c}\t{np.median(acc):.4f}\t{len(acc)}")
    return "\n".join(lines)


def cmd_bench(args):
    specs = [ModelSpec.from_name(name, args.ordering, args.cdf_k) for name in args.models]
    selection = _selection(args)
    results = bench(args.train, args.test, specs, args.c, args.seeds, selection)
    _parent(args.out)
    with open(args.out, "w", newline="") as fh:
        write_results(results, fh)
    print(_summary(results))
    out_dir = args.figures_dir or os.path.dirname(os.path.abspath(args.out))
    stem = os.path.splitext(os.path.basename(args.out))[0]
    for path in _figures(results, out_dir, stem):
        print(f"figure: {path}")


def cmd_report(args):
    results = read_results(args.results)
    print(_summary(results))
    out_dir = args.figures_dir or os.path.dirname(os.path.abspath(args.results))
    stem = os.path.splitext(os.path.basename(args.results))[0]
    for path in _figures(results, out_dir, stem):
        print(f"figure: {path}")


def cmd_synth(args):
    os.makedirs(args.out_dir, exist_ok=True)
    if args.kind == "planted":
        train = planted_pattern(args.n_per_class, args.length, seed=args.seed, name="Planted")
        test = planted_pattern(args.n_per_class, args.length, seed=args.seed + 1, name="Planted")
    else:
        train = smooth_subspace_like(args.n_per_class, args.length, seed=args.seed)
        test = smooth_subspace_like(args.n_per_class, args.length, seed=args.seed + 1)
    for split, ds in (("TRAIN", train), ("TEST", test)):
        path = os.path.join(args.out_dir, f"{ds.name}_{split}.tsv")
        save_ucr_tsv(ds, path)
        print(path)


def build_parser():
    parser = argparse.ArgumentParser(prog="ustc", description="Uncertain shapelet transform classification")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inject", help="write an uncertain copy of a UCR TSV file")
    p.add_argument("--train", required=True, help="input UCR-style TSV")
    p.add_argument("--out", required=True, help="output uncertain TSV (label, best:delta ...)")
    _injection_args(p)
    p.add_argument("--figure", help="also plot one series with its uncertainty bars")
    p.add_argument("--index", type=int, default=0, help="series to plot")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("select", help="print the top-k shapelets as JSON")
    p.add_argument("--train", required=True, help="UCR TSV (injected with --c/--seed) or uncertain TSV")
    p.add_argument("--measure", choices=["ed", "ued", "dust-uniform", "dust-normal"], default="ued")
    p.add_argument("--ordering", choices=["simple", "stochastic", "interval", "natural"], default=None)
    _selection_args(p)
    _injection_args(p)
    p.add_argument("--figure", help="plot the top shapelets to this file")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("run", help="one experiment, one CSV row")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    _model_args(p)
    _selection_args(p)
    _injection_args(p)
    p.add_argument("--out", help="append the row to this CSV file")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("bench", help="models x levels x seeds, CSV table plus figures")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--models", nargs="+", default=list(MODEL_NAMES), metavar="MODEL",
                   help=f"any of {', '.join(MODEL_NAMES)}")
    p.add_argument("--ordering", choices=["simple", "stochastic", "interval"], default=None,
                   help="ordering of the UED models (default interval)")
    _selection_args(p)
    p.add_argument("--c", type=float, nargs="+", default=[0.1, 0.4, 0.8, 1.2, 2.0])
    p.add_argument("--seeds", "--seed", type=int, nargs="+", default=[0])
    p.add_argument("--out", required=True, help="CSV table")
    p.add_argument("--figures-dir", help="default: directory of --out")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("report", help="summarize a results CSV and render its figures")
    p.add_argument("results")
    p.add_argument("--figures-dir")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("synth", help="write synthetic train/test TSV files")
    p.add_argument("--kind", choices=["planted", "smooth-subspace"], default="planted")
    p.add_argument("--n-per-class", type=int, default=20)
    p.add_argument("--length", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ConfigError, DataFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
