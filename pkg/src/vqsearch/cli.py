"""Command-line entry point: ``vqsearch <subcommand> ...``."""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from .circuits import ProblemInstance, build_oracle, build_superposition, layer_circuit
from .errors import CapacityError
from .experiments import (
    all1row_rows,
    emit_plot_data,
    load_config,
    config_from_mapping,
    run_experiment,
    summaries_csv,
    summarize,
    verify_suite,
)
from .optimizer import read_records
from .reachability import constructed_reachability, empirical_reachability

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _build_circuit(args) -> int:
    inst = ProblemInstance(args.n, args.k)
    circ = layer_circuit(inst, args.layer)
    if not args.layer_only:
        circ = build_superposition(inst) + build_oracle(inst) + circ
    text = circ.to_text()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _run_vqs(args) -> int:
    flags = {
        "n_values": args.n,
        "num_runs": args.runs,
        "k_policy": None if args.k is None else f"fixed:{args.k}",
        "seed": args.seed,
        "optimizer_kind": args.optimizer,
        "learning_rate": args.learning_rate,
        "max_iterations": args.max_iterations,
        "small_change_threshold": args.threshold,
        "consecutive_events_required": args.consecutive,
        "output_dir": args.output_dir,
        "fix_label_angle": True if args.fix_label_angle else None,
        "allow_large": True if args.allow_large else None,
    }
    if args.config:
        config = load_config(args.config, **flags)
    else:
        config = config_from_mapping({k: v for k, v in flags.items() if v is not None})
    summaries = run_experiment(config)
    text = summaries_csv(summaries)
    (config.output_dir / "summary.csv").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


def _verify_all1row(args) -> int:
    fields = ["n", "k", "hx_row", "hx_sign", "ry_row", "ry_sign", "predicted_amplitude", "status"]
    w = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    failed = 0
    for row in all1row_rows(args.n_max):
        failed += row["status"] != "pass"
        w.writerow(row)
    return EXIT_FAIL if failed else EXIT_OK


def _reachability(args) -> int:
    if args.from_records:
        records = read_records(args.from_records)
        report = empirical_reachability(records, args.n)
    else:
        report = constructed_reachability(ProblemInstance(args.n, args.k))
    print(report.csv_header())
    print(report.csv_row())
    return EXIT_OK


def _verify(args) -> int:
    checks = verify_suite(ry_perturbation=args.perturb_ry)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


def _plot_data(args) -> int:
    records = read_records(args.input)
    text = emit_plot_data([summarize(records)], args.format, args.out)
    if not args.out:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vqsearch", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build-circuit", help="emit a search circuit in line format")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--layer", choices=["hx", "ry"], default="hx")
    b.add_argument("--layer-only", action="store_true", help="omit superposition and oracle")
    b.add_argument("--out")
    b.set_defaults(func=_build_circuit)

    r = sub.add_parser("run-vqs", help="run the variational search experiment")
    r.add_argument("--config", help="key = value file; flags override it")
    r.add_argument("--n", type=int, nargs="+")
    r.add_argument("--runs", type=int)
    r.add_argument("--k", type=int, help="fix the good index (default: random per run)")
    r.add_argument("--seed", type=int)
    r.add_argument("--optimizer", choices=["ADAM", "GRADIENT_DESCENT"])
    r.add_argument("--learning-rate", type=float)
    r.add_argument("--max-iterations", type=int)
    r.add_argument("--threshold", type=float)
    r.add_argument("--consecutive", type=int)
    r.add_argument("--output-dir")
    r.add_argument("--fix-label-angle", action="store_true", help="hold the label Ry at pi")
    r.add_argument("--allow-large", action="store_true", help="permit n up to 20 (slow)")
    r.set_defaults(func=_run_vqs)

    a = sub.add_parser("verify-all1row", help="CSV report of the all-1-row check")
    a.add_argument("--n-max", type=int, default=10)
    a.set_defaults(func=_verify_all1row)

    re_ = sub.add_parser("reachability", help="one-line CSV reachability report")
    re_.add_argument("--n", type=int, required=True)
    re_.add_argument("--k", type=int, default=0)
    re_.add_argument("--from-records", help="JSONL run records; gives an empirical upper bound")
    re_.set_defaults(func=_reachability)

    v = sub.add_parser("verify", help="run the deterministic verification suite")
    v.add_argument("--perturb-ry", type=float, default=0.0, help=argparse.SUPPRESS)
    v.set_defaults(func=_verify)

    pd = sub.add_parser("plot-data", help="box-plot data from run records")
    pd.add_argument("--in", dest="input", required=True)
    pd.add_argument("--format", choices=["csv", "gnuplot"], default="csv")
    pd.add_argument("--out")
    pd.set_defaults(func=_plot_data)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (CapacityError, ValueError, KeyError) as exc:
        print(f"vqsearch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"vqsearch: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
