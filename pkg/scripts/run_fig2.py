#!/usr/bin/env python
"""Box-plot experiment: 100 seeded runs of the Ry-layer search per data-set size.

Writes records_n<N>.jsonl, summary.csv, and gnuplot candlestick data to --out.
n above 14 needs --allow-large; VQSEARCH_THREADS sets the number of worker processes.
"""
from __future__ import annotations

import argparse
import logging
from pathlib import Path

from vqsearch.experiments import ExperimentConfig, emit_plot_data, run_experiment, summaries_csv
from vqsearch.optimizer import OptimizerConfig


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--n", type=int, nargs="+", default=[2, 8, 14])
    p.add_argument("--runs", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--optimizer", default="ADAM", choices=["ADAM", "GRADIENT_DESCENT"])
    p.add_argument("--fix-label-angle", action="store_true")
    p.add_argument("--allow-large", action="store_true")
    p.add_argument("--out", type=Path, default=Path("results/fig2"))
    args = p.parse_args()

    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")
    cfg = ExperimentConfig(
        n_values=args.n,
        num_runs=args.runs,
        optimizer=OptimizerConfig(
            seed=args.seed, optimizer_kind=args.optimizer, fix_label_angle=args.fix_label_angle
        ),
        output_dir=args.out,
        allow_large=args.allow_large,
    )
    summaries = run_experiment(cfg)
    (args.out / "summary.csv").write_text(summaries_csv(summaries))
    emit_plot_data(summaries, "gnuplot", args.out / "boxes.dat")
    for s in summaries:
        print(
            f"n={s.n:2d}  median p={s.median:.4f}  IQR=[{s.q1:.4f}, {s.q3:.4f}]  "
            f"success={s.num_success}  failure={s.num_failure}  mean iterations={s.mean_iterations:.1f}"
        )


if __name__ == "__main__":
    main()
