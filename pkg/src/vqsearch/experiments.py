"""Batch experiments, box-plot summaries and the deterministic verification suite."""
from __future__ import annotations

import configparser
import csv
import io
import logging
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from .circuits import Layer, ProblemInstance, prepare_psi1, run_pipeline
from .errors import CapacityError, StructureError
from .matrices import (
    LayerKind,
    expected_sign,
    good_probability_table,
    hadamard,
    kron_chain,
    layer_matrix,
    locate_signed_unit_row,
    predicted_good_amplitude,
    xh,
)
from .optimizer import (
    OptimizerConfig,
    RunRecord,
    apply_ansatz,
    gradient,
    objective,
    run_batch,
    write_records,
)
from .reachability import constructed_reachability
from .statevector import MAX_QUBITS

log = logging.getLogger(__name__)

SUCCESS_THRESHOLD = 0.9
FAILURE_THRESHOLD = 0.1

DEFAULT_N_VALUES = (2, 8, 14)
LARGE_N = 14  # anything above needs allow_large
DESK_CEILING = 20

# (1 - 1/2^n)^2 for n = 1..9, as reported to four decimals
REPORTED_PROBABILITIES = (0.25, 0.5625, 0.7656, 0.8789, 0.9386, 0.9690, 0.9844, 0.9922, 0.9961)
REPORTED_TOL = 5e-5

# sqrt(8) * (XH (x) H (x) XH), the k=5 HX layer
K5_HX_MATRIX = np.array(
    [
        [1, -1, 1, -1, -1, 1, -1, 1],
        [1, 1, 1, 1, -1, -1, -1, -1],
        [1, -1, -1, 1, -1, 1, 1, -1],
        [1, 1, -1, -1, -1, -1, 1, 1],
        [1, -1, 1, -1, 1, -1, 1, -1],
        [1, 1, 1, 1, 1, 1, 1, 1],
        [1, -1, -1, 1, 1, -1, -1, 1],
        [1, 1, -1, -1, 1, 1, -1, -1],
    ],
    dtype=float,
)


@dataclass
class ExperimentConfig:
    n_values: list[int] = field(default_factory=lambda: list(DEFAULT_N_VALUES))
    k_policy: str = "random"
    num_runs: int = 100
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    output_dir: Path = Path("results")
    allow_large: bool = False

    def __post_init__(self):
        self.output_dir = Path(self.output_dir)
        if not self.n_values:
            raise ValueError("n_values must not be empty")
        if self.num_runs < 1:
            raise ValueError("num_runs must be >= 1")
        parse_k_policy(self.k_policy)
        for n in self.n_values:
            check_desk_scale(n, self.allow_large)

    def fixed_k(self) -> int | None:
        return parse_k_policy(self.k_policy)


def parse_k_policy(policy: str) -> int | None:
    """``"random"`` -> None; ``"fixed:K"`` -> K."""
    policy = policy.strip().lower()
    if policy == "random":
        return None
    if policy.startswith("fixed:"):
        return int(policy.split(":", 1)[1])
    raise ValueError(f"k_policy must be 'random' or 'fixed:<k>', got {policy!r}")


def check_desk_scale(n: int, allow_large: bool = False) -> None:
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n + 1 > MAX_QUBITS:
        raise CapacityError(
            f"n={n} needs {n + 1} qubits, above the {MAX_QUBITS}-qubit capacity cap "
            f"(2^{MAX_QUBITS} amplitudes); larger n is covered by the analytic bound only"
        )
    if n > DESK_CEILING:
        raise CapacityError(f"n={n} is above the desk-scale ceiling of {DESK_CEILING} data qubits")
    if n > LARGE_N and not allow_large:
        raise CapacityError(f"n={n} is slow; pass allow_large to run above n={LARGE_N}")


_OPT_KEYS = {f.name: f.type for f in fields(OptimizerConfig)}


def load_config(path, **overrides) -> ExperimentConfig:
    """Read a flat ``key = value`` file; a section header is optional."""
    text = Path(path).read_text()
    if not text.lstrip().startswith("["):
        text = "[vqs]\n" + text
    parser = configparser.ConfigParser()
    parser.read_string(text)
    flat = {}
    for section in parser.sections():
        flat.update(parser[section])
    flat.update({k: v for k, v in overrides.items() if v is not None})
    return config_from_mapping(flat)


def _as_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    return str(v).strip().lower() in ("1", "true", "yes", "on")


def config_from_mapping(values: dict) -> ExperimentConfig:
    opt = {}
    exp = {}
    for key, raw in values.items():
        if key in ("max_iterations", "consecutive_events_required", "seed"):
            opt[key] = int(raw)
        elif key in ("small_change_threshold", "learning_rate"):
            opt[key] = float(raw)
        elif key == "optimizer_kind":
            opt[key] = str(raw).strip().upper()
        elif key == "fix_label_angle":
            opt[key] = _as_bool(raw)
        elif key == "n_values":
            exp[key] = [int(x) for x in str(raw).replace(",", " ").split()] if isinstance(raw, str) else list(raw)
        elif key == "num_runs":
            exp[key] = int(raw)
        elif key == "k_policy":
            exp[key] = str(raw)
        elif key == "output_dir":
            exp[key] = Path(raw)
        elif key == "allow_large":
            exp[key] = _as_bool(raw)
        else:
            raise KeyError(f"unknown config key {key!r}")
    return ExperimentConfig(optimizer=OptimizerConfig(**opt), **exp)


@dataclass(frozen=True)
class BoxSummary:
    n: int
    count: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    num_success: int
    num_failure: int
    mean_iterations: float
    iter_min: float
    iter_q1: float
    iter_median: float
    iter_q3: float
    iter_max: float


def five_numbers(values) -> tuple[float, float, float, float, float]:
    # numpy's default "linear" method is the inclusive quartile rule
    q = np.quantile(np.asarray(values, dtype=float), [0.0, 0.25, 0.5, 0.75, 1.0])
    return tuple(float(x) for x in q)


def summarize(records: Sequence[RunRecord], n: int | None = None) -> BoxSummary:
    if not records:
        raise ValueError("summarize needs at least one record")
    if n is None:
        n = len(records[0].theta_final) - 1
    probs = [r.amplified_probability for r in records]
    iters = [r.iterations_used for r in records]
    p = five_numbers(probs)
    it = five_numbers(iters)
    return BoxSummary(
        n,
        len(records),
        *p,
        num_success=sum(x > SUCCESS_THRESHOLD for x in probs),
        num_failure=sum(x < FAILURE_THRESHOLD for x in probs),
        mean_iterations=float(np.mean(iters)),
        iter_min=it[0],
        iter_q1=it[1],
        iter_median=it[2],
        iter_q3=it[3],
        iter_max=it[4],
    )


def records_path(output_dir, n: int) -> Path:
    return Path(output_dir) / f"records_n{n}.jsonl"


def run_experiment(config: ExperimentConfig, workers: int | None = None) -> list[BoxSummary]:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    fixed = config.fixed_k()
    summaries = []
    for n in config.n_values:
        check_desk_scale(n, config.allow_large)
        inst = ProblemInstance(n, 0 if fixed is None else fixed)
        log.info("n=%d: %d runs", n, config.num_runs)
        records = run_batch(
            inst, config.optimizer, config.num_runs, randomize_k=fixed is None, workers=workers
        )
        write_records(records_path(out, n), records)
        s = summarize(records, n)
        log.info("n=%d: median p=%.4f, %d success, %d failure", n, s.median, s.num_success, s.num_failure)
        summaries.append(s)
    return summaries


def summaries_csv(summaries: Sequence[BoxSummary]) -> str:
    buf = io.StringIO()
    names = [f.name for f in fields(BoxSummary)]
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for s in summaries:
        w.writerow([repr(v) if isinstance(v, float) else v for v in asdict(s).values()])
    return buf.getvalue()


def emit_plot_data(summaries: Sequence[BoxSummary], fmt: str = "csv", path=None) -> str:
    """Per-n quartiles of probability and iteration count.

    ``gnuplot`` rows follow the candlesticks column order
    ``x box_low whisker_low whisker_high box_high`` with the median appended,
    first for probability then for iterations.
    """
    if not summaries:
        raise ValueError("emit_plot_data needs at least one summary")
    fmt = fmt.lower()
    if fmt == "csv":
        text = summaries_csv(summaries)
    elif fmt == "gnuplot":
        lines = [
            "# n p_q1 p_min p_max p_q3 p_median it_q1 it_min it_max it_q3 it_median",
            "# plot 'file' using 1:2:3:4:5 with candlesticks whiskerbars, "
            "'' using 1:6:6:6:6 with candlesticks",
        ]
        for s in summaries:
            cols = [s.q1, s.min, s.max, s.q3, s.median, s.iter_q1, s.iter_min, s.iter_max, s.iter_q3, s.iter_median]
            lines.append(" ".join([str(s.n)] + [f"{c:.10g}" for c in cols]))
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown plot format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


# --- verification suite ---------------------------------------------------------


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: str
    expected: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: measured {self.measured}; expected {self.expected}"


def all1row_rows(n_max: int, ry_perturbation: float = 0.0):
    """One dict per (n, k) instance with the located row/sign for both layers."""
    for n in range(1, n_max + 1):
        for k in range(1 << n):
            inst = ProblemInstance(n, k)
            row = {"n": n, "k": k}
            ok = True
            for kind in (LayerKind.HX, LayerKind.RY):
                try:
                    r, sign = locate_signed_unit_row(layer_matrix(inst, kind, ry_perturbation))
                except StructureError:
                    r, sign = -1, 0
                row[f"{kind.value}_row"] = r
                row[f"{kind.value}_sign"] = sign
                ok &= r == k and sign == expected_sign(inst, kind)
            row["predicted_amplitude"] = predicted_good_amplitude(inst, expected_sign(inst, LayerKind.RY))
            row["status"] = "pass" if ok else "fail"
            yield row


def reported_table_rows():
    """``(n, computed, reported, within_tolerance)`` for n = 1..9."""
    table = good_probability_table(len(REPORTED_PROBABILITIES))
    return [
        (n, float(got), rep, abs(got - rep) <= REPORTED_TOL)
        for n, (got, rep) in enumerate(zip(table, REPORTED_PROBABILITIES), start=1)
    ]


def check_probability_table() -> CheckResult:
    """Both constructed pipelines give (1 - 1/2^n)^2 for n = 1..9."""
    worst = 0.0
    rng = np.random.default_rng(2024)
    for n in range(1, 10):
        expected = (1.0 - 0.5**n) ** 2
        ks = range(1 << n) if n <= 6 else rng.choice(1 << n, size=10, replace=False)
        for k in ks:
            inst = ProblemInstance(n, int(k))
            for layer in (Layer.HX, Layer.RY_CONSTRUCTED):
                worst = max(worst, abs(run_pipeline(inst, layer).p_good - expected))
    return CheckResult(
        "good-element probability n=1..9 (HX and Ry pipelines)",
        worst <= 1e-12,
        f"max |p - (1-1/2^n)^2|={worst:.2e}",
        "<= 1e-12",
    )


def check_k5_matrix() -> CheckResult:
    m = kron_chain([xh(), hadamard(), xh()]) * 2 * math.sqrt(2)
    err = float(np.max(np.abs(m - K5_HX_MATRIX)))
    return CheckResult("XH (x) H (x) XH matrix for k=5", err <= 1e-9, f"max |diff|={err:.2e}", "<= 1e-9")


def check_all1row(n_max: int = 10, ry_perturbation: float = 0.0) -> CheckResult:
    rows = list(all1row_rows(n_max, ry_perturbation))
    failures = sum(r["status"] != "pass" for r in rows)
    return CheckResult(
        f"all-1 row at k with parity sign, n=1..{n_max}",
        failures == 0,
        f"{failures} failures over {len(rows)} instances",
        "0 failures",
    )


def check_reachability(n_max: int = 12) -> CheckResult:
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in range(1, n_max + 1):
        for k in rng.choice(1 << n, size=min(4, 1 << n), replace=False):
            rep = constructed_reachability(ProblemInstance(n, int(k)))
            worst = max(worst, abs(rep.reachability - 2.0**-n))
    return CheckResult(
        f"constructed reachability = 1/2^n, n=1..{n_max}", worst <= 1e-12, f"max |diff|={worst:.2e}", "<= 1e-12"
    )


def check_objective_identities(samples: int = 50) -> CheckResult:
    rng = np.random.default_rng(11)
    worst_f = worst_p = worst_g = 0.0
    for _ in range(samples):
        n = int(rng.integers(1, 7))
        inst = ProblemInstance(n, int(rng.integers(1 << n)))
        theta = rng.uniform(0, 4 * math.pi, n + 1)
        psi1 = prepare_psi1(inst)
        f = objective(psi1, theta)
        amp = apply_ansatz(psi1, theta).amps[inst.good_index].real
        worst_f = max(worst_f, abs(f + amp / math.sqrt(inst.N)))
        worst_p = max(worst_p, abs(amp**2 - inst.N * f * f))
        g = gradient(psi1, theta)
        fd = np.array([
            (objective(psi1, theta + h) - objective(psi1, theta - h)) / 2e-5
            for h in np.eye(n + 1) * 1e-5
        ])
        worst_g = max(worst_g, float(np.max(np.abs(g - fd))))
    ok = worst_f <= 1e-12 and worst_p <= 1e-10 and worst_g <= 1e-6
    return CheckResult(
        "objective / gradient identities",
        ok,
        f"f err={worst_f:.1e}, p err={worst_p:.1e}, grad err={worst_g:.1e}",
        "<= 1e-12, 1e-10, 1e-6",
    )


def verify_suite(
    ry_perturbation: float = 0.0, n_max_all1row: int = 10, emit: Callable[[str], None] | None = print
) -> list[CheckResult]:
    checks = [
        check_probability_table(),
        check_k5_matrix(),
        check_all1row(n_max_all1row, ry_perturbation),
        check_reachability(),
        check_objective_identities(),
    ]
    if emit is not None:
        for n, got, rep, ok in reported_table_rows():
            note = "ok" if ok else f"MISMATCH: reported value off by {abs(got - rep):.1e}"
            emit(f"  n={n}: (1-1/2^n)^2 = {got:.6f}  reported {rep:.4f}  {note}")
        for c in checks:
            emit(c.line())
    return checks
