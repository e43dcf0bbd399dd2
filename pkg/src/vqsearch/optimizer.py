"""Variational search loop with a single Ry layer as the ansatz.

``objective``, ``gradient`` and ``train`` only ever see the post-oracle state
``psi1``; the good index ``k`` is read when the oracle is built and when the
final probability is scored, both inside ``optimize``.
"""
from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Iterable

import numpy as np

from .circuits import ProblemInstance, prepare_psi1
from .errors import ShapeError
from .statevector import StateVector, apply_matrix_inplace, ry

MAX_ITERATIONS = "MAX_ITERATIONS"
SMALL_CHANGE = "SMALL_CHANGE"

GRADIENT_DESCENT = "GRADIENT_DESCENT"
ADAM = "ADAM"

_K_STREAM = 0x6B  # SeedSequence spawn key for per-run good-index draws


def observable_diagonal(n: int) -> np.ndarray:
    """Diagonal of 0.5(-I + Z (x) I...): zeros on label=0, -1 on label=1."""
    N = 1 << n
    return np.concatenate([np.zeros(N), -np.ones(N)])


def data_qubits(psi1: StateVector) -> int:
    return psi1.num_qubits - 1


def _check_theta(psi1: StateVector, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (psi1.num_qubits,):
        raise ShapeError(
            f"theta has shape {theta.shape}, expected ({psi1.num_qubits},) for this state"
        )
    return theta


def apply_ansatz(psi1: StateVector, theta) -> StateVector:
    theta = _check_theta(psi1, theta)
    out = psi1.copy()
    for q, t in enumerate(theta):
        apply_matrix_inplace(out.amps, out.num_qubits, ry(t), q)
    return out


def objective(psi1: StateVector, theta) -> float:
    """f(theta) = <psi1| O |psi2> with psi2 the ansatz applied to psi1."""
    psi2 = apply_ansatz(psi1, theta)
    half = psi1.dim // 2
    # O is -1 on the label=1 half and 0 elsewhere
    return -float(np.vdot(psi1.amps[half:], psi2.amps[half:]).real)


def gradient(psi1: StateVector, theta) -> np.ndarray:
    """Exact gradient by shifting each angle by +-pi.

    f depends on each angle through a single Ry, so along one coordinate it is
    A cos(theta_i / 2 + phi) and the +-pi shift difference equals 4 df/dtheta_i.
    """
    theta = _check_theta(psi1, theta)
    g = np.empty_like(theta)
    for i in range(theta.size):
        plus = theta.copy()
        plus[i] += math.pi
        minus = theta.copy()
        minus[i] -= math.pi
        g[i] = (objective(psi1, plus) - objective(psi1, minus)) / 4.0
    return g


class Adam:
    def __init__(self, lr=0.1, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.m = None
        self.v = None
        self.t = 0

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if self.m is None:
            self.m = np.zeros_like(params)
            self.v = np.zeros_like(params)
        self.t += 1
        self.m = self.beta1 * self.m + (1.0 - self.beta1) * grad
        self.v = self.beta2 * self.v + (1.0 - self.beta2) * grad * grad
        m_hat = self.m / (1.0 - self.beta1**self.t)
        v_hat = self.v / (1.0 - self.beta2**self.t)
        return params - self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


class GradientDescent:
    def __init__(self, lr=0.1):
        self.lr = lr

    def step(self, params: np.ndarray, grad: np.ndarray) -> np.ndarray:
        return params - self.lr * grad


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 300
    small_change_threshold: float = 1e-4
    consecutive_events_required: int = 5
    learning_rate: float = 0.1
    optimizer_kind: str = ADAM
    seed: int = 0
    fix_label_angle: bool = False

    def __post_init__(self):
        if self.max_iterations < 1 or self.consecutive_events_required < 1:
            raise ValueError("iteration counts must be positive")
        if self.small_change_threshold <= 0 or self.learning_rate <= 0:
            raise ValueError("threshold and learning rate must be positive")
        if self.optimizer_kind not in (ADAM, GRADIENT_DESCENT):
            raise ValueError(f"unknown optimizer_kind {self.optimizer_kind!r}")

    def make_optimizer(self):
        if self.optimizer_kind == ADAM:
            return Adam(lr=self.learning_rate)
        return GradientDescent(lr=self.learning_rate)


@dataclass
class RunRecord:
    seed: int
    theta_initial: list[float]
    theta_final: list[float]
    objective_trace: list[float]
    iterations_used: int
    termination_reason: str
    amplified_probability: float
    k: int | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self))

    @classmethod
    def from_json(cls, line: str) -> "RunRecord":
        return cls(**json.loads(line))


@dataclass
class TrainResult:
    theta: np.ndarray
    objective_trace: list[float] = field(default_factory=list)
    termination_reason: str = MAX_ITERATIONS


def is_small_change(previous: float, current: float, threshold: float) -> bool:
    if previous == 0.0:
        return current == 0.0
    return abs(current - previous) / abs(previous) < threshold


def train(psi1: StateVector, theta0, config: OptimizerConfig) -> TrainResult:
    """Minimize f from ``theta0`` until either termination criterion fires.

    One iteration is one parameter update followed by one objective
    evaluation; the first iteration is compared against f(theta0).
    """
    theta = _check_theta(psi1, theta0).copy()
    opt = config.make_optimizer()
    prev = objective(psi1, theta)
    events = 0
    result = TrainResult(theta)
    for _ in range(config.max_iterations):
        g = gradient(psi1, theta)
        if config.fix_label_angle:
            g[-1] = 0.0
        theta = opt.step(theta, g)
        cur = objective(psi1, theta)
        result.objective_trace.append(cur)
        events = events + 1 if is_small_change(prev, cur, config.small_change_threshold) else 0
        prev = cur
        if events >= config.consecutive_events_required:
            result.termination_reason = SMALL_CHANGE
            break
    result.theta = theta
    return result


def initial_theta(n: int, config: OptimizerConfig) -> np.ndarray:
    rng = np.random.Generator(np.random.Philox(config.seed))
    theta = rng.uniform(0.0, 2.0 * math.pi, size=n + 1)
    if config.fix_label_angle:
        theta[-1] = math.pi
    return theta


def draw_good_index(n: int, seed: int) -> int:
    ss = np.random.SeedSequence(seed, spawn_key=(_K_STREAM,))
    return int(np.random.Generator(np.random.Philox(ss)).integers(1 << n))


def optimize(inst: ProblemInstance, config: OptimizerConfig, theta_initial=None) -> RunRecord:
    psi1 = prepare_psi1(inst)
    theta0 = initial_theta(inst.n, config) if theta_initial is None else np.asarray(theta_initial, float)
    res = train(psi1, theta0, config)
    amp = apply_ansatz(psi1, res.theta).amps[inst.good_index]
    return RunRecord(
        seed=config.seed,
        theta_initial=[float(t) for t in theta0],
        theta_final=[float(t) for t in res.theta],
        objective_trace=[float(f) for f in res.objective_trace],
        iterations_used=len(res.objective_trace),
        termination_reason=res.termination_reason,
        amplified_probability=float(abs(amp) ** 2),
        k=inst.k,
    )


def run_seeds(base_seed: int, num_runs: int) -> list[int]:
    return [base_seed + i for i in range(num_runs)]


def _one_run(args) -> RunRecord:
    inst, config, randomize_k = args
    if randomize_k:
        inst = ProblemInstance(inst.n, draw_good_index(inst.n, config.seed))
    return optimize(inst, config)


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("VQSEARCH_THREADS", "1")))
    except ValueError:
        return 1


def run_batch(
    inst: ProblemInstance,
    config: OptimizerConfig,
    num_runs: int,
    randomize_k: bool = False,
    workers: int | None = None,
) -> list[RunRecord]:
    """Independent runs with seeds ``config.seed + i``, returned in run order.

    With ``randomize_k`` each run draws its own good index from its seed and
    ``inst.k`` is ignored.
    """
    if num_runs < 1:
        raise ValueError("num_runs must be >= 1")
    jobs = [(inst, replace(config, seed=s), randomize_k) for s in run_seeds(config.seed, num_runs)]
    workers = thread_cap() if workers is None else workers
    if workers <= 1 or num_runs == 1:
        return [_one_run(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=min(workers, num_runs)) as pool:
        return list(pool.map(_one_run, jobs))


def write_records(path, records: Iterable[RunRecord]) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(r.to_json() + "\n")


def read_records(path) -> list[RunRecord]:
    with open(path) as fh:
        return [RunRecord.from_json(line) for line in fh if line.strip()]


def final_objective(record: RunRecord) -> float:
    if not record.objective_trace:
        raise ValueError("record has an empty objective trace")
    return record.objective_trace[-1]
