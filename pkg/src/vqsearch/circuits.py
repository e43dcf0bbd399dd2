"""Circuit construction: superposition block, oracle, HX layer, Ry layer, Ry ansatz."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ShapeError
from .statevector import (
    CPX,
    H,
    RY,
    Gate,
    StateVector,
    X,
    apply_gate,
    init_zero_state,
)


@dataclass(frozen=True)
class ProblemInstance:
    """Search problem over ``2**n`` elements with the good one at index ``k``."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.k < (1 << self.n):
            raise ValueError(f"k={self.k} outside [0, {(1 << self.n) - 1}]")

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def num_qubits(self) -> int:
        return self.n + 1

    @property
    def label(self) -> int:
        return self.n

    @property
    def good_index(self) -> int:
        return self.N + self.k

    @property
    def bits(self) -> str:
        """Binary form of ``k``, most significant data qubit first."""
        return format(self.k, f"0{self.n}b")

    def bit(self, qubit: int) -> int:
        return (self.k >> qubit) & 1


@dataclass(frozen=True)
class Circuit:
    num_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if not 0 <= g.qubit < self.num_qubits:
                raise IndexError(f"gate {g} outside {self.num_qubits}-qubit circuit")

    def __add__(self, other: "Circuit") -> "Circuit":
        if other.num_qubits != self.num_qubits:
            raise ShapeError("cannot concatenate circuits of different width")
        return Circuit(self.num_qubits, self.gates + other.gates)

    def __len__(self):
        return len(self.gates)

    def apply(self, state: StateVector, inplace: bool = False) -> StateVector:
        if state.num_qubits != self.num_qubits:
            raise ShapeError(
                f"{self.num_qubits}-qubit circuit applied to {state.num_qubits}-qubit state"
            )
        out = state if inplace else state.copy()
        for g in self.gates:
            apply_gate(out, g, inplace=True)
        return out

    def to_text(self) -> str:
        lines = [f"# num_qubits {self.num_qubits}"]
        for g in self.gates:
            if g.kind == "CPX":
                lines.append(f"CPX {g.pattern} {g.qubit}")
            elif g.kind == "RY":
                lines.append(f"RY {g.qubit} {g.theta:.17g}")
            else:
                lines.append(f"{g.kind} {g.qubit}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, num_qubits: int | None = None) -> "Circuit":
        gates = []
        for raw in text.splitlines():
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                parts = line[1:].split()
                if len(parts) == 2 and parts[0] == "num_qubits" and num_qubits is None:
                    num_qubits = int(parts[1])
                continue
            kind, *args = line.split()
            if kind == "CPX":
                gates.append(CPX(args[0], int(args[1])))
            elif kind == "RY":
                gates.append(RY(int(args[0]), float(args[1])))
            else:
                gates.append(Gate(kind, int(args[0])))
        if num_qubits is None:
            num_qubits = 1 + max(
                (len(g.pattern) if g.kind == "CPX" else g.qubit for g in gates), default=0
            )
        return cls(num_qubits, gates)


def build_superposition(inst: ProblemInstance) -> Circuit:
    return Circuit(inst.num_qubits, [H(q) for q in range(inst.n)])


def build_oracle(inst: ProblemInstance) -> Circuit:
    return Circuit(inst.num_qubits, [CPX(inst.bits, inst.label)])


def build_hx_layer(inst: ProblemInstance) -> Circuit:
    """Algorithm 1: X on the label; H (then X where k's bit is 1) on each data qubit."""
    gates = []
    for q in range(inst.n):
        gates.append(H(q))
        if inst.bit(q):
            gates.append(X(q))
    gates.append(X(inst.label))
    return Circuit(inst.num_qubits, gates)


def constructed_angles(inst: ProblemInstance) -> np.ndarray:
    """Ry angles of Algorithm 2 laid out as an ansatz vector (label angle last)."""
    return np.array(
        [math.pi / 2 if inst.bit(q) else 3 * math.pi / 2 for q in range(inst.n)] + [math.pi]
    )


def build_ry_ansatz(n: int, theta: Sequence[float]) -> Circuit:
    """One Ry per qubit: ``theta[r]`` on data qubit ``r``, ``theta[n]`` on the label."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (n + 1,):
        raise ShapeError(f"ansatz for n={n} needs {n + 1} angles, got shape {theta.shape}")
    gates = [RY(q, theta[q]) for q in range(n)] + [RY(n, theta[n])]
    return Circuit(n + 1, gates)


def build_ry_layer(inst: ProblemInstance) -> Circuit:
    """Algorithm 2: Ry(pi) on the label, Ry(pi/2) or Ry(3pi/2) per bit of k."""
    return build_ry_ansatz(inst.n, constructed_angles(inst))


class Layer(enum.Enum):
    HX = "hx"
    RY_CONSTRUCTED = "ry"
    RY_ANSATZ = "ansatz"


class PipelineResult(NamedTuple):
    psi0: StateVector
    psi1: StateVector
    psi2: StateVector
    p_good: float


def prepare_psi1(inst: ProblemInstance) -> StateVector:
    """Superposition followed by the oracle: the state fed to the layer."""
    psi0 = build_superposition(inst).apply(init_zero_state(inst.num_qubits))
    return build_oracle(inst).apply(psi0)


def layer_circuit(inst: ProblemInstance, layer: Layer | str, theta=None) -> Circuit:
    layer = Layer(layer)
    if layer is Layer.HX:
        return build_hx_layer(inst)
    if layer is Layer.RY_CONSTRUCTED:
        return build_ry_layer(inst)
    if theta is None:
        raise ValueError("RY_ANSATZ layer needs theta")
    return build_ry_ansatz(inst.n, theta)


def run_pipeline(inst: ProblemInstance, layer: Layer | str = Layer.HX, theta=None) -> PipelineResult:
    psi0 = build_superposition(inst).apply(init_zero_state(inst.num_qubits))
    psi1 = build_oracle(inst).apply(psi0)
    psi2 = layer_circuit(inst, layer, theta).apply(psi1)
    p_good = float(abs(psi2.amps[inst.good_index]) ** 2)
    return PipelineResult(psi0, psi1, psi2, p_good)
