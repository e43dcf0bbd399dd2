"""Dense statevector simulation over a (label qubit + n data qubits) register.

Basis index ``i`` has binary form ``i_{nq-1} ... i_1 i_0`` where bit ``q`` is
the state of qubit ``q``; the label qubit is the most significant one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, ShapeError

MAX_QUBITS = 24

_SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class Gate:
    """A gate descriptor.

    ``kind`` is one of ``"H"``, ``"X"``, ``"RY"`` (uses ``theta``) or ``"CPX"``
    (pattern-controlled X, uses ``pattern`` and targets ``qubit``).
    """

    kind: str
    qubit: int
    theta: float | None = None
    pattern: str | None = None

    def __post_init__(self):
        if self.kind not in ("H", "X", "RY", "CPX"):
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "RY" and self.theta is None:
            raise ValueError("RY gate needs an angle")
        if self.kind == "CPX" and self.pattern is None:
            raise ValueError("CPX gate needs a control pattern")

    @property
    def is_single_qubit(self) -> bool:
        return self.kind != "CPX"

    def matrix(self) -> np.ndarray:
        if self.kind == "H":
            return hadamard()
        if self.kind == "X":
            return pauli_x()
        if self.kind == "RY":
            return ry(self.theta)
        raise ValueError("pattern-controlled X has no 2x2 matrix")


def hadamard() -> np.ndarray:
    return _SQRT1_2 * np.array([[1.0, 1.0], [1.0, -1.0]])


def pauli_x() -> np.ndarray:
    return np.array([[0.0, 1.0], [1.0, 0.0]])


def ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]])


def H(qubit: int) -> Gate:
    return Gate("H", qubit)


def X(qubit: int) -> Gate:
    return Gate("X", qubit)


def RY(qubit: int, theta: float) -> Gate:
    return Gate("RY", qubit, theta=float(theta))


def CPX(pattern: str, target: int) -> Gate:
    return Gate("CPX", target, pattern=pattern)


@dataclass
class StateVector:
    num_qubits: int
    amps: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        if self.amps.shape != (1 << self.num_qubits,):
            raise ShapeError(
                f"expected {1 << self.num_qubits} amplitudes, got shape {self.amps.shape}"
            )

    @classmethod
    def from_amplitudes(cls, amps) -> "StateVector":
        amps = np.asarray(amps, dtype=np.complex128)
        nq = int(amps.size).bit_length() - 1
        if amps.ndim != 1 or (1 << nq) != amps.size or nq < 1:
            raise ShapeError(f"amplitude count {amps.size} is not a power of two >= 2")
        return cls(nq, amps.copy())

    @property
    def dim(self) -> int:
        return self.amps.size

    def copy(self) -> "StateVector":
        return StateVector(self.num_qubits, self.amps.copy())

    def norm(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)


def init_zero_state(num_qubits: int) -> StateVector:
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise CapacityError(
            f"num_qubits={num_qubits} outside [1, {MAX_QUBITS}] (capacity cap)"
        )
    amps = np.zeros(1 << num_qubits, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(num_qubits, amps)


def _pair_view(amps: np.ndarray, num_qubits: int, qubit: int) -> np.ndarray:
    # axis 1 selects the bit of `qubit`; axes 0/2 run over the higher/lower bits
    return amps.reshape(1 << (num_qubits - 1 - qubit), 2, 1 << qubit)


def apply_matrix_inplace(amps: np.ndarray, num_qubits: int, u: np.ndarray, qubit: int) -> None:
    """Apply the 2x2 matrix ``u`` to ``qubit`` of a raw amplitude array, in place."""
    view = _pair_view(amps, num_qubits, qubit)
    a0 = view[:, 0, :].copy()
    a1 = view[:, 1, :]
    view[:, 0, :] = u[0, 0] * a0 + u[0, 1] * a1
    view[:, 1, :] = u[1, 0] * a0 + u[1, 1] * a1


def apply_single_qubit_gate(
    state: StateVector, gate: Gate, qubit: int | None = None, inplace: bool = False
) -> StateVector:
    """Apply ``gate`` at ``qubit`` (defaults to ``gate.qubit``)."""
    if not gate.is_single_qubit:
        raise ValueError("apply_single_qubit_gate got a pattern-controlled gate")
    q = gate.qubit if qubit is None else qubit
    if not 0 <= q < state.num_qubits:
        raise IndexError(f"qubit {q} out of range for {state.num_qubits}-qubit state")
    out = state if inplace else state.copy()
    apply_matrix_inplace(out.amps, out.num_qubits, gate.matrix(), q)
    return out


def apply_pattern_controlled_x(
    state: StateVector, pattern: str, target: int | None = None, inplace: bool = False
) -> StateVector:
    """Flip the label qubit on every basis state whose data bits spell ``pattern``.

    ``pattern`` is written most-significant data qubit first, so ``"100111"``
    controls on q5=1, q4=0, q3=0, q2=1, q1=1, q0=1.
    """
    nq = state.num_qubits
    label = nq - 1
    if target is None:
        target = label
    if len(pattern) != nq - 1 or set(pattern) - {"0", "1"}:
        raise ShapeError(f"pattern {pattern!r} must be {nq - 1} binary digits")
    if target != label:
        raise IndexError(f"pattern-controlled X must target the label qubit {label}")
    out = state if inplace else state.copy()
    lo = int(pattern, 2)
    hi = lo | (1 << label)
    out.amps[[lo, hi]] = out.amps[[hi, lo]]
    return out


def apply_gate(state: StateVector, gate: Gate, inplace: bool = False) -> StateVector:
    if gate.kind == "CPX":
        return apply_pattern_controlled_x(state, gate.pattern, gate.qubit, inplace=inplace)
    return apply_single_qubit_gate(state, gate, inplace=inplace)


def probabilities(state: StateVector) -> np.ndarray:
    return np.abs(state.amps) ** 2
