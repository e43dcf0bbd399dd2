"""Explicit Kronecker-product layer matrices and the all-1-row analysis.

These dense matrices are the independent cross-check for the statevector
engine, so they are built with ``np.kron`` and never through gate application.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuits import ProblemInstance
from .errors import ShapeError, StructureError
from .statevector import hadamard, pauli_x, ry

MAX_MATRIX_QUBITS = 12
UNIT_TOL = 1e-9


class LayerKind(enum.Enum):
    HX = "hx"
    RY = "ry"


@dataclass(frozen=True)
class LayerMatrix:
    """The lower-left ``N x N`` block of a layer, scaled so entries are +-1."""

    n: int
    entries: np.ndarray


def xh() -> np.ndarray:
    return pauli_x() @ hadamard()


def kron_chain(factors: Sequence[np.ndarray]) -> np.ndarray:
    """``factors[0] (x) factors[1] (x) ...``; the first factor is the most significant."""
    if not 1 <= len(factors) <= MAX_MATRIX_QUBITS:
        raise ShapeError(f"kron_chain takes 1..{MAX_MATRIX_QUBITS} factors, got {len(factors)}")
    mats = [np.asarray(f) for f in factors]
    for m in mats:
        if m.shape != (2, 2):
            raise ShapeError(f"factor has shape {m.shape}, expected (2, 2)")
    # fold from the least significant end; out[(i, r), (j, c)] = f[i, j] * out[r, c]
    out = mats[-1]
    for f in reversed(mats[:-1]):
        out = (f[:, None, :, None] * out[None, :, None, :]).reshape(2 * out.shape[0], -1)
    return out


def layer_factors(inst: ProblemInstance, kind: LayerKind | str, ry_perturbation: float = 0.0):
    """Per-qubit 2x2 factors ordered ``q_{n-1}, ..., q_0``.

    ``ry_perturbation`` shifts every Ry(pi/2) angle; it exists only so the
    verification suite can run a negative control.
    """
    kind = LayerKind(kind)
    factors = []
    for q in reversed(range(inst.n)):
        one = inst.bit(q)
        if kind is LayerKind.HX:
            factors.append(xh() if one else hadamard())
        else:
            factors.append(ry(math.pi / 2 + ry_perturbation) if one else ry(3 * math.pi / 2))
    return factors


def layer_matrix(inst: ProblemInstance, kind: LayerKind | str, ry_perturbation: float = 0.0) -> LayerMatrix:
    if inst.n > MAX_MATRIX_QUBITS:
        raise ShapeError(f"explicit layer matrices are capped at n={MAX_MATRIX_QUBITS}")
    # scale each factor by sqrt(2) rather than the 2^n x 2^n product
    factors = [f * math.sqrt(2.0) for f in layer_factors(inst, kind, ry_perturbation)]
    return LayerMatrix(inst.n, kron_chain(factors))


def full_layer_matrix(inst: ProblemInstance, kind: LayerKind | str) -> np.ndarray:
    """Unscaled ``2N x 2N`` layer matrix including the label-qubit factor."""
    label = pauli_x() if LayerKind(kind) is LayerKind.HX else ry(math.pi)
    return np.kron(label, kron_chain(layer_factors(inst, kind)))


def locate_signed_unit_row(m: LayerMatrix, tol: float = UNIT_TOL) -> tuple[int, int]:
    """Return ``(row, sign)`` of the single row whose entries are all +1 or all -1."""
    e = m.entries
    mag = np.abs(e)
    if mag.max() > 1.0 + tol or mag.min() < 1.0 - tol:
        raise StructureError("layer matrix entries are not all +-1")
    rows = np.flatnonzero(e.max(axis=1) - e.min(axis=1) <= tol)
    if rows.size != 1:
        raise StructureError(f"expected exactly one uniform row, found {rows.size}")
    row = int(rows[0])
    return row, 1 if e[row, 0] > 0 else -1


def zero_bit_count(inst: ProblemInstance) -> int:
    return inst.bits.count("0")


def expected_sign(inst: ProblemInstance, kind: LayerKind | str) -> int:
    if LayerKind(kind) is LayerKind.HX:
        return 1
    # one Ry(3pi/2) per zero bit, each contributing a -1 to row k
    return -1 if zero_bit_count(inst) % 2 else 1


def predicted_good_amplitude(inst: ProblemInstance, sign: int) -> float:
    return sign * (1.0 - 1.0 / inst.N)


def good_probability_table(n_max: int) -> np.ndarray:
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    n = np.arange(1, n_max + 1)
    return (1.0 - 0.5 ** n) ** 2
