"""Statevector simulation and variational training for single-item unstructured search."""
from .circuits import (
    Circuit,
    Layer,
    ProblemInstance,
    build_hx_layer,
    build_oracle,
    build_ry_ansatz,
    build_ry_layer,
    build_superposition,
    constructed_angles,
    prepare_psi1,
    run_pipeline,
)
from .errors import CapacityError, ShapeError, StructureError
from .optimizer import OptimizerConfig, RunRecord, gradient, objective, optimize, run_batch
from .reachability import Definition, constructed_reachability, empirical_reachability
from .statevector import Gate, StateVector, init_zero_state, probabilities

__all__ = [
    "CapacityError",
    "Circuit",
    "Definition",
    "Gate",
    "Layer",
    "OptimizerConfig",
    "ProblemInstance",
    "RunRecord",
    "ShapeError",
    "StateVector",
    "StructureError",
    "build_hx_layer",
    "build_oracle",
    "build_ry_ansatz",
    "build_ry_layer",
    "build_superposition",
    "constructed_angles",
    "constructed_reachability",
    "empirical_reachability",
    "gradient",
    "init_zero_state",
    "objective",
    "optimize",
    "prepare_psi1",
    "probabilities",
    "run_batch",
    "run_pipeline",
]
