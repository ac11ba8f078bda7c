"""Block preparation circuits and their simulation."""
from .circuit import (Circuit, Gate, GateKind, ON_ONE, ON_ZERO, build_efrqi_circuit,
                      build_scmneqr_circuit)
from .kernels import BACKEND as KERNEL_BACKEND
from .simulator import (AmbiguousReadoutError, Branch, DecodeResult, MAX_QUBITS,
                        NonUnitaryCircuitError, QuantumState, QubitBudgetError, decode_block,
                        expected_state, fidelity, simulate)

__all__ = [
    "AmbiguousReadoutError", "Branch", "Circuit", "DecodeResult", "Gate", "GateKind",
    "KERNEL_BACKEND", "MAX_QUBITS", "NonUnitaryCircuitError", "ON_ONE", "ON_ZERO",
    "QuantumState", "QubitBudgetError", "build_efrqi_circuit", "build_scmneqr_circuit",
    "decode_block", "expected_state", "fidelity", "simulate",
]
