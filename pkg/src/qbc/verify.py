"""Check block preparation circuits against the target superposition."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blocks import QuantumBlock
from .sim import (build_efrqi_circuit, build_scmneqr_circuit, decode_block, expected_state,
                  fidelity, simulate)
from .sim.simulator import MAX_QUBITS, QubitBudgetError

VERIFY_COLUMNS = ("block_x", "block_y", "n_tcn", "efrqi_fidelity", "scmneqr_channel_fidelity",
                  "scmneqr_idealized_decode_exact", "unrecoverable_positions")


@dataclass(frozen=True)
class BlockVerification:
    block_x: int
    block_y: int
    n_tcn: int
    efrqi_fidelity: float
    scmneqr_channel_fidelity: float
    scmneqr_idealized_decode_exact: bool
    unrecoverable_positions: int  # positions missing from the worst reset branch

    def csv_row(self) -> list[str]:
        return [str(self.block_x), str(self.block_y), str(self.n_tcn),
                f"{self.efrqi_fidelity:.12f}", f"{self.scmneqr_channel_fidelity:.12f}",
                str(self.scmneqr_idealized_decode_exact).lower(),
                str(self.unrecoverable_positions)]


def verify_block(block: QuantumBlock) -> BlockVerification:
    layout = block.layout
    if layout.total > MAX_QUBITS:
        raise QubitBudgetError(f"block needs {layout.total} qubits, budget is {MAX_QUBITS}")
    target = expected_state(block, layout)
    efrqi = simulate(build_efrqi_circuit(block, layout), "unitary")
    scm = simulate(build_scmneqr_circuit(block, layout), "channel")
    decoded = decode_block(scm, layout)
    return BlockVerification(
        block.block_x, block.block_y, block.n_tcn,
        fidelity(target, efrqi),
        fidelity(target, scm),
        bool(np.array_equal(decoded.magnitudes, np.abs(block.coeffs))),
        decoded.worst_branch_missing,
    )
