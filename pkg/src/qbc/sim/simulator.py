"""Statevector and reset-channel simulation of block preparation circuits.

Reset-free circuits run on a dense statevector through the kernels in
:mod:`qbc.sim.kernels`. Circuits with resets run on a sparse mixture: every
reset is the measure-and-reinitialize channel, enumerated exactly as one
branch per measurement outcome with non-zero probability.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..blocks import QuantumBlock, RegisterLayout
from . import kernels
from .circuit import Circuit, GateKind

MAX_QUBITS = 22
# amplitudes below this magnitude count as absent when reading out a state
READOUT_EPS = 1e-12

_S = 1.0 / np.sqrt(2.0)


class QubitBudgetError(ValueError):
    pass


class NonUnitaryCircuitError(ValueError):
    pass


class AmbiguousReadoutError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Branch:
    weight: float
    indices: np.ndarray  # sorted basis indices with non-zero amplitude
    amps: np.ndarray  # normalized


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Pure state (one branch, weight 1) or a finite mixture of pure branches."""

    num_qubits: int
    branches: tuple[Branch, ...]

    @property
    def dim(self) -> int:
        return 1 << self.num_qubits

    @property
    def is_pure(self) -> bool:
        return len(self.branches) == 1

    @property
    def weights(self) -> np.ndarray:
        return np.array([b.weight for b in self.branches])

    def dense(self, branch: int = 0) -> np.ndarray:
        b = self.branches[branch]
        out = np.zeros(self.dim, dtype=np.complex128)
        out[b.indices] = b.amps
        return out

    @property
    def amplitudes(self) -> np.ndarray:
        if not self.is_pure:
            raise ValueError("mixed state has no single amplitude vector")
        return self.dense(0)

    @classmethod
    def from_dense(cls, amps) -> "QuantumState":
        amps = np.asarray(amps, dtype=np.complex128)
        n = amps.shape[0].bit_length() - 1
        if amps.ndim != 1 or 1 << n != amps.shape[0]:
            raise ValueError("amplitude vector length must be a power of two")
        idx = np.flatnonzero(amps)
        return cls(n, (Branch(1.0, idx, amps[idx].copy()),))

    @classmethod
    def from_sparse(cls, num_qubits: int, indices, amps) -> "QuantumState":
        indices = np.asarray(indices, dtype=np.int64)
        order = np.argsort(indices, kind="stable")
        return cls(num_qubits, (Branch(1.0, indices[order], np.asarray(amps, np.complex128)[order]),))

    def check(self, tol: float = 1e-10) -> None:
        """Raise if branch norms or weights are off by more than ``tol``."""
        w = self.weights
        if np.any(w <= 0) or abs(w.sum() - 1.0) > tol:
            raise ValueError(f"mixture weights invalid: sum={w.sum()!r}")
        for b in self.branches:
            norm = float(np.vdot(b.amps, b.amps).real)
            if abs(norm - 1.0) > tol:
                raise ValueError(f"branch norm {norm!r} != 1")


# ---------------------------------------------------------------- target state

def expected_state(block: QuantumBlock, layout: RegisterLayout | None = None) -> QuantumState:
    """Equal superposition over positions, each carrying its (clamped) magnitude."""
    if layout is None:
        layout = block.layout
    elif (layout.s_x, layout.s_y, layout.q) != (block.s_x, block.s_y, block.q):
        raise ValueError(f"layout {layout} does not fit block {block!r}")
    ys, xs = np.mgrid[0:block.s_y, 0:block.s_x]
    mags = block.magnitudes().astype(np.int64)
    idx = mags | (ys << layout.q) | (xs << (layout.q + layout.n_pos_y))
    amp = 1.0 / np.sqrt(block.s_x * block.s_y)
    return QuantumState.from_sparse(layout.total, idx.ravel(), np.full(idx.size, amp))


# ---------------------------------------------------------------- simulation

def _check_budget(circuit: Circuit) -> None:
    if circuit.num_qubits > MAX_QUBITS:
        raise QubitBudgetError(
            f"{circuit.num_qubits} qubits exceeds the simulation budget of {MAX_QUBITS}"
        )


def _run_dense(circuit: Circuit) -> np.ndarray:
    state = np.zeros(1 << circuit.num_qubits, dtype=np.complex128)
    state[0] = 1.0
    for g in circuit.gates:
        if g.kind is GateKind.Hadamard:
            kernels.apply_h(state, g.target)
        else:  # X, CX, MCX
            mask, value = g.control_mask()
            kernels.apply_mcx(state, g.target, mask, value)
    return state


class _Mixture:
    """Unnormalized sparse branches: entry k has amplitude ``amp[k]`` on basis
    state ``index[k]`` of branch ``branch[k]``."""

    def __init__(self):
        self.branch = np.zeros(1, dtype=np.int64)
        self.index = np.zeros(1, dtype=np.int64)
        self.amp = np.ones(1, dtype=np.complex128)
        self.n_branches = 1
        self.resets = 0

    def flip(self, target: int, mask: int, value: int) -> None:
        hit = (self.index & mask) == value
        self.index[hit] ^= 1 << target

    def hadamard(self, target: int, n_qubits: int) -> None:
        t = 1 << target
        set_ = (self.index & t) != 0
        low = self.index & ~t
        # every entry feeds both outputs; |1> contributes with a minus sign to the |1> output
        idx = np.concatenate([low, low | t])
        br = np.concatenate([self.branch, self.branch])
        amp = np.concatenate([self.amp, np.where(set_, -self.amp, self.amp)])
        self._merge(br, idx, amp, n_qubits, scale=_S)

    def _merge(self, br, idx, amp, n_qubits, scale):
        key = (br << n_qubits) | idx
        uniq, inv = np.unique(key, return_inverse=True)
        acc = np.zeros(uniq.shape[0], dtype=np.complex128)
        np.add.at(acc, inv, amp)
        acc *= scale
        keep = acc != 0
        uniq = uniq[keep]
        self.amp = acc[keep]
        self.branch = uniq >> n_qubits
        self.index = uniq & ((1 << n_qubits) - 1)

    def reset(self, target: int) -> None:
        t = 1 << target
        outcome = (self.index & t) != 0
        self.index = self.index & ~t
        label = self.branch * 2 + outcome
        uniq, inv = np.unique(label, return_inverse=True)
        self.branch = inv.astype(np.int64)
        self.n_branches = uniq.shape[0]
        self.resets += 1

    def to_state(self, n_qubits: int) -> QuantumState:
        if not self.resets:
            # unitary evolution: keep amplitudes exactly as computed
            order = np.argsort(self.index, kind="stable")
            return QuantumState(n_qubits, (Branch(1.0, self.index[order], self.amp[order]),))
        order = np.lexsort((self.index, self.branch))
        br, idx, amp = self.branch[order], self.index[order], self.amp[order]
        bounds = np.flatnonzero(np.diff(br)) + 1
        branches = []
        weights = []
        for sl_idx, sl_amp in zip(np.split(idx, bounds), np.split(amp, bounds)):
            w = float(np.vdot(sl_amp, sl_amp).real)
            if w == 0.0:
                continue
            weights.append(w)
            branches.append((sl_idx, sl_amp / np.sqrt(w)))
        total = sum(weights)
        return QuantumState(n_qubits, tuple(
            Branch(w / total, i, a) for w, (i, a) in zip(weights, branches)
        ))


def _run_channel(circuit: Circuit) -> QuantumState:
    n = circuit.num_qubits
    mix = _Mixture()
    for g in circuit.gates:
        if g.kind is GateKind.Hadamard:
            mix.hadamard(g.target, n)
        elif g.kind is GateKind.Reset:
            mix.reset(g.target)
        else:
            mask, value = g.control_mask()
            mix.flip(g.target, mask, value)
    return mix.to_state(n)


def simulate(circuit: Circuit, mode: str = "unitary") -> QuantumState:
    """Run ``circuit`` from |0...0>.

    ``mode="unitary"`` needs a reset-free circuit and returns a pure state.
    ``mode="channel"`` accepts resets and returns the exact branch mixture.
    """
    _check_budget(circuit)
    if mode == "unitary":
        if not circuit.is_unitary:
            raise NonUnitaryCircuitError("circuit contains Reset; use mode='channel'")
        return QuantumState.from_dense(_run_dense(circuit))
    if mode == "channel":
        return _run_channel(circuit)
    raise ValueError(f"unknown simulation mode {mode!r}")


# ---------------------------------------------------------------- comparison

def _overlap(ia, aa, ib, ab) -> complex:
    common, pa, pb = np.intersect1d(ia, ib, assume_unique=True, return_indices=True)
    if common.size == 0:
        return 0.0
    return complex(np.vdot(aa[pa], ab[pb]))


def fidelity(a: QuantumState, b: QuantumState) -> float:
    """|<a|b>|^2 for pure states; the weighted sum over ``b``'s branches otherwise."""
    if a.num_qubits != b.num_qubits:
        raise ValueError(f"dimension mismatch: {a.num_qubits} vs {b.num_qubits} qubits")
    if not a.is_pure:
        if b.is_pure:
            a, b = b, a
        else:
            raise ValueError("at least one argument must be a pure state")
    pa = a.branches[0]
    f = sum(br.weight * abs(_overlap(pa.indices, pa.amps, br.indices, br.amps)) ** 2
            for br in b.branches)
    return float(min(max(f, 0.0), 1.0))


@dataclass(frozen=True, eq=False)
class DecodeResult:
    """Basis readout of a prepared block.

    ``magnitudes`` merges every branch; entries no branch covers are -1.
    ``branch_missing[k]`` counts positions absent from branch ``k`` alone.
    """

    magnitudes: np.ndarray
    unrecoverable: int
    branch_missing: tuple[int, ...]

    @property
    def worst_branch_missing(self) -> int:
        return max(self.branch_missing, default=0)


def decode_block(state: QuantumState, layout: RegisterLayout) -> DecodeResult:
    if state.num_qubits != layout.total:
        raise ValueError("state does not match register layout")
    s_x, s_y, q = layout.s_x, layout.s_y, layout.q
    out = np.full(s_y * s_x, -1, dtype=np.int64)
    missing = []
    for br in state.branches:
        live = np.abs(br.amps) > READOUT_EPS
        idx = br.indices[live]
        val = idx & ((1 << q) - 1)
        y = (idx >> q) & (s_y - 1)
        x = (idx >> (q + layout.n_pos_y)) & (s_x - 1)
        pos = y * s_x + x
        order = np.argsort(pos, kind="stable")
        pos, val = pos[order], val[order]
        dup = np.flatnonzero(pos[1:] == pos[:-1])
        if np.any(val[dup] != val[dup + 1]):
            p = int(pos[dup[val[dup] != val[dup + 1]][0]])
            raise AmbiguousReadoutError(f"two value patterns at position (x={p % s_x}, y={p // s_x})")
        upos, first = np.unique(pos, return_index=True)
        uval = val[first]
        prev = out[upos]
        clash = (prev >= 0) & (prev != uval)
        if np.any(clash):
            p = int(upos[clash][0])
            raise AmbiguousReadoutError(
                f"branches disagree at position (x={p % s_x}, y={p // s_x})"
            )
        out[upos] = uval
        missing.append(s_x * s_y - upos.size)
    mags = out.reshape(s_y, s_x)
    return DecodeResult(mags, int(np.count_nonzero(mags < 0)), tuple(missing))
