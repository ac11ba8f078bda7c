"""Gate lists for SCMNEQR and EFRQI block state preparation."""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass

from ..blocks import QuantumBlock, RegisterLayout

DUMP_VERSION = 1


class GateKind(enum.Enum):
    PauliX = "X"
    Hadamard = "H"
    ControlledX = "CX"
    MultiControlledX = "MCX"
    Reset = "RESET"


ON_ONE = True
ON_ZERO = False


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    target: int
    controls: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "controls", tuple((int(c), bool(p)) for c, p in self.controls))
        qubits = [c for c, _ in self.controls]
        if self.target in qubits:
            raise ValueError(f"target {self.target} is also a control")
        if len(set(qubits)) != len(qubits):
            raise ValueError("duplicate control qubit")
        n = len(self.controls)
        if self.kind in (GateKind.PauliX, GateKind.Hadamard, GateKind.Reset) and n:
            raise ValueError(f"{self.kind.name} takes no controls")
        if self.kind is GateKind.ControlledX and n != 1:
            raise ValueError("ControlledX takes exactly one control")

    @property
    def is_toffoli(self) -> bool:
        return self.kind is GateKind.MultiControlledX and len(self.controls) == 2

    def qubits(self):
        return (self.target, *(c for c, _ in self.controls))

    def control_mask(self) -> tuple[int, int]:
        """(mask, value) pair selecting the basis states the controls accept."""
        mask = value = 0
        for c, on_one in self.controls:
            mask |= 1 << c
            if on_one:
                value |= 1 << c
        return mask, value

    def to_line(self) -> str:
        ctrl = " ".join(f"{c}:{int(p)}" for c, p in self.controls)
        return f"{self.kind.value} {self.target}" + (f" {ctrl}" if ctrl else "")

    @classmethod
    def from_line(cls, line: str) -> "Gate":
        kind, target, *ctrl = line.split()
        controls = []
        for tok in ctrl:
            c, p = tok.split(":")
            if p not in ("0", "1"):
                raise ValueError(f"bad control polarity in {tok!r}")
            controls.append((int(c), p == "1"))
        return cls(GateKind(kind), int(target), tuple(controls))


@dataclass(frozen=True)
class Circuit:
    layout: RegisterLayout
    gates: tuple[Gate, ...]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        n = self.layout.total
        for g in self.gates:
            if any(qb < 0 or qb >= n for qb in g.qubits()):
                raise ValueError(f"gate {g.to_line()!r} addresses a qubit outside 0..{n - 1}")

    @property
    def num_qubits(self) -> int:
        return self.layout.total

    @property
    def is_unitary(self) -> bool:
        return all(g.kind is not GateKind.Reset for g in self.gates)

    def counts(self) -> Counter:
        return Counter(g.kind for g in self.gates)

    def __len__(self):
        return len(self.gates)

    def dump(self) -> str:
        lay = self.layout
        head = (f"# qbc-circuit v{DUMP_VERSION} qubits={lay.total} q={lay.q} "
                f"ny={lay.n_pos_y} nx={lay.n_pos_x}\n")
        return head + "".join(g.to_line() + "\n" for g in self.gates)

    @classmethod
    def parse(cls, text: str) -> "Circuit":
        lines = text.splitlines()
        if not lines or not lines[0].startswith("# qbc-circuit v"):
            raise ValueError("missing qbc-circuit header line")
        head = lines[0].split()
        if head[2] != f"v{DUMP_VERSION}":
            raise ValueError(f"unsupported circuit dump version {head[2]}")
        meta = dict(tok.split("=") for tok in head[3:])
        layout = RegisterLayout(q=int(meta["q"]), n_pos_x=int(meta["nx"]), n_pos_y=int(meta["ny"]))
        if layout.total != int(meta["qubits"]):
            raise ValueError("header qubit count disagrees with register sizes")
        gates = [Gate.from_line(ln) for ln in lines[1:] if ln.strip() and not ln.startswith("#")]
        return cls(layout, gates)


def _check_layout(block: QuantumBlock, layout: RegisterLayout | None) -> RegisterLayout:
    if layout is None:
        return block.layout
    if (layout.s_x, layout.s_y, layout.q) != (block.s_x, block.s_y, block.q):
        raise ValueError(f"layout {layout} does not fit block {block!r}")
    return layout


def _position_controls(layout: RegisterLayout, y: int, x: int):
    if not (0 <= x < layout.s_x and 0 <= y < layout.s_y):
        raise ValueError(f"coefficient position ({x}, {y}) outside block")
    ctrl = [(qb, bool((y >> k) & 1)) for k, qb in enumerate(layout.y_qubits)]
    ctrl += [(qb, bool((x >> k) & 1)) for k, qb in enumerate(layout.x_qubits)]
    return tuple(ctrl)


def _build(block: QuantumBlock, layout: RegisterLayout | None, uncompute: bool) -> Circuit:
    layout = _check_layout(block, layout)
    aux = layout.aux_qubit
    gates = [Gate(GateKind.Hadamard, qb) for qb in layout.position_qubits]
    for nz in block.nonzeros:
        connect = Gate(GateKind.MultiControlledX, aux, _position_controls(layout, nz.y, nz.x))
        gates.append(connect)
        gates.extend(
            Gate(GateKind.ControlledX, qb, ((aux, ON_ONE),))
            for qb, bit in zip(layout.value_qubits, nz.magnitude_bits) if bit
        )
        gates.append(connect if uncompute else Gate(GateKind.Reset, aux))
    return Circuit(layout, gates)


def build_scmneqr_circuit(block: QuantumBlock, layout: RegisterLayout | None = None) -> Circuit:
    """Hadamards on the position register, then per non-zero coefficient:
    position-selected Toffoli onto the auxiliary, CX onto each set value bit,
    and a reset of the auxiliary."""
    return _build(block, layout, uncompute=False)


def build_efrqi_circuit(block: QuantumBlock, layout: RegisterLayout | None = None) -> Circuit:
    """As :func:`build_scmneqr_circuit`, but the auxiliary is uncomputed by
    repeating the connecting Toffoli instead of being reset."""
    return _build(block, layout, uncompute=True)
