"""Quantum-block tiling of a quantized coefficient plane and sign/magnitude encoding."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

DEFAULT_Q = 8
DEFAULT_BLOCK = 16


def _is_pow2(v: int) -> bool:
    return v >= 1 and v & (v - 1) == 0


def log2_exact(v: int) -> int:
    if not _is_pow2(v):
        raise ValueError(f"{v} is not a power of two")
    return v.bit_length() - 1


@dataclass(frozen=True)
class RegisterLayout:
    """Qubit register for one block circuit.

    Qubit ``k`` is bit ``k`` of a statevector index. Value qubits come
    first (LSB first), then Y position bits, then X position bits, then
    the auxiliary qubit.
    """

    q: int = DEFAULT_Q
    n_pos_x: int = 4
    n_pos_y: int = 4
    aux: int = 1

    def __post_init__(self):
        if self.q < 1:
            raise ValueError("need at least one value qubit")
        if self.n_pos_x < 0 or self.n_pos_y < 0:
            raise ValueError("position qubit counts must be non-negative")
        if self.aux != 1:
            raise ValueError("exactly one auxiliary qubit is supported")

    @classmethod
    def for_block(cls, s_x: int, s_y: int, q: int = DEFAULT_Q) -> "RegisterLayout":
        return cls(q=q, n_pos_x=log2_exact(s_x), n_pos_y=log2_exact(s_y))

    @property
    def s_x(self) -> int:
        return 1 << self.n_pos_x

    @property
    def s_y(self) -> int:
        return 1 << self.n_pos_y

    @property
    def total(self) -> int:
        return self.q + self.n_pos_x + self.n_pos_y + self.aux

    @property
    def value_qubits(self) -> range:
        return range(self.q)

    @property
    def y_qubits(self) -> range:
        return range(self.q, self.q + self.n_pos_y)

    @property
    def x_qubits(self) -> range:
        start = self.q + self.n_pos_y
        return range(start, start + self.n_pos_x)

    @property
    def position_qubits(self) -> range:
        return range(self.q, self.q + self.n_pos_y + self.n_pos_x)

    @property
    def aux_qubit(self) -> int:
        return self.total - 1

    def basis_index(self, magnitude: int, y: int, x: int, aux: int = 0) -> int:
        return (
            magnitude
            | (y << self.q)
            | (x << (self.q + self.n_pos_y))
            | (aux << self.aux_qubit)
        )


def encode_value(v: int, q: int = DEFAULT_Q) -> tuple[bool, tuple[bool, ...], bool]:
    """Split a non-zero coefficient into (negative, LSB-first magnitude bits, clamped)."""
    v = int(v)
    if v == 0:
        raise ValueError("zero coefficients are never encoded")
    if q < 1:
        raise ValueError("q must be >= 1")
    limit = (1 << q) - 1
    mag = min(abs(v), limit)
    bits = tuple(bool((mag >> k) & 1) for k in range(q))
    return v < 0, bits, abs(v) > limit


def decode_value(negative: bool, bits) -> int:
    mag = sum(1 << k for k, b in enumerate(bits) if b)
    return -mag if negative else mag


@dataclass(frozen=True)
class NonzeroCoeff:
    value: int
    x: int
    y: int
    magnitude_bits: tuple[bool, ...]
    sign: bool
    clamped: bool = False

    @classmethod
    def from_value(cls, value: int, x: int, y: int, q: int = DEFAULT_Q) -> "NonzeroCoeff":
        sign, bits, clamped = encode_value(value, q)
        return cls(int(value), int(x), int(y), bits, sign, clamped)

    @property
    def magnitude(self) -> int:
        return sum(1 << k for k, b in enumerate(self.magnitude_bits) if b)


def popcount_ones(nz: NonzeroCoeff) -> int:
    return sum(nz.magnitude_bits)


@dataclass(frozen=True, eq=False)
class QuantumBlock:
    block_x: int
    block_y: int
    coeffs: np.ndarray
    q: int = DEFAULT_Q
    nonzeros: tuple[NonzeroCoeff, ...] = field(default=None)

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=np.int64)
        if c.ndim != 2:
            raise ValueError("block coefficients must be 2-D")
        log2_exact(c.shape[0])
        log2_exact(c.shape[1])
        c = c.copy()
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        if self.nonzeros is None:
            ys, xs = np.nonzero(c)  # row-major: y first, then x
            nz = tuple(
                NonzeroCoeff.from_value(int(c[y, x]), int(x), int(y), self.q)
                for y, x in zip(ys, xs)
            )
            object.__setattr__(self, "nonzeros", nz)
        else:
            object.__setattr__(self, "nonzeros", tuple(self.nonzeros))
            for nz in self.nonzeros:
                if not (0 <= nz.x < self.s_x and 0 <= nz.y < self.s_y):
                    raise ValueError(f"coefficient position ({nz.x}, {nz.y}) outside block")

    @classmethod
    def from_nonzeros(cls, entries, s_x=DEFAULT_BLOCK, s_y=DEFAULT_BLOCK, q=DEFAULT_Q,
                      block_x=0, block_y=0) -> "QuantumBlock":
        """Build from ``(x, y, value)`` triples."""
        c = np.zeros((s_y, s_x), dtype=np.int64)
        for x, y, v in entries:
            if not (0 <= x < s_x and 0 <= y < s_y):
                raise ValueError(f"coefficient position ({x}, {y}) outside block")
            c[y, x] = v
        return cls(block_x, block_y, c, q)

    @property
    def s_x(self) -> int:
        return self.coeffs.shape[1]

    @property
    def s_y(self) -> int:
        return self.coeffs.shape[0]

    @property
    def n_tcn(self) -> int:
        return len(self.nonzeros)

    @property
    def clamped_count(self) -> int:
        return sum(nz.clamped for nz in self.nonzeros)

    @property
    def layout(self) -> RegisterLayout:
        return RegisterLayout.for_block(self.s_x, self.s_y, self.q)

    def magnitudes(self) -> np.ndarray:
        """Encoded (clamped) magnitudes on the block grid."""
        return np.minimum(np.abs(self.coeffs), (1 << self.q) - 1)

    def __repr__(self):
        return (f"QuantumBlock(({self.block_x}, {self.block_y}), {self.s_x}x{self.s_y}, "
                f"n_tcn={self.n_tcn})")


def tile_quantum_blocks(plane, block: int = DEFAULT_BLOCK, q: int = DEFAULT_Q) -> list[QuantumBlock]:
    """Cut a quantized coefficient plane into ``block``-square tiles, row-major."""
    plane = np.asarray(plane)
    if plane.ndim != 2:
        raise ValueError("plane must be 2-D")
    log2_exact(block)
    h, w = plane.shape
    if h % block or w % block:
        raise ValueError(f"plane {w}x{h} is not a multiple of the {block}-pixel block")
    return [
        QuantumBlock(bx, by, plane[by * block:(by + 1) * block, bx * block:(bx + 1) * block], q)
        for by in range(h // block)
        for bx in range(w // block)
    ]


def untile(blocks: list[QuantumBlock], blocks_x: int, blocks_y: int) -> np.ndarray:
    s_y, s_x = blocks[0].coeffs.shape
    out = np.zeros((blocks_y * s_y, blocks_x * s_x), dtype=np.int64)
    for b in blocks:
        out[b.block_y * s_y:(b.block_y + 1) * s_y, b.block_x * s_x:(b.block_x + 1) * s_x] = b.coeffs
    return out
