"""Preparation-cost ("bit rate") accounting for SCMNEQR and the EFRQI baseline.

Every tally is an exact integer. A block's bit rate is

    br = q_ones + s_state + s_bit + a_bit + b_e

where ``s_state`` is the per-coefficient state-connection cost times the
number of non-zero coefficients.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, astuple, dataclass, fields

import numpy as np

from .blocks import QuantumBlock, RegisterLayout, log2_exact

B_E_MODES = ("per-block-address", "fixed", "per-coefficient")


@dataclass(frozen=True)
class CostModel:
    """Per-coefficient connection cost: ``toffoli_passes`` Toffoli connections
    over the position qubits plus the auxiliary target, plus one bit if the
    auxiliary is cleared by a reset gate."""

    name: str
    toffoli_passes: int
    reset: bool

    def connection_bits(self, s_x: int, s_y: int) -> int:
        per_toffoli = log2_exact(s_x) + log2_exact(s_y) + 1
        return self.toffoli_passes * per_toffoli + int(self.reset)


SCMNEQR = CostModel("SCMNEQR", toffoli_passes=1, reset=True)
EFRQI = CostModel("EFRQI", toffoli_passes=2, reset=False)
SCHEMES = {m.name: m for m in (SCMNEQR, EFRQI)}


def get_scheme(scheme) -> CostModel:
    if isinstance(scheme, CostModel):
        return scheme
    try:
        return SCHEMES[str(scheme).upper()]
    except KeyError:
        raise ValueError(f"unknown scheme {scheme!r}; known: {', '.join(SCHEMES)}") from None


def s_state_scmneqr(block: QuantumBlock) -> int:
    return SCMNEQR.connection_bits(block.s_x, block.s_y) * block.n_tcn


def s_state_efrqi(block: QuantumBlock) -> int:
    return EFRQI.connection_bits(block.s_x, block.s_y) * block.n_tcn


def address_bits(blocks_x: int, blocks_y: int) -> int:
    if blocks_x < 1 or blocks_y < 1:
        raise ValueError("block grid dimensions must be >= 1")
    return math.ceil(math.log2(blocks_x)) + math.ceil(math.log2(blocks_y))


def block_position_bits(block: QuantumBlock, blocks_x: int, blocks_y: int) -> int:
    """Address overhead of a non-empty block on a ``blocks_x`` x ``blocks_y`` grid."""
    bits = address_bits(blocks_x, blocks_y)
    return bits if block.n_tcn > 0 else 0


@dataclass(frozen=True)
class BitRateReport:
    q_ones: int
    s_state: int
    s_bit: int
    a_bit: int
    b_e: int
    br: int
    n_tcn: int
    clamped_count: int
    scheme: str
    source: str = ""

    def __post_init__(self):
        for f in ("q_ones", "s_state", "s_bit", "a_bit", "b_e", "br", "n_tcn", "clamped_count"):
            v = getattr(self, f)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"{f} must be a non-negative integer, got {v!r}")
            object.__setattr__(self, f, int(v))
        if self.br != self.q_ones + self.s_state + self.s_bit + self.a_bit + self.b_e:
            raise ValueError("br does not equal the sum of its terms")

    @classmethod
    def from_terms(cls, *, q_ones, s_state, s_bit, a_bit, b_e, n_tcn, clamped_count,
                   scheme, source="") -> "BitRateReport":
        return cls(q_ones, s_state, s_bit, a_bit, b_e,
                   int(q_ones) + int(s_state) + int(s_bit) + int(a_bit) + int(b_e),
                   n_tcn, clamped_count, scheme, source)

    def __add__(self, other: "BitRateReport") -> "BitRateReport":
        if self.scheme != other.scheme:
            raise ValueError("cannot add reports of different schemes")
        return BitRateReport.from_terms(
            q_ones=self.q_ones + other.q_ones, s_state=self.s_state + other.s_state,
            s_bit=self.s_bit + other.s_bit, a_bit=self.a_bit + other.a_bit,
            b_e=self.b_e + other.b_e, n_tcn=self.n_tcn + other.n_tcn,
            clamped_count=self.clamped_count + other.clamped_count,
            scheme=self.scheme, source=self.source or other.source,
        )

    def to_record(self) -> str:
        """Flat ``key=value`` text, one field per line."""
        return "".join(f"{k}={v}\n" for k, v in asdict(self).items())

    def csv_header(self) -> str:
        return ",".join(f.name for f in fields(self))

    def to_csv_row(self) -> str:
        """One RFC-4180 row in :meth:`csv_header` order."""
        buf = io.StringIO()
        csv.writer(buf, lineterminator="").writerow(astuple(self))
        return buf.getvalue()

    @classmethod
    def from_record(cls, text: str) -> "BitRateReport":
        kv = dict(line.split("=", 1) for line in text.splitlines() if line)
        types = {f.name: f.type for f in fields(cls)}
        args = {k: (v if types[k] == "str" else int(v)) for k, v in kv.items()}
        return cls(**args)


TERMS = ("q_ones", "s_state", "s_bit", "a_bit", "b_e", "br", "n_tcn", "clamped_count")


def _b_e(n_tcn: int, addr: int, mode: str, first_nonempty: bool) -> int:
    if n_tcn == 0:
        return 0
    if mode == "per-block-address":
        return addr
    if mode == "per-coefficient":
        return addr * n_tcn
    if mode == "fixed":
        return addr if first_nonempty else 0
    raise ValueError(f"unknown b_e mode {mode!r}; known: {', '.join(B_E_MODES)}")


def block_report(block: QuantumBlock, scheme, blocks_x: int, blocks_y: int,
                 b_e_mode: str = "per-block-address", first_nonempty: bool = True,
                 source: str = "") -> BitRateReport:
    model = get_scheme(scheme)
    n = block.n_tcn
    return BitRateReport.from_terms(
        q_ones=sum(sum(nz.magnitude_bits) for nz in block.nonzeros),
        s_state=model.connection_bits(block.s_x, block.s_y) * n,
        s_bit=n,
        a_bit=n,
        b_e=_b_e(n, address_bits(blocks_x, blocks_y), b_e_mode, first_nonempty),
        n_tcn=n,
        clamped_count=block.clamped_count,
        scheme=model.name,
        source=source,
    )


def bit_rate(blocks, scheme, layout: RegisterLayout | None = None, grid=None,
             b_e_mode: str = "per-block-address", source: str = "") -> BitRateReport:
    """Aggregate report over a list of quantum blocks.

    ``grid`` is ``(blocks_x, blocks_y)``; inferred from block indices when omitted.
    """
    blocks = list(blocks)
    model = get_scheme(scheme)
    if grid is None:
        grid = (max((b.block_x for b in blocks), default=0) + 1,
                max((b.block_y for b in blocks), default=0) + 1)
    bx, by = grid
    total = BitRateReport.from_terms(q_ones=0, s_state=0, s_bit=0, a_bit=0, b_e=0, n_tcn=0,
                                     clamped_count=0, scheme=model.name, source=source)
    seen_nonempty = False
    for b in blocks:
        if layout is not None and (b.s_x, b.s_y, b.q) != (layout.s_x, layout.s_y, layout.q):
            raise ValueError(f"block {b!r} does not match register layout {layout}")
        total = total + block_report(b, model, bx, by, b_e_mode,
                                     first_nonempty=not seen_nonempty, source=source)
        seen_nonempty |= b.n_tcn > 0
    return total


def plane_bit_rate(plane, scheme, block: int = 16, q: int = 8,
                   b_e_mode: str = "per-block-address", source: str = "") -> BitRateReport:
    """Vectorized equivalent of ``bit_rate(tile_quantum_blocks(plane, block, q), ...)``."""
    model = get_scheme(scheme)
    plane = np.asarray(plane, dtype=np.int64)
    h, w = plane.shape
    if h % block or w % block:
        raise ValueError(f"plane {w}x{h} is not a multiple of the {block}-pixel block")
    by, bx = h // block, w // block
    mag = np.abs(plane)
    nz = mag != 0
    limit = (1 << q) - 1
    clamped = int(np.count_nonzero(mag > limit))
    mag = np.minimum(mag, limit)
    ones = 0
    for k in range(q):
        ones += int(np.count_nonzero((mag >> k) & 1))
    per_block = nz.reshape(by, block, bx, block).sum(axis=(1, 3)).ravel()
    n_tcn = int(per_block.sum())
    addr = address_bits(bx, by)
    nonempty = int(np.count_nonzero(per_block))
    if b_e_mode == "per-block-address":
        b_e = addr * nonempty
    elif b_e_mode == "per-coefficient":
        b_e = addr * n_tcn
    elif b_e_mode == "fixed":
        b_e = addr if nonempty else 0
    else:
        raise ValueError(f"unknown b_e mode {b_e_mode!r}; known: {', '.join(B_E_MODES)}")
    return BitRateReport.from_terms(
        q_ones=ones, s_state=model.connection_bits(block, block) * n_tcn, s_bit=n_tcn,
        a_bit=n_tcn, b_e=b_e, n_tcn=n_tcn, clamped_count=clamped, scheme=model.name,
        source=source,
    )


class ProvenanceMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ReportComparison:
    a_scheme: str
    b_scheme: str
    delta: dict
    percent: dict  # None where the reference term is zero

    def __str__(self):
        lines = [f"{self.a_scheme} vs {self.b_scheme}"]
        for k in TERMS:
            pct = self.percent[k]
            pct_s = "n/a" if pct is None else f"{pct:+.1f}%"
            lines.append(f"  {k:<14}{self.delta[k]:+d} ({pct_s})")
        return "\n".join(lines)


def compare_report(a: BitRateReport, b: BitRateReport) -> ReportComparison:
    """Deltas ``a - b`` per term, with percentages relative to ``b``."""
    if a.source != b.source or a.n_tcn != b.n_tcn:
        raise ProvenanceMismatch(
            f"reports come from different inputs ({a.source!r}/{a.n_tcn} vs {b.source!r}/{b.n_tcn})"
        )
    delta, pct = {}, {}
    for k in TERMS:
        va, vb = getattr(a, k), getattr(b, k)
        delta[k] = va - vb
        pct[k] = None if vb == 0 else 100.0 * (va - vb) / vb
    return ReportComparison(a.scheme, b.scheme, delta, pct)
