"""Image -> quantized coefficient plane -> reconstruction, with cost reports."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .accounting import BitRateReport, plane_bit_rate
from .blocks import DEFAULT_BLOCK, DEFAULT_Q, QuantumBlock, log2_exact, tile_quantum_blocks
from .dct import N as DCT_N, QuantizedBlock, UniformQuantizer, dct_plane, idct_plane, round_half_away
from .image_io import GrayImage, pad_to_block_multiple


@dataclass(frozen=True, eq=False)
class Encoded:
    original: GrayImage
    padded: GrayImage
    quantizer: object
    plane: np.ndarray  # quantized coefficients, blockwise, padded size
    block: int
    q: int

    @property
    def qf(self) -> int:
        return self.quantizer.qf

    @property
    def grid(self) -> tuple[int, int]:
        return self.padded.width // self.block, self.padded.height // self.block

    @property
    def n_tcn(self) -> int:
        return int(np.count_nonzero(self.plane))

    @property
    def source(self) -> str:
        return f"{self.original.width}x{self.original.height}/qf={self.qf}/block={self.block}/q={self.q}"

    def blocks(self) -> list[QuantumBlock]:
        return tile_quantum_blocks(self.plane, self.block, self.q)

    def report(self, scheme, b_e_mode: str = "per-block-address") -> BitRateReport:
        return plane_bit_rate(self.plane, scheme, self.block, self.q, b_e_mode, self.source)

    @cached_property
    def reconstruction(self) -> GrayImage:
        """Dequantize, inverse DCT, round, clamp to 8 bits and crop the padding."""
        coeffs = self.quantizer.dequantize(QuantizedBlock(self.plane, self.qf))
        pixels = round_half_away(idct_plane(coeffs))
        pixels = np.clip(pixels, 0, 255).astype(np.uint8)
        return GrayImage(pixels[: self.original.height, : self.original.width])


class Codec:
    """Pads an image once and caches its DCT so many quantization factors are cheap."""

    def __init__(self, image: GrayImage, block: int = DEFAULT_BLOCK, q: int = DEFAULT_Q):
        log2_exact(block)
        if not 1 <= q <= 62:
            raise ValueError("q must lie in [1, 62]")
        self.image = image
        self.block = block
        self.q = q
        self.padded = pad_to_block_multiple(image, max(block, DCT_N))
        self.coeffs = dct_plane(self.padded.data)

    def encode(self, qf: int, quantizer=None) -> Encoded:
        quantizer = quantizer if quantizer is not None else UniformQuantizer(qf)
        plane = quantizer.quantize(self.coeffs).q
        return Encoded(self.image, self.padded, quantizer, plane, self.block, self.q)


def compress(image: GrayImage, qf: int, block: int = DEFAULT_BLOCK, q: int = DEFAULT_Q) -> Encoded:
    return Codec(image, block, q).encode(qf)
