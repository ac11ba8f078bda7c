"""8x8 DCT-II with JPEG level shift, plus uniform scalar quantization."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

N = 8
LEVEL_SHIFT = 128.0


def _dct_matrix(n: int = N) -> np.ndarray:
    k = np.arange(n)[:, None]
    x = np.arange(n)[None, :]
    m = np.cos((2 * x + 1) * k * np.pi / (2 * n)) * np.sqrt(2.0 / n)
    m[0] /= np.sqrt(2.0)
    return m


# orthonormal: DCT = M @ block @ M.T
_M = _dct_matrix()
_MT = _M.T.copy()


def _check_block(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.shape != (N, N):
        raise ValueError(f"expected an 8x8 block, got shape {a.shape}")
    return a


def dct2_8x8(pixels) -> np.ndarray:
    """Level-shift by -128, then the orthonormal 2-D DCT-II."""
    return _M @ (_check_block(pixels) - LEVEL_SHIFT) @ _MT


def idct2_8x8(coeffs) -> np.ndarray:
    """Inverse of :func:`dct2_8x8`, including the +128 shift. Not clamped."""
    return _MT @ _check_block(coeffs) @ _M + LEVEL_SHIFT


def _to_blocks(plane: np.ndarray) -> np.ndarray:
    h, w = plane.shape
    if h % N or w % N:
        raise ValueError(f"plane {w}x{h} is not a multiple of {N}")
    return plane.reshape(h // N, N, w // N, N).swapaxes(1, 2)


def _from_blocks(blocks: np.ndarray) -> np.ndarray:
    by, bx = blocks.shape[:2]
    return blocks.swapaxes(1, 2).reshape(by * N, bx * N)


def dct_plane(pixels) -> np.ndarray:
    """Blockwise DCT of a whole image; coefficients stay at their block's coordinates."""
    blocks = _to_blocks(np.asarray(pixels, dtype=np.float64))
    return _from_blocks(_M @ (blocks - LEVEL_SHIFT) @ _MT)


def idct_plane(coeffs) -> np.ndarray:
    blocks = _to_blocks(np.asarray(coeffs, dtype=np.float64))
    return _from_blocks(_MT @ blocks @ _M + LEVEL_SHIFT)


# ---------------------------------------------------------------- quantizer

def round_half_away(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return np.copysign(np.floor(np.abs(x) + 0.5), x)


@dataclass(frozen=True, eq=False)
class QuantizedBlock:
    """Integer coefficients together with the factor that produced them.

    ``q`` is usually 8x8 but may hold a whole blockwise plane.
    """

    q: np.ndarray
    qf: int

    def __eq__(self, other):
        if not isinstance(other, QuantizedBlock):
            return NotImplemented
        return self.qf == other.qf and bool(np.array_equal(self.q, other.q))


def quantize(coeffs, qf: int) -> QuantizedBlock:
    if qf < 1:
        raise ValueError("quantization factor must be >= 1")
    q = round_half_away(np.asarray(coeffs, dtype=np.float64) / qf).astype(np.int64)
    return QuantizedBlock(q, int(qf))


def dequantize(qb: QuantizedBlock) -> np.ndarray:
    return qb.q.astype(np.float64) * qb.qf


class UniformQuantizer:
    """Scalar quantizer ``round(F / qf)``.

    The pipeline only calls ``quantize`` and ``dequantize``, so any object
    with those two methods (a JPEG-table quantizer, say) can be swapped in.
    """

    def __init__(self, qf: int):
        if qf < 1:
            raise ValueError("quantization factor must be >= 1")
        self.qf = int(qf)

    def quantize(self, coeffs) -> QuantizedBlock:
        return quantize(coeffs, self.qf)

    def dequantize(self, qb: QuantizedBlock) -> np.ndarray:
        return dequantize(qb)

    def __repr__(self):
        return f"UniformQuantizer(qf={self.qf})"
