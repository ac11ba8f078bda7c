"""Block-wise quantum grayscale image representation and compression (SCMNEQR).

Pipeline: pad -> 8x8 DCT -> uniform quantization -> 16x16 quantum blocks ->
preparation-cost accounting and circuit simulation -> dequantize -> inverse
DCT -> PSNR.
"""
from .accounting import (EFRQI, SCMNEQR, BitRateReport, CostModel, bit_rate, block_position_bits,
                         compare_report, plane_bit_rate, s_state_efrqi, s_state_scmneqr)
from .blocks import (NonzeroCoeff, QuantumBlock, RegisterLayout, encode_value, popcount_ones,
                     tile_quantum_blocks)
from .dct import QuantizedBlock, UniformQuantizer, dct2_8x8, dequantize, idct2_8x8, quantize
from .image_io import (EmptyImageError, GrayImage, ImageError, ImageReadError,
                       UnsupportedFormatError, load_image, pad_to_block_multiple, save_pgm,
                       synth_image)
from .metrics import RdPoint, mse, psnr, rd_sweep
from .pipeline import Codec, compress

__version__ = "0.1.0"
