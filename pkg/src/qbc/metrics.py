"""Distortion measures and rate-distortion sweeps."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .accounting import BitRateReport, get_scheme
from .blocks import DEFAULT_BLOCK, DEFAULT_Q
from .image_io import GrayImage
from .pipeline import Codec

DEFAULT_QFS = (1, 2, 4, 8, 16, 32, 64)
PEAK = 255.0


def _pixels(img) -> np.ndarray:
    return img.data if isinstance(img, GrayImage) else np.asarray(img)


def mse(a, b) -> float:
    pa, pb = _pixels(a), _pixels(b)
    if pa.shape != pb.shape:
        raise ValueError(f"image dimensions differ: {pa.shape} vs {pb.shape}")
    d = pa.astype(np.float64) - pb.astype(np.float64)
    return float(np.mean(d * d))


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical images."""
    err = mse(a, b)
    if err == 0.0:
        return math.inf
    return 10.0 * math.log10(PEAK * PEAK / err)


@dataclass(frozen=True)
class RdPoint:
    qf: int
    br_bits: int
    psnr_db: float
    scheme: str
    report: BitRateReport | None = None

    def __post_init__(self):
        if self.qf < 1 or self.br_bits < 0:
            raise ValueError("qf must be >= 1 and br_bits >= 0")


def rd_sweep(img: GrayImage, qfs=DEFAULT_QFS, scheme="SCMNEQR", block: int = DEFAULT_BLOCK,
             q: int = DEFAULT_Q, b_e_mode: str = "per-block-address") -> list[RdPoint]:
    """One rate-distortion point per quantization factor, ordered by qf.

    PSNR is measured against the original image on its own (unpadded) area.
    """
    qfs = sorted(set(int(v) for v in qfs))
    if not qfs:
        raise ValueError("need at least one quantization factor")
    if qfs[0] < 1:
        raise ValueError("quantization factors must be >= 1")
    model = get_scheme(scheme)
    codec = Codec(img, block, q)
    points = []
    for qf in qfs:
        enc = codec.encode(qf)
        rep = enc.report(model, b_e_mode)
        points.append(RdPoint(qf, rep.br, psnr(img, enc.reconstruction), model.name, rep))
    return points
