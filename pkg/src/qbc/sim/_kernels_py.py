"""Numpy fallback for the dense statevector kernels in ``_kernels_c.pyx``."""
from functools import lru_cache

import numpy as np

_S = 1.0 / np.sqrt(2.0)


@lru_cache(maxsize=8)
def _indices(dim: int) -> np.ndarray:
    return np.arange(dim, dtype=np.int64)


def apply_h(state: np.ndarray, target: int) -> None:
    dim = state.shape[0]
    t = 1 << target
    if t >= dim:
        raise ValueError("target qubit out of range")
    # view as (high, 2, low) so the target bit is the middle axis
    v = state.reshape(dim // (2 * t), 2, t)
    a0 = v[:, 0, :].copy()
    a1 = v[:, 1, :]
    v[:, 0, :] = (a0 + a1) * _S
    v[:, 1, :] = (a0 - a1) * _S


def apply_mcx(state: np.ndarray, target: int, ctrl_mask: int, ctrl_value: int) -> None:
    dim = state.shape[0]
    t = 1 << target
    if t >= dim or ctrl_mask >= dim:
        raise ValueError("qubit out of range")
    if ctrl_mask & t:
        raise ValueError("target is also a control")
    if ctrl_mask == 0:
        v = state.reshape(dim // (2 * t), 2, t)
        v[:, [0, 1], :] = v[:, [1, 0], :]
        return
    idx = _indices(dim)
    lo = idx[(idx & (ctrl_mask | t)) == ctrl_value]
    hi = lo | t
    state[lo], state[hi] = state[hi], state[lo].copy()
