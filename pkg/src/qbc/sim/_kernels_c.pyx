# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Dense statevector kernels. Qubit k is bit k of the amplitude index."""

cimport cython
from libc.math cimport sqrt


def apply_h(double complex[::1] state, int target):
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t t = (<Py_ssize_t>1) << target
    cdef Py_ssize_t hi, lo, i, j
    cdef double s = 1.0 / sqrt(2.0)
    cdef double ar, ai, br, bi
    cdef double* p
    if t >= dim:
        raise ValueError("target qubit out of range")
    p = <double*> &state[0]
    # pairs (i, i + t) for i with the target bit clear; re/im interleaved
    for hi in range(0, dim, 2 * t):
        for lo in range(hi, hi + t):
            i = 2 * lo
            j = 2 * (lo + t)
            ar = p[i]
            ai = p[i + 1]
            br = p[j]
            bi = p[j + 1]
            p[i] = (ar + br) * s
            p[i + 1] = (ai + bi) * s
            p[j] = (ar - br) * s
            p[j + 1] = (ai - bi) * s


def apply_mcx(double complex[::1] state, int target, long long ctrl_mask, long long ctrl_value):
    """Flip ``target`` on every branch whose ``ctrl_mask`` bits equal ``ctrl_value``."""
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t t = (<Py_ssize_t>1) << target
    cdef Py_ssize_t fixed = <Py_ssize_t>ctrl_mask | t
    cdef Py_ssize_t val = <Py_ssize_t>ctrl_value
    cdef Py_ssize_t free = 0, i, j
    cdef double complex tmp
    if t >= dim or ctrl_mask >= dim:
        raise ValueError("qubit out of range")
    if ctrl_mask & t:
        raise ValueError("target is also a control")
    # enumerate only the indices that match the controls with target bit 0
    while free < dim:
        i = free | val
        j = i | t
        tmp = state[i]
        state[i] = state[j]
        state[j] = tmp
        free = ((free | fixed) + 1) & ~fixed
