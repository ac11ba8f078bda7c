"""Pick the dense statevector kernels at import time.

The compiled Cython module is used when it was built; otherwise, or when
``QBC_KERNELS=python`` is set, the numpy implementation is used. Both expose
``apply_h(state, target)`` and ``apply_mcx(state, target, ctrl_mask, ctrl_value)``
operating in place on a contiguous complex128 vector.
"""
import importlib
import os

_MODULES = {"cython": "qbc.sim._kernels_c", "python": "qbc.sim._kernels_py"}


def load_backend(name: str):
    return importlib.import_module(_MODULES[name])


def available_backends() -> list[str]:
    out = []
    for name in _MODULES:
        try:
            load_backend(name)
        except ImportError:
            continue
        out.append(name)
    return out


_requested = os.environ.get("QBC_KERNELS", "").strip().lower()
if _requested and _requested not in _MODULES:
    raise ImportError(f"QBC_KERNELS={_requested!r}; expected one of {sorted(_MODULES)}")

BACKEND = "python"
if _requested != "python":
    try:
        _impl = load_backend("cython")
        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
if BACKEND == "python":
    _impl = load_backend("python")

apply_h = _impl.apply_h
apply_mcx = _impl.apply_mcx
