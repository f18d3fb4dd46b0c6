"""Backend selection for the deterministic kernels.

The compiled extension is used when it was built; otherwise the pure-Python
twin is loaded. Setting ``CSPAIR_PURE_PYTHON=1`` forces the fallback. Both
backends give bit-identical results, so the choice only affects speed.
"""
import os

if os.environ.get("CSPAIR_PURE_PYTHON") == "1":
    from cspair import _kernels_py as _impl
else:
    try:
        from cspair import _kernels as _impl
    except ImportError:  # extension not built
        from cspair import _kernels_py as _impl

BACKEND = _impl.BACKEND
splitmix64_doubles = _impl.splitmix64_doubles
reflect_left = _impl.reflect_left
reflect_right = _impl.reflect_right
form_transform = _impl.form_transform
conjugate = _impl.conjugate

__all__ = [
    "BACKEND",
    "splitmix64_doubles",
    "reflect_left",
    "reflect_right",
    "form_transform",
    "conjugate",
]
