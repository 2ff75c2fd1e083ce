"""Kernel backend selection.

Imports the compiled extension when present, otherwise falls back to the
pure-Python implementation.  GP_EXCITED_KERNELS=python|cython forces a
backend (raising if the compiled one was requested but is not built).
"""

import os

_forced = os.environ.get("GP_EXCITED_KERNELS", "").strip().lower()

if _forced in ("python", "py"):
    from . import _kernels_py as _impl
    BACKEND = "python"
elif _forced in ("cython", "cy", "c"):
    from . import _kernels as _impl  # type: ignore[no-redef]
    BACKEND = "cython"
else:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"

CROSSED = _impl.CROSSED
TURNED = _impl.TURNED
UNDECIDED = _impl.UNDECIDED
DECAYED = _impl.DECAYED

shoot_classify = _impl.shoot_classify
shoot_trajectory = _impl.shoot_trajectory
laplacian_5pt = _impl.laplacian_5pt


def get_backend(name=None):
    """Return the kernel module for `name` ('python'/'cython'/None=active)."""
    if name is None or name == BACKEND:
        return _impl
    if name in ("python", "py"):
        from . import _kernels_py
        return _kernels_py
    if name in ("cython", "cy", "c"):
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")
