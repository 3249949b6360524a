"""Backend selection for the evaluation kernels.

The compiled Cython module is preferred when it imported cleanly; the numpy
implementation is the fallback.  Setting FEM_ACCURACY_PURE=1 forces the
fallback, which is how the benchmark and the backend-agreement tests get at
both implementations in one process.
"""

import os

import numpy as np

from . import _kernels_py

_FORCE_PURE = os.environ.get("FEM_ACCURACY_PURE", "").strip().lower() in {"1", "true", "yes"}

if not _FORCE_PURE:
    try:
        from . import _kernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"
else:
    _impl = _kernels_py
    BACKEND = "python"


def _as_point_array(points, nvars):
    pts = np.ascontiguousarray(points, dtype=np.float64)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.shape[1] != nvars:
        raise ValueError(f"points have {pts.shape[1]} coordinates, expected {nvars}")
    return pts


def eval_terms(points, exps, coeffs):
    pts = _as_point_array(points, exps.shape[1])
    if exps.shape[0] == 0:
        return np.zeros(pts.shape[0])
    return np.asarray(_impl.eval_terms(pts, exps, coeffs))


def max_abs_eval(points, exps, coeffs):
    pts = _as_point_array(points, exps.shape[1])
    if exps.shape[0] == 0:
        return 0.0
    return float(_impl.max_abs_eval(pts, exps, coeffs))
