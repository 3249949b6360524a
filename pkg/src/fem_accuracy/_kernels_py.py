"""Pure numpy fallback for the compiled kernel, same contract as _kernels.pyx."""

import numpy as np


def eval_terms(points, exps, coeffs):
    """Evaluate one term-list polynomial at many points.

    points : (npts, nvars) float64
    exps   : (nterms, nvars) int64
    coeffs : (nterms,) float64
    returns (npts,) float64
    """
    if exps.shape[0] == 0:
        return np.zeros(points.shape[0])
    powers = points[:, None, :] ** exps[None, :, :]
    return powers.prod(axis=2) @ coeffs


def max_abs_eval(points, exps, coeffs):
    """max(|polynomial|) over the given points."""
    if exps.shape[0] == 0:
        return 0.0
    return float(np.max(np.abs(eval_terms(points, exps, coeffs))))
