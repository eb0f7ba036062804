"""Single-level undecimated tight framelet transform (piecewise-linear B-spline).

Coefficients are stored as an array of shape ``(3, 3, H, W)``; entry
``[i, j]`` is the subband filtered by ``h_i`` along rows (axis 0) and ``h_j``
along columns (axis 1). Boundaries are periodic, so ``synthesize`` is the exact
adjoint and left inverse of ``analyze``.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError

FILTERS = (
    np.array([1.0, 2.0, 1.0]) / 4.0,
    np.array([1.0, 0.0, -1.0]) * np.sqrt(2.0) / 4.0,
    np.array([-1.0, 2.0, -1.0]) / 4.0,
)


def filter_response(omega) -> np.ndarray:
    """Frequency responses of the three filters, shape ``(3, len(omega))``.

    Taps sit at offsets -1, 0, +1 with convolution convention.
    """
    omega = np.atleast_1d(np.asarray(omega, dtype=np.float64))
    phase = np.exp(-1j * np.outer(np.array([-1, 0, 1]), omega))
    return np.stack([h @ phase for h in FILTERS])


def _filt(g, h, axis):
    # out[n] = h[0] g[n+1] + h[1] g[n] + h[2] g[n-1]
    return h[0] * np.roll(g, -1, axis) + h[1] * g + h[2] * np.roll(g, 1, axis)


def _filt_adj(g, h, axis):
    return h[0] * np.roll(g, 1, axis) + h[1] * g + h[2] * np.roll(g, -1, axis)


def analyze(g) -> np.ndarray:
    g = np.asarray(g, dtype=np.float64)
    if g.ndim != 2:
        raise DimensionError(f"expected a 2-D grid, got shape {g.shape}")
    out = np.empty((3, 3) + g.shape)
    for i, hi in enumerate(FILTERS):
        rows = _filt(g, hi, 0)
        for j, hj in enumerate(FILTERS):
            out[i, j] = _filt(rows, hj, 1)
    return out


def synthesize(coeffs) -> np.ndarray:
    try:
        c = np.asarray(coeffs, dtype=np.float64)
    except ValueError:
        raise DimensionError("framelet subbands differ in size") from None
    if c.ndim != 4 or c.shape[:2] != (3, 3):
        raise DimensionError(f"expected coefficients of shape (3, 3, H, W), got {c.shape}")
    out = np.zeros(c.shape[2:])
    for i, hi in enumerate(FILTERS):
        acc = np.zeros(c.shape[2:])
        for j, hj in enumerate(FILTERS):
            acc += _filt_adj(c[i, j], hj, 1)
        out += _filt_adj(acc, hi, 0)
    return out
