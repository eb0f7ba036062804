"""Grünwald–Letnikov fractional-order gradients.

``frac_grad(u, s, "h")[i, j] = sum_l s[l] * u[i - l, j]`` and the ``"v"``
direction runs along the second index, ``u[i, j - l]``. Passing
``swap=True`` exchanges the two axes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError
from .imgcore import BoundaryMode

DEFAULT_ORDER = 1.1
DEFAULT_LENGTH = 3


@dataclass(frozen=True)
class GLStencil:
    order: float
    coeffs: tuple[float, ...]

    @property
    def length(self) -> int:
        return len(self.coeffs)

    def as_array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.float64)


def gl_coeffs(order: float, length: int = DEFAULT_LENGTH) -> GLStencil:
    """Signed coefficients ``(-1)**l * binom(order, l)`` for ``l < length``.

    Uses the recurrence ``g[l] = g[l-1] * (1 - (order + 1) / l)``, which stays
    finite where the gamma-ratio form hits poles.
    """
    if not order > 0:
        raise ValueError(f"fractional order must be positive, got {order}")
    if length < 1:
        raise ValueError(f"stencil length must be at least 1, got {length}")
    g = [1.0]
    for l in range(1, length):
        g.append(g[-1] * (1.0 - (order + 1.0) / l))
    return GLStencil(float(order), tuple(g))


def _axis(direction: str, swap: bool) -> int:
    if direction not in ("h", "v"):
        raise ValueError(f"direction must be 'h' or 'v', got {direction!r}")
    axis = 0 if direction == "h" else 1
    return 1 - axis if swap else axis


def _check(g: np.ndarray, stencil: GLStencil, axis: int) -> None:
    if g.ndim != 2:
        raise DimensionError(f"expected a 2-D grid, got shape {g.shape}")
    if stencil.length > g.shape[axis]:
        raise DimensionError(
            f"stencil length {stencil.length} exceeds grid extent {g.shape[axis]}"
        )


def frac_grad(g, stencil: GLStencil, direction: str = "h",
              mode=BoundaryMode.PERIODIC, swap: bool = False) -> np.ndarray:
    """One-sided backward G-L difference along ``direction``."""
    g = np.asarray(g, dtype=np.float64)
    axis = _axis(direction, swap)
    _check(g, stencil, axis)
    mode = BoundaryMode.parse(mode)
    L = stencil.length
    n = g.shape[axis]
    pad = [(0, 0), (0, 0)]
    pad[axis] = (L - 1, 0)
    np_mode = {BoundaryMode.ZERO: "constant", BoundaryMode.PERIODIC: "wrap",
               BoundaryMode.REFLEXIVE: "symmetric"}[mode]
    padded = np.pad(g, pad, mode=np_mode)
    out = np.zeros_like(g)
    for l, c in enumerate(stencil.coeffs):
        out += c * np.take(padded, np.arange(L - 1 - l, L - 1 - l + n), axis=axis)
    return out


def frac_grad_adjoint(g, stencil: GLStencil, direction: str = "h",
                      mode=BoundaryMode.PERIODIC, swap: bool = False) -> np.ndarray:
    """Exact adjoint of :func:`frac_grad` for zero and periodic boundaries."""
    g = np.asarray(g, dtype=np.float64)
    axis = _axis(direction, swap)
    _check(g, stencil, axis)
    mode = BoundaryMode.parse(mode)
    if mode is BoundaryMode.REFLEXIVE:
        raise ValueError("adjoint is only provided for zero and periodic boundaries")
    L = stencil.length
    n = g.shape[axis]
    pad = [(0, 0), (0, 0)]
    pad[axis] = (0, L - 1)
    padded = np.pad(g, pad, mode="wrap" if mode is BoundaryMode.PERIODIC else "constant")
    out = np.zeros_like(g)
    for l, c in enumerate(stencil.coeffs):
        out += c * np.take(padded, np.arange(l, l + n), axis=axis)
    return out


def stencil_otf(stencil: GLStencil, shape: tuple[int, int], direction: str = "h",
                swap: bool = False) -> np.ndarray:
    """Transfer function of the periodic G-L difference on a grid of ``shape``."""
    axis = _axis(direction, swap)
    if stencil.length > shape[axis]:
        raise DimensionError(
            f"stencil length {stencil.length} exceeds grid extent {shape[axis]}"
        )
    emb = np.zeros(shape)
    idx = np.arange(stencil.length)
    if axis == 0:
        emb[idx, 0] = stencil.coeffs
    else:
        emb[0, idx] = stencil.coeffs
    return np.fft.fft2(emb)
