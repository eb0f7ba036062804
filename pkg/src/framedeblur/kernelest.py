"""Kernel estimation for a fixed latent image.

Fits fractional gradients of the latent image to those of the blurred image
under an ``l0`` penalty on the kernel's framelet coefficients minus an ``l1``
reward on the kernel itself. The ``l0`` part is split off through the
auxiliary ``c``, the ``l1`` part through ``d`` with a Bregman residual.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import framelet
from .fracgrad import DEFAULT_LENGTH, DEFAULT_ORDER, frac_grad, gl_coeffs
from .imgcore import as_image, delta_kernel, resize_kernel
from .spectral import embed_kernel, solve_k_closed_form

N_DIRECTION_BINS = 4


@dataclass(frozen=True)
class KernelParams:
    gamma2: float = 1e-4
    alpha: float = 0.5
    order: float = DEFAULT_ORDER
    length: int = DEFAULT_LENGTH
    mu2_max: float = 1e5
    mu3_max: float = 1e5
    truncation: float = 80.0
    exact_prox: bool = False
    swap_hv: bool = False

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not self.gamma2 > 0:
            raise ValueError("gamma2 must be positive")
        if not self.mu2_max > self.mu2_init:
            raise ValueError("mu2_max must exceed the initial mu2 = 2*gamma2")
        if not self.truncation > 0:
            raise ValueError("truncation factor must be positive")

    @property
    def mu2_init(self) -> float:
        return 2.0 * self.gamma2


def threshold_c(wk, gamma2: float, mu2: float) -> np.ndarray:
    """Keep framelet coefficients with ``|wk|**2 >= gamma2/mu2``."""
    if not np.all(np.asarray(mu2) > 0):
        raise ValueError("mu2 must be positive")
    wk = np.asarray(wk, dtype=np.float64)
    return np.where(wk * wk >= gamma2 / mu2, wk, 0.0)


def update_d(k, bregman, gamma2: float = 0.0, alpha: float = 0.0, mu3: float = 1.0,
             exact_prox: bool = False) -> np.ndarray:
    """``d = k + b``; with ``exact_prox`` the concave ``-l1`` shift is added too."""
    v = np.asarray(k, dtype=np.float64) + np.asarray(bregman, dtype=np.float64)
    if exact_prox:
        v = v + gamma2 * alpha / (2.0 * mu3) * np.sign(v)
    return v


def update_bregman(bregman, k, d) -> np.ndarray:
    return np.asarray(bregman, dtype=np.float64) + (np.asarray(k) - np.asarray(d))


def _direction_bins(g_h, g_v):
    angle = np.mod(np.arctan2(g_v, g_h), np.pi)
    return np.minimum((angle / (np.pi / N_DIRECTION_BINS)).astype(int), N_DIRECTION_BINS - 1)


def truncate_gradients(g_h, g_v, k_rows: int, k_cols: int, factor: float):
    """Keep only the strongest gradient pixels, zeroing the rest.

    Directions are quantized into four 45-degree bins. Each nonempty bin keeps
    its largest-magnitude pixels up to an equal share of
    ``ceil(factor * k_rows * k_cols)``, and the global ranking tops up the
    selection until at least that many pixels survive.
    """
    if not factor > 0:
        raise ValueError("factor must be positive")
    g_h = np.asarray(g_h, dtype=np.float64)
    g_v = np.asarray(g_v, dtype=np.float64)
    mag = np.hypot(g_h, g_v).ravel()
    n_keep = int(np.ceil(factor * k_rows * k_cols))
    nonzero = mag > 0
    if n_keep >= np.count_nonzero(nonzero):
        return g_h.copy(), g_v.copy()

    order = np.argsort(-mag, kind="stable")
    bins = _direction_bins(g_h, g_v).ravel()
    used = [b for b in range(N_DIRECTION_BINS) if np.any(nonzero & (bins == b))]
    quota = int(np.ceil(n_keep / len(used)))
    keep = np.zeros(mag.size, dtype=bool)
    for b in used:
        ranked = order[bins[order] == b]
        keep[ranked[:quota]] = True
    keep &= nonzero
    if keep.sum() < n_keep:
        for idx in order:
            if keep.sum() >= n_keep:
                break
            keep[idx] = True
    keep = keep.reshape(g_h.shape)
    return np.where(keep, g_h, 0.0), np.where(keep, g_v, 0.0)


def estimate_kernel(y, x, size, warm=None, p: KernelParams = KernelParams(),
                    trace: dict | None = None) -> np.ndarray:
    """Intermediate kernel of shape ``size`` from blurred ``y`` and latent ``x``.

    ``warm`` seeds the first framelet update (a centered delta when omitted).
    When ``trace`` is a dict the ``mu2`` and per-pass ``mu3`` weights are
    appended to it.
    """
    y = as_image(y)
    x = as_image(x)
    if x.shape != y.shape:
        raise ValueError(f"latent {x.shape} and blurred {y.shape} differ in shape")
    r, s = size
    if r % 2 == 0 or s % 2 == 0:
        raise ValueError(f"kernel size must be odd, got {size}")

    stencil = gl_coeffs(p.order, p.length)
    gx = [frac_grad(x, stencil, dr, swap=p.swap_hv) for dr in ("h", "v")]
    gy = [frac_grad(y, stencil, dr, swap=p.swap_hv) for dr in ("h", "v")]
    gx = truncate_gradients(gx[0], gx[1], r, s, p.truncation)

    if warm is None:
        k = delta_kernel(r, s)
    else:
        k = resize_kernel(warm, r, s)
    b = np.zeros((r, s))

    mu2 = p.mu2_init
    while True:
        c = threshold_c(framelet.analyze(embed_kernel(k, y.shape)), p.gamma2, mu2)
        wtc = framelet.synthesize(c)
        if trace is not None:
            trace.setdefault("mu2", []).append(mu2)
            trace.setdefault("mu3", []).append([])
        mu3 = 2.0 * mu2
        while True:
            assert abs(-p.gamma2 * p.alpha / mu3) < 1.0
            d = update_d(k, b, p.gamma2, p.alpha, mu3, p.exact_prox)
            b = update_bregman(b, k, d)
            k = solve_k_closed_form(gx[0], gx[1], gy[0], gy[1], d, c, mu2, mu3, wtc)
            if trace is not None:
                trace["mu3"][-1].append(mu3)
            mu3 *= 2.0
            if mu3 > p.mu3_max:
                break
        mu2 *= 2.0
        if mu2 > p.mu2_max:
            break
    return k
