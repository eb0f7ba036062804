"""Latent image estimation for a fixed kernel.

Half-quadratic splitting of ``|k*x - y|^2 + gamma1 (sigma |x|_0 + |grad x|_0)``:
hard-threshold auxiliaries for the intensity and gradient terms, and an FFT
closed form for ``x``. Both penalty weights double on a fixed schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fracgrad import frac_grad, gl_coeffs, stencil_otf
from .imgcore import as_image, as_kernel
from .spectral import solve_x_closed_form

GRADIENT = gl_coeffs(1.0, 2)


@dataclass(frozen=True)
class LatentParams:
    gamma1: float = 4e-3
    sigma: float = 1.0
    beta_max: float = 8.0
    mu1_max: float = 1e5
    isotropic: bool = True
    swap_hv: bool = False

    def __post_init__(self):
        if not self.gamma1 > 0:
            raise ValueError("gamma1 must be positive")
        if self.sigma < 0:
            raise ValueError("sigma must be nonnegative")
        if self.sigma > 0 and not self.beta_max > self.beta_init:
            raise ValueError("beta_max must exceed the initial beta = 2*gamma1*sigma")
        if not self.mu1_max > self.mu1_init:
            raise ValueError("mu1_max must exceed the initial mu1 = 2*gamma1")

    @property
    def beta_init(self) -> float:
        return 2.0 * self.gamma1 * self.sigma

    @property
    def mu1_init(self) -> float:
        return 2.0 * self.gamma1


def threshold_a(x, gamma1: float, sigma: float, beta: float) -> np.ndarray:
    """Keep ``x`` where ``x**2 >= gamma1*sigma/beta``, zero elsewhere."""
    if not np.all(np.asarray(beta) > 0):
        raise ValueError("beta must be positive")
    x = np.asarray(x, dtype=np.float64)
    return np.where(x * x >= gamma1 * sigma / beta, x, 0.0)


def threshold_b(g_h, g_v, gamma1: float, mu1: float, isotropic: bool = True):
    """Hard-threshold a gradient field at squared magnitude ``gamma1/mu1``.

    The isotropic test uses ``g_h**2 + g_v**2`` and zeroes both components
    together; the anisotropic test treats each component on its own.
    """
    if not np.all(np.asarray(mu1) > 0):
        raise ValueError("mu1 must be positive")
    g_h = np.asarray(g_h, dtype=np.float64)
    g_v = np.asarray(g_v, dtype=np.float64)
    t = gamma1 / mu1
    if isotropic:
        keep = g_h * g_h + g_v * g_v >= t
        return np.where(keep, g_h, 0.0), np.where(keep, g_v, 0.0)
    return np.where(g_h * g_h >= t, g_h, 0.0), np.where(g_v * g_v >= t, g_v, 0.0)


def estimate_latent(y, k, p: LatentParams = LatentParams(), trace: dict | None = None) -> np.ndarray:
    """Intermediate latent image for blurred ``y`` and kernel ``k``.

    If ``trace`` is a dict, the penalty weights used are appended to its
    ``"beta"`` and ``"mu1"`` lists (``mu1`` records one list per outer pass).
    """
    y = as_image(y)
    k = as_kernel(k)
    gh_otf = stencil_otf(GRADIENT, y.shape, "h", p.swap_hv)
    gv_otf = stencil_otf(GRADIENT, y.shape, "v", p.swap_hv)

    x = y.copy()
    beta = p.beta_init
    while True:
        if beta > 0:
            a = threshold_a(x, p.gamma1, p.sigma, beta)
        else:
            a = np.zeros_like(x)
        if trace is not None:
            trace.setdefault("beta", []).append(beta)
            trace.setdefault("mu1", []).append([])
        mu1 = p.mu1_init
        while True:
            gh = frac_grad(x, GRADIENT, "h", swap=p.swap_hv)
            gv = frac_grad(x, GRADIENT, "v", swap=p.swap_hv)
            b_h, b_v = threshold_b(gh, gv, p.gamma1, mu1, p.isotropic)
            x = solve_x_closed_form(y, k, a, b_h, b_v, beta, mu1, gh_otf, gv_otf)
            if trace is not None:
                trace["mu1"][-1].append(mu1)
            mu1 *= 2.0
            if mu1 > p.mu1_max:
                break
        # sigma == 0 disables the intensity prior: a single outer pass
        if beta == 0:
            break
        beta *= 2.0
        if beta > p.beta_max:
            break
    return x
