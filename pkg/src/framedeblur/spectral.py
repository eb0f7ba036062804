"""FFT machinery shared by the image and kernel solvers.

All closed forms assume periodic boundaries, under which convolution with an
embedded kernel is diagonal in the Fourier basis.
"""

from __future__ import annotations

import logging

import numpy as np

from . import framelet
from .errors import DimensionError, SingularSystemError
from .imgcore import as_kernel, normalize_kernel

log = logging.getLogger(__name__)

DENOM_EPS = 1e-12
_IMAG_WARN = 1e-6


def fft2(g) -> np.ndarray:
    return np.fft.fft2(np.asarray(g, dtype=np.float64))


def ifft2_real(spec) -> np.ndarray:
    """Inverse transform keeping the real part; warns on a large imaginary residue."""
    out = np.fft.ifft2(spec)
    resid = np.abs(out.imag).max() if out.size else 0.0
    if resid > _IMAG_WARN:
        log.warning("inverse FFT imaginary residue %.3g exceeds %.0e", resid, _IMAG_WARN)
    return out.real


def embed_kernel(k, shape) -> np.ndarray:
    """Zero-pad ``k`` to ``shape`` with its center moved to index (0, 0)."""
    k = as_kernel(k)
    H, W = shape
    r, s = k.shape
    if r > H or s > W:
        raise DimensionError(f"kernel {k.shape} exceeds target {tuple(shape)}")
    out = np.zeros((H, W))
    out[:r, :s] = k
    return np.roll(out, (-(r // 2), -(s // 2)), axis=(0, 1))


def crop_kernel(full, shape) -> np.ndarray:
    """Inverse of :func:`embed_kernel`: the ``shape`` window around the origin."""
    r, s = shape
    return np.roll(full, (r // 2, s // 2), axis=(0, 1))[:r, :s].copy()


def psf_to_otf(k, target_w: int, target_h: int) -> np.ndarray:
    return np.fft.fft2(embed_kernel(k, (target_h, target_w)))


def _divide(num, den):
    if np.min(np.abs(den)) <= 0.0:
        raise SingularSystemError("closed-form denominator vanishes at some frequency")
    return num / (den + DENOM_EPS)


def solve_x_closed_form(y, k, a, b_h, b_v, beta, mu1, grad_h_otf, grad_v_otf) -> np.ndarray:
    """Minimize ``|k*x - y|^2 + beta |x - a|^2 + mu1 sum_i |grad_i x - b_i|^2``."""
    y = np.asarray(y, dtype=np.float64)
    K = psf_to_otf(k, y.shape[1], y.shape[0])
    Kc = np.conj(K)
    num = Kc * fft2(y) + beta * fft2(a)
    den = (Kc * K).real + beta
    if mu1 != 0:
        num = num + mu1 * (np.conj(grad_h_otf) * fft2(b_h) + np.conj(grad_v_otf) * fft2(b_v))
        den = den + mu1 * (np.abs(grad_h_otf) ** 2 + np.abs(grad_v_otf) ** 2)
    return ifft2_real(_divide(num, den))


def solve_k_full(gx_h, gx_v, gy_h, gy_v, d_full, mu2, mu3, wtc_full) -> np.ndarray:
    """Image-sized minimizer of
    ``sum_i |gx_i * k - gy_i|^2 + mu2 |w k - c|^2 + mu3 |k - d|^2``.

    ``d_full`` and ``wtc_full`` (the framelet synthesis of ``c``) are image-sized
    and origin-centered; the returned kernel field uses the same embedding.
    """
    if not mu2 + mu3 > 0:
        raise ValueError("mu2 + mu3 must be positive")
    num = mu3 * fft2(d_full) + mu2 * fft2(wtc_full)
    den = np.full(np.shape(d_full), float(mu2 + mu3))
    for gx, gy in ((gx_h, gy_h), (gx_v, gy_v)):
        X = fft2(gx)
        num = num + np.conj(X) * fft2(gy)
        den = den + (np.conj(X) * X).real
    return ifft2_real(_divide(num, den))


def solve_k_closed_form(gx_h, gx_v, gy_h, gy_v, d, c_coeffs, mu2, mu3,
                        framelet_adjoint_of_c=None) -> np.ndarray:
    """Kernel update: image-sized closed form, cropped to ``d.shape`` and projected.

    ``d`` lives on the kernel support. ``c_coeffs`` are framelet coefficients of
    the image-sized embedded kernel; their synthesis may be passed precomputed.
    """
    d = as_kernel(d)
    shape = np.shape(gx_h)
    wtc = framelet_adjoint_of_c
    if wtc is None:
        wtc = framelet.synthesize(c_coeffs)
    full = solve_k_full(gx_h, gx_v, gy_h, gy_v, embed_kernel(d, shape), mu2, mu3, wtc)
    return normalize_kernel(crop_kernel(full, d.shape))
