"""Image quality and kernel accuracy metrics for ``[0, 1]``-range images."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage, signal

from .errors import DimensionError

PSNR_CAP = 100.0
MS_SSIM_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
_K1, _K2 = 0.01, 0.03
_WIN_SIGMA = 1.5
_WIN_TRUNCATE = 3.5  # 11-tap window


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionError(f"image sizes differ: {a.shape} vs {b.shape}")
    return a, b


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB with unit peak, capped at 100 dB."""
    a, b = _pair(a, b)
    mse = float(np.mean((a - b) ** 2))
    if mse == 0.0:
        return PSNR_CAP
    return min(PSNR_CAP, 10.0 * np.log10(1.0 / mse))


def _filt(img):
    return ndimage.gaussian_filter(img, _WIN_SIGMA, truncate=_WIN_TRUNCATE, mode="reflect")


def _ssim_terms(a, b):
    c1, c2 = _K1**2, _K2**2
    mu_a, mu_b = _filt(a), _filt(b)
    var_a = _filt(a * a) - mu_a * mu_a
    var_b = _filt(b * b) - mu_b * mu_b
    cov = _filt(a * b) - mu_a * mu_b
    lum = (2 * mu_a * mu_b + c1) / (mu_a * mu_a + mu_b * mu_b + c1)
    cs = (2 * cov + c2) / (var_a + var_b + c2)
    return lum, cs


def ssim(a, b) -> float:
    """Mean structural similarity with an 11-tap Gaussian window (sigma 1.5)."""
    a, b = _pair(a, b)
    lum, cs = _ssim_terms(a, b)
    return float(np.mean(lum * cs))


def ms_ssim(a, b, weights=MS_SSIM_WEIGHTS) -> float:
    """Multi-scale SSIM over ``len(weights)`` dyadic scales.

    Negative contrast-structure terms are clamped to zero so the product of
    fractional powers stays real; the result lies in ``[0, 1]``.
    """
    a, b = _pair(a, b)
    scales = len(weights)
    min_side = 2 ** (scales - 1) * 2
    if min(a.shape) < min_side:
        raise DimensionError(f"ms_ssim with {scales} scales needs images of at least {min_side}x{min_side}")
    out = 1.0
    for i, w in enumerate(weights):
        lum, cs = _ssim_terms(a, b)
        if i == scales - 1:
            out *= max(float(np.mean(lum * cs)), 0.0) ** w
        else:
            out *= max(float(np.mean(cs)), 0.0) ** w
            a, b = _downsample2(a), _downsample2(b)
    return float(out)


def _downsample2(img):
    h, w = (img.shape[0] // 2) * 2, (img.shape[1] // 2) * 2
    img = img[:h, :w]
    return 0.25 * (img[0::2, 0::2] + img[1::2, 0::2] + img[0::2, 1::2] + img[1::2, 1::2])


def kernel_xcorr(k1, k2) -> float:
    """Peak normalized cross-correlation over all relative translations."""
    k1 = np.asarray(k1, dtype=np.float64)
    k2 = np.asarray(k2, dtype=np.float64)
    n1, n2 = np.linalg.norm(k1), np.linalg.norm(k2)
    if n1 == 0 or n2 == 0:
        return 0.0
    corr = signal.correlate(k1, k2, mode="full", method="direct")
    return float(min(1.0, corr.max() / (n1 * n2)))


@dataclass
class MetricReport:
    psnr: float
    ssim: float
    ms_ssim: float | None = None
    kernel_xcorr: float | None = None

    def to_text(self) -> str:
        """``metric=value`` lines with six decimals; absent metrics are omitted."""
        lines = []
        for name in ("psnr", "ssim", "ms_ssim", "kernel_xcorr"):
            value = getattr(self, name)
            if value is not None:
                lines.append(f"{name}={value:.6f}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "MetricReport":
        values = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            values[key.strip()] = float(val)
        return cls(**values)


def evaluate(restored, truth, kernel=None, true_kernel=None) -> MetricReport:
    restored, truth = _pair(restored, truth)
    if restored.ndim == 3:
        gray = lambda im: im @ np.array([0.299, 0.587, 0.114])
        r2, t2 = gray(restored), gray(truth)
    else:
        r2, t2 = restored, truth
    ms = None
    if min(r2.shape) >= 2 ** len(MS_SSIM_WEIGHTS):
        ms = ms_ssim(r2, t2)
    xc = None
    if kernel is not None and true_kernel is not None:
        xc = kernel_xcorr(kernel, true_kernel)
    return MetricReport(psnr(restored, truth), ssim(r2, t2), ms, xc)
