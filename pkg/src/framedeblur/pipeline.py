"""Coarse-to-fine blind deblurring driver and the non-blind finisher."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DegenerateKernelError
from .fracgrad import frac_grad
from .imgcore import (BoundaryMode, as_image, as_kernel, build_pyramid, convolve2d,
                      delta_kernel, resample_bilinear, resize_kernel)
from .kernelest import KernelParams, estimate_kernel
from .latent import GRADIENT, LatentParams, estimate_latent
from .metrics import psnr

log = logging.getLogger(__name__)

LUMA = np.array([0.299, 0.587, 0.114])


@dataclass(frozen=True)
class PipelineConfig:
    kernel_size: int = 25
    scale: float = float(np.sqrt(2.0))
    inner_iters: int = 5
    decay: float = 1.1
    gamma1_floor: float = 1e-3
    alpha_floor: float = 1e-3
    finisher_ratio: float = 0.1
    latent: LatentParams = LatentParams()
    kernel: KernelParams = KernelParams()

    def __post_init__(self):
        if self.kernel_size < 3 or self.kernel_size % 2 == 0:
            raise ValueError(f"kernel_size must be odd and at least 3, got {self.kernel_size}")
        if not self.decay >= 1.0:
            raise ValueError("decay factor must be at least 1")


def decay(value: float, factor: float, floor: float) -> float:
    return max(value / factor, floor)


@dataclass
class LevelDiagnostics:
    level: int
    kernel_size: int
    image_shape: tuple[int, int]
    zero_count: int
    zero_fraction: float
    psnr: float | None = None


@dataclass
class DeblurResult:
    restored: np.ndarray
    kernel: np.ndarray
    per_level_diagnostics: list[LevelDiagnostics] = field(default_factory=list)
    unidentifiable: bool = False
    trace: dict = field(default_factory=dict)

    def diagnostics_text(self) -> str:
        lines = []
        for d in self.per_level_diagnostics:
            line = (f"level={d.level} kernel_size={d.kernel_size} zero_count={d.zero_count} "
                    f"zero_fraction={d.zero_fraction:.6f}")
            if d.psnr is not None:
                line += f" psnr={d.psnr:.6f}"
            lines.append(line)
        return "\n".join(lines) + "\n"


def luminance(img) -> np.ndarray:
    img = np.asarray(img, dtype=np.float64)
    return img @ LUMA if img.ndim == 3 else img


def _taper_profile(k, axis: int, n: int) -> np.ndarray:
    # 1 - normalized autocorrelation of the kernel's projection, compressed
    # onto a band of kernel radius at each end of the axis
    proj = k.sum(axis=1 - axis)
    radius = len(proj) // 2
    prof = np.ones(n)
    if radius == 0:
        return prof
    ac = np.correlate(proj, proj, mode="full")[len(proj) - 1:]
    ac = ac / ac[0]
    for dist in range(min(radius, (n + 1) // 2)):
        lag = 2 * dist
        beta = ac[lag] if lag < len(ac) else 0.0
        prof[dist] = min(prof[dist], 1.0 - beta)
        prof[n - 1 - dist] = min(prof[n - 1 - dist], 1.0 - beta)
    return prof


def edge_taper(y, k) -> np.ndarray:
    """Blend ``y`` with its periodic blur near the borders.

    The blend weight follows the kernel's autocorrelation over a band of one
    kernel radius; pixels at least a radius from every border are untouched.
    """
    y = as_image(y)
    k = as_kernel(k)
    if k.size == 1:
        return y.copy()
    w = np.outer(_taper_profile(k, 0, y.shape[0]), _taper_profile(k, 1, y.shape[1]))
    blurred = convolve2d(y, k, BoundaryMode.PERIODIC)
    out = w * y + (1.0 - w) * blurred
    return out


def final_nonblind(y, k, cfg: PipelineConfig = PipelineConfig()) -> np.ndarray:
    """Edge-taper then run the latent solver with a softened image prior.

    Color inputs are restored channel by channel with the same kernel. The
    output is clamped to ``[0, 1]``.
    """
    k = as_kernel(k)
    params = replace(cfg.latent, gamma1=cfg.latent.gamma1 * cfg.finisher_ratio)
    y = np.asarray(y, dtype=np.float64)
    if y.ndim == 3:
        out = np.stack([estimate_latent(edge_taper(y[..., c], k), k, params)
                        for c in range(y.shape[2])], axis=-1)
    else:
        out = estimate_latent(edge_taper(y, k), k, params)
    return np.clip(out, 0.0, 1.0)


def _zero_stats(k):
    zeros = int(np.count_nonzero(k == 0.0))
    return zeros, zeros / k.size


def deblur_blind(y, cfg: PipelineConfig = PipelineConfig(), truth=None) -> DeblurResult:
    """Estimate the blur kernel coarse-to-fine and restore the image.

    Each pyramid level alternates latent and kernel estimation
    ``cfg.inner_iters`` times, decaying ``gamma1`` and ``alpha`` after every
    alternation. The regularization weights restart from ``cfg`` at each level.
    """
    y = np.asarray(y, dtype=np.float64)
    gray = as_image(luminance(y))
    truth_gray = None if truth is None else luminance(truth)

    flat = not any(np.any(frac_grad(gray, GRADIENT, d) != 0) for d in ("h", "v"))

    levels = build_pyramid(gray, cfg.kernel_size, cfg.scale)
    n_levels = len(levels)
    trace = {"gamma1": [], "alpha": [], "latent": [], "kernel": []}
    diags = []
    # a flat input carries no blur information: keep the delta at every level
    k = delta_kernel(levels[0][1])
    for idx, (y_l, ks) in enumerate(levels):
        level = n_levels - 1 - idx  # 0 is the finest
        if flat:
            k = delta_kernel(ks)
        elif k.shape != (ks, ks):
            k = resize_kernel(k, ks, ks)
        gamma1, alpha = cfg.latent.gamma1, cfg.kernel.alpha
        x = y_l
        try:
            for _ in range(0 if flat else cfg.inner_iters):
                lt, kt = {}, {}
                x = estimate_latent(y_l, k, replace(cfg.latent, gamma1=gamma1), lt)
                k = estimate_kernel(y_l, x, (ks, ks), k, replace(cfg.kernel, alpha=alpha), kt)
                trace["gamma1"].append(gamma1)
                trace["alpha"].append(alpha)
                trace["latent"].append(lt)
                trace["kernel"].append(kt)
                gamma1 = decay(gamma1, cfg.decay, cfg.gamma1_floor)
                alpha = decay(alpha, cfg.decay, cfg.alpha_floor)
        except DegenerateKernelError as exc:
            raise DegenerateKernelError(str(exc), level=level) from exc
        zeros, frac = _zero_stats(k)
        level_psnr = None
        if truth_gray is not None:
            t_l = resample_bilinear(truth_gray, y_l.shape[1], y_l.shape[0])
            level_psnr = psnr(x, t_l)
        diags.append(LevelDiagnostics(level, ks, y_l.shape, zeros, frac, level_psnr))
        log.info("level %d: kernel %dx%d zero fraction %.3f", level, ks, ks, frac)

    if flat:
        log.warning("input has no gradient information; kernel is not identifiable")
    restored = final_nonblind(y, k, cfg)
    return DeblurResult(restored, k, diags, flat, trace)
