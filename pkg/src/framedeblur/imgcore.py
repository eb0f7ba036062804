"""Image and kernel primitives: boundary-aware convolution, resampling, pyramids.

Images are 2-D float64 numpy arrays indexed ``[row, col]``. Kernels are small
2-D arrays with odd side lengths whose center sits at ``(rows // 2, cols // 2)``.
"""

from __future__ import annotations

import enum

import numpy as np
from scipy import ndimage

from .errors import DegenerateKernelError, DimensionError


class BoundaryMode(enum.Enum):
    ZERO = "zero"
    PERIODIC = "periodic"
    REFLEXIVE = "reflexive"

    @classmethod
    def parse(cls, value) -> "BoundaryMode":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown boundary mode {value!r}; expected one of {names}") from None


# scipy.ndimage "reflect" is the half-sample symmetric extension (d c b a | a b c d)
_NDIMAGE_MODE = {
    BoundaryMode.ZERO: "constant",
    BoundaryMode.PERIODIC: "wrap",
    BoundaryMode.REFLEXIVE: "reflect",
}


def as_image(img) -> np.ndarray:
    arr = np.asarray(img, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DimensionError(f"expected a non-empty 2-D image, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite samples")
    return arr


def as_kernel(k) -> np.ndarray:
    arr = np.asarray(k, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] % 2 == 0 or arr.shape[1] % 2 == 0:
        raise DimensionError(f"kernel sides must be odd, got shape {arr.shape}")
    return arr


def delta_kernel(rows: int, cols: int | None = None) -> np.ndarray:
    cols = rows if cols is None else cols
    k = np.zeros((rows, cols))
    k[rows // 2, cols // 2] = 1.0
    return as_kernel(k)


def normalize_kernel(k) -> np.ndarray:
    """Clamp negative weights to zero and rescale to unit sum."""
    k = np.maximum(as_kernel(k), 0.0)
    total = k.sum()
    if not total > 0.0:
        raise DegenerateKernelError("kernel has no positive mass after clamping")
    return k / total


def convolve2d(img, k, mode=BoundaryMode.PERIODIC) -> np.ndarray:
    """Center-anchored true convolution (the kernel is flipped).

    Samples outside the frame are resolved per ``mode``; the output has the
    same shape as ``img``.
    """
    img = as_image(img)
    k = as_kernel(k)
    mode = BoundaryMode.parse(mode)
    if k.shape[0] > img.shape[0] or k.shape[1] > img.shape[1]:
        raise DimensionError(f"kernel {k.shape} larger than image {img.shape}")
    return ndimage.convolve(img, k, mode=_NDIMAGE_MODE[mode], cval=0.0)


def _interp_matrix(n_in: int, n_out: int) -> np.ndarray:
    # half-pixel aligned linear interpolation with edge clamping
    if n_in == n_out:
        return np.eye(n_in)
    src = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
    src = np.clip(src, 0.0, n_in - 1)
    lo = np.floor(src).astype(int)
    hi = np.minimum(lo + 1, n_in - 1)
    frac = src - lo
    m = np.zeros((n_out, n_in))
    rows = np.arange(n_out)
    np.add.at(m, (rows, lo), 1.0 - frac)
    np.add.at(m, (rows, hi), frac)
    return m


def resample_bilinear(img, new_w: int, new_h: int) -> np.ndarray:
    """Bilinear resampling to ``new_h`` rows by ``new_w`` columns."""
    img = as_image(img)
    if new_w < 1 or new_h < 1:
        raise DimensionError(f"target size must be positive, got {new_w}x{new_h}")
    if (new_h, new_w) == img.shape:
        return img.copy()
    rows = _interp_matrix(img.shape[0], new_h)
    cols = _interp_matrix(img.shape[1], new_w)
    return rows @ img @ cols.T


def nearest_odd(value: float) -> int:
    return int(2 * np.floor(value / 2.0) + 1)


def pyramid_kernel_sizes(kernel_size: int, scale: float = np.sqrt(2.0)) -> list[int]:
    """Kernel side per level, finest first, ending at 3 (or 5 when 3 is skipped)."""
    if kernel_size % 2 == 0 or kernel_size < 1:
        raise DimensionError(f"kernel_size must be odd and positive, got {kernel_size}")
    if not scale > 1.0:
        raise ValueError("scale must exceed 1")
    sizes = [kernel_size]
    level = 1
    while sizes[-1] > 3:
        nxt = max(3, nearest_odd(kernel_size / scale**level))
        if nxt >= sizes[-1]:
            break
        sizes.append(nxt)
        level += 1
    return sizes


def build_pyramid(img, kernel_size: int, scale: float = np.sqrt(2.0)):
    """Coarse-to-fine list of ``(image, kernel_size)`` pairs.

    Level ``l`` (counted from the finest) is the input shrunk by ``scale**l``.
    """
    img = as_image(img)
    sizes = pyramid_kernel_sizes(kernel_size, scale)
    levels = []
    for level, ks in enumerate(sizes):
        f = scale**level
        h = max(ks, int(round(img.shape[0] / f)))
        w = max(ks, int(round(img.shape[1] / f)))
        levels.append((resample_bilinear(img, w, h), ks))
    return levels[::-1]


def _splat_matrix(n_in: int, n_out: int) -> np.ndarray:
    # maps input sample p to position c_out + (p - c_in) * n_out / n_in and
    # splits its mass linearly between the two nearest output samples
    pos = (n_out - 1) / 2.0 + (np.arange(n_in) - (n_in - 1) / 2.0) * (n_out / n_in)
    lo = np.floor(pos).astype(int)
    frac = pos - lo
    m = np.zeros((n_out, n_in))
    for p in range(n_in):
        for idx, w in ((lo[p], 1.0 - frac[p]), (lo[p] + 1, frac[p])):
            if 0 <= idx < n_out and w > 0.0:
                m[idx, p] += w
    return m


def resize_kernel(k, new_rows: int, new_cols: int) -> np.ndarray:
    """Resize a kernel with center-preserving bilinear mass splatting.

    The result is clamped to nonnegative values and normalized to unit sum.
    A centered delta stays a centered delta at any odd size.
    """
    k = as_kernel(k)
    if new_rows % 2 == 0 or new_cols % 2 == 0 or new_rows < 1 or new_cols < 1:
        raise DimensionError(f"target kernel size must be odd, got {new_rows}x{new_cols}")
    if (new_rows, new_cols) == k.shape:
        out = k.copy()
    else:
        out = _splat_matrix(k.shape[0], new_rows) @ k @ _splat_matrix(k.shape[1], new_cols).T
    return normalize_kernel(out)
