"""Synthetic kernels and the forward blur model ``y = x * k + noise``."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .imgcore import BoundaryMode, as_kernel, convolve2d, delta_kernel, normalize_kernel


class KernelKind(enum.Enum):
    DELTA = "delta"
    BOX = "box"
    GAUSSIAN = "gaussian"
    LINEAR_MOTION = "motion"


@dataclass(frozen=True)
class KernelSpec:
    kind: KernelKind
    size: int
    length: float = 0.0
    angle: float = 0.0  # degrees, counterclockwise from the +column axis
    std: float = 1.0

    @classmethod
    def parse(cls, text: str) -> "KernelSpec":
        """Parse ``kind[:p1[:p2]]``: ``delta:3``, ``box:5``, ``gauss:9:1.5``, ``motion:15:45``."""
        parts = text.strip().split(":")
        name, args = parts[0].lower(), parts[1:]
        try:
            if name == "delta":
                return cls(KernelKind.DELTA, int(args[0]) if args else 1)
            if name == "box":
                return cls(KernelKind.BOX, int(args[0]) if args else 3)
            if name in ("gauss", "gaussian"):
                size = int(args[0]) if args else 5
                std = float(args[1]) if len(args) > 1 else size / 6.0
                return cls(KernelKind.GAUSSIAN, size, std=std)
            if name == "motion":
                length = float(args[0]) if args else 5.0
                angle = float(args[1]) if len(args) > 1 else 0.0
                size = 2 * int(np.ceil((length - 1) / 2.0)) + 1
                return cls(KernelKind.LINEAR_MOTION, size, length=length, angle=angle)
        except (ValueError, IndexError):
            raise ValueError(f"malformed kernel spec {text!r}") from None
        raise ValueError(f"unknown kernel kind {name!r}; expected delta, box, gauss or motion")


def make_kernel(spec: KernelSpec) -> np.ndarray:
    n = spec.size
    if n < 1 or n % 2 == 0:
        raise ValueError(f"kernel size must be odd and positive, got {n}")
    if spec.kind is KernelKind.DELTA:
        return delta_kernel(n)
    if spec.kind is KernelKind.BOX:
        return np.full((n, n), 1.0 / (n * n))
    c = n // 2
    if spec.kind is KernelKind.GAUSSIAN:
        if not spec.std > 0:
            raise ValueError("gaussian std must be positive")
        t = np.arange(n) - c
        g = np.exp(-0.5 * (t / spec.std) ** 2)
        return normalize_kernel(np.outer(g, g))
    if spec.kind is KernelKind.LINEAR_MOTION:
        if not spec.length >= 1:
            raise ValueError("motion length must be at least 1")
        # unit-spaced samples along the segment, splatted bilinearly
        count = int(round(spec.length))
        t = np.arange(count) - (count - 1) / 2.0
        theta = np.deg2rad(spec.angle)
        cols = c + t * np.cos(theta)
        rows = c - t * np.sin(theta)
        k = np.zeros((n, n))
        for rr, cc in zip(rows, cols):
            r0, c0 = int(np.floor(rr)), int(np.floor(cc))
            fr, fc = rr - r0, cc - c0
            for dr, wr in ((0, 1.0 - fr), (1, fr)):
                for dc, wc in ((0, 1.0 - fc), (1, fc)):
                    i, j = r0 + dr, c0 + dc
                    if wr * wc > 0 and 0 <= i < n and 0 <= j < n:
                        k[i, j] += wr * wc
        return normalize_kernel(k)
    raise ValueError(f"unsupported kernel kind {spec.kind}")


@dataclass(frozen=True)
class NoiseSpec:
    """Additive white Gaussian noise drawn from numpy's PCG64 generator."""

    std: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.std < 0:
            raise ValueError("noise std must be nonnegative")

    @property
    def enabled(self) -> bool:
        return self.std > 0

    def sample(self, shape) -> np.ndarray:
        rng = np.random.Generator(np.random.PCG64(self.seed))
        return self.std * rng.standard_normal(shape)


def blur(x, k, mode=BoundaryMode.PERIODIC, noise: NoiseSpec = NoiseSpec(),
         clamp: bool = True) -> np.ndarray:
    """Convolve, add seeded noise, and clamp to ``[0, 1]`` unless ``clamp`` is False."""
    y = convolve2d(x, as_kernel(k), mode)
    if noise.enabled:
        y = y + noise.sample(y.shape)
    if clamp:
        y = np.clip(y, 0.0, 1.0)
    return y


def piecewise_constant_scene(size: int = 64) -> np.ndarray:
    """Deterministic piecewise-constant scene of overlapping rectangles."""
    s = size / 64.0
    x = np.full((size, size), 0.2)
    for (r0, r1, c0, c1), v in (((8, 30, 10, 40), 0.8), ((36, 58, 20, 52), 0.5),
                                ((20, 48, 44, 60), 0.95), ((40, 56, 4, 16), 0.05)):
        x[int(r0 * s):int(r1 * s), int(c0 * s):int(c1 * s)] = v
    return x
