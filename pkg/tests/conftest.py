import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def circular_conv_bruteforce(img, k_full):
    """Circular convolution of two equal-shape arrays by explicit shifts."""
    out = np.zeros_like(img)
    H, W = img.shape
    for m in range(H):
        for n in range(W):
            if k_full[m, n] != 0.0:
                out += k_full[m, n] * np.roll(img, (m, n), axis=(0, 1))
    return out


def circular_corr_bruteforce(img, k_full):
    """Adjoint of :func:`circular_conv_bruteforce` in its image argument."""
    out = np.zeros_like(img)
    H, W = img.shape
    for m in range(H):
        for n in range(W):
            if k_full[m, n] != 0.0:
                out += k_full[m, n] * np.roll(img, (-m, -n), axis=(0, 1))
    return out
