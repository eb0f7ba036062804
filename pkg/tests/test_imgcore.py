import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from framedeblur.errors import DegenerateKernelError, DimensionError
from framedeblur.imgcore import (BoundaryMode, build_pyramid, convolve2d, delta_kernel,
                                 normalize_kernel, pyramid_kernel_sizes, resample_bilinear,
                                 resize_kernel)


def conv_direct(img, k, mode):
    """Double-sum convolution with explicit out-of-frame index resolution."""
    H, W = img.shape
    r, s = k.shape
    cr, cs = r // 2, s // 2

    def fetch(i, j):
        if mode is BoundaryMode.PERIODIC:
            return img[i % H, j % W]
        if mode is BoundaryMode.ZERO:
            return img[i, j] if 0 <= i < H and 0 <= j < W else 0.0
        # half-sample symmetric reflection
        def refl(t, n):
            t = t % (2 * n)
            return t if t < n else 2 * n - 1 - t
        return img[refl(i, H), refl(j, W)]

    out = np.zeros_like(img)
    for i in range(H):
        for j in range(W):
            acc = 0.0
            for p in range(r):
                for q in range(s):
                    acc += k[p, q] * fetch(i - (p - cr), j - (q - cs))
            out[i, j] = acc
    return out


@pytest.mark.parametrize("mode", list(BoundaryMode))
def test_identity_kernel(rng, mode):
    img = rng.random((7, 9))
    np.testing.assert_array_equal(convolve2d(img, np.ones((1, 1)), mode), img)


def test_constant_image_periodic(rng):
    k = normalize_kernel(rng.random((5, 3)))
    out = convolve2d(np.full((8, 8), 0.37), k, BoundaryMode.PERIODIC)
    np.testing.assert_allclose(out, 0.37, atol=1e-15)


def test_box_on_3x3_periodic_is_neighborhood_mean():
    img = np.arange(1.0, 10.0).reshape(3, 3)
    out = convolve2d(img, np.full((3, 3), 1 / 9), BoundaryMode.PERIODIC)
    # every periodic 3x3 neighborhood of a 3x3 grid is the whole grid
    np.testing.assert_allclose(out, np.full((3, 3), 5.0), atol=1e-14)
    np.testing.assert_allclose(out, conv_direct(img, np.full((3, 3), 1 / 9), BoundaryMode.PERIODIC),
                               atol=1e-14)


@pytest.mark.parametrize("mode", list(BoundaryMode))
def test_matches_double_sum_oracle(rng, mode):
    img = rng.random((9, 11))
    k = rng.random((3, 5))
    np.testing.assert_allclose(convolve2d(img, k, mode), conv_direct(img, k, mode), atol=1e-13)


def test_kernel_is_flipped():
    img = np.zeros((5, 5))
    img[2, 2] = 1.0
    k = np.zeros((3, 3))
    k[0, 2] = 1.0  # up-right tap
    out = convolve2d(img, k, BoundaryMode.ZERO)
    # true convolution: the impulse response reproduces the kernel around the impulse
    assert out[1, 3] == 1.0


def test_kernel_larger_than_image():
    with pytest.raises(DimensionError):
        convolve2d(np.zeros((3, 3)), np.ones((5, 5)) / 25)


def test_linearity(rng):
    for _ in range(10):
        f, g = rng.random((16, 16)), rng.random((16, 16))
        k = rng.random((5, 5))
        a, b = rng.normal(size=2)
        for mode in BoundaryMode:
            lhs = convolve2d(a * f + b * g, k, mode)
            rhs = a * convolve2d(f, k, mode) + b * convolve2d(g, k, mode)
            assert np.abs(lhs - rhs).max() <= 1e-12


def test_periodic_commutes_with_circular_shift(rng):
    img = rng.random((12, 10))
    k = rng.random((3, 5))
    shifted = np.roll(img, (4, -3), axis=(0, 1))
    np.testing.assert_allclose(convolve2d(shifted, k), np.roll(convolve2d(img, k), (4, -3), axis=(0, 1)),
                               atol=1e-14)


def test_periodic_preserves_mean(rng):
    img = rng.random((16, 16))
    k = normalize_kernel(rng.random((5, 5)))
    assert abs(convolve2d(img, k).mean() - img.mean()) <= 1e-12


def test_resample_constant():
    out = resample_bilinear(np.full((4, 4), 0.5), 7, 3)
    assert out.shape == (3, 7)
    np.testing.assert_allclose(out, 0.5, atol=1e-15)


def test_resample_identity():
    img = np.array([[0.0, 1.0], [0.0, 1.0]])
    out = resample_bilinear(img, 2, 2)
    np.testing.assert_array_equal(out, img)
    assert out is not img


def test_resample_midpoint():
    np.testing.assert_allclose(resample_bilinear(np.array([[0.0, 1.0]]), 3, 1), [[0.0, 0.5, 1.0]])


def test_resample_zero_size():
    with pytest.raises(DimensionError):
        resample_bilinear(np.ones((4, 4)), 0, 3)


def test_pyramid_single_level():
    img = np.ones((10, 10))
    levels = build_pyramid(img, 3)
    assert len(levels) == 1
    np.testing.assert_array_equal(levels[0][0], img)
    assert levels[0][1] == 3


def test_pyramid_sizes_for_25():
    # nearest odd integer of 25 / sqrt(2)**l: 25, 17.7, 12.5, 8.8, 6.25, 4.4, 3.1
    assert pyramid_kernel_sizes(25, np.sqrt(2)) == [25, 17, 13, 9, 7, 5, 3]
    levels = build_pyramid(np.zeros((100, 80)), 25, np.sqrt(2))
    assert [ks for _, ks in levels] == [3, 5, 7, 9, 13, 17, 25]
    assert levels[-1][0].shape == (100, 80)
    shapes = [im.shape for im, _ in levels]
    assert all(a[0] <= b[0] and a[1] <= b[1] for a, b in zip(shapes, shapes[1:]))


def test_pyramid_constant_levels():
    for im, _ in build_pyramid(np.full((50, 40), 0.3), 15):
        np.testing.assert_allclose(im, 0.3, atol=1e-14)


@pytest.mark.parametrize("size", [1, 3, 5, 9])
def test_resize_delta(size):
    np.testing.assert_array_equal(resize_kernel(delta_kernel(3), size, size), delta_kernel(size))


def test_resize_uniform():
    out = resize_kernel(np.full((3, 3), 1 / 9), 5, 5)
    assert out.shape == (5, 5)
    assert out.min() >= 0
    assert abs(out.sum() - 1) <= 1e-12


def test_resize_motion_row_stays_in_center_row():
    k = np.zeros((3, 3))
    k[1] = 1 / 3
    out = resize_kernel(k, 5, 5)
    assert abs(out[2].sum() - 1.0) <= 1e-12
    # splat oracle along columns: positions 2 + (q - 1) * 5/3
    expected = np.zeros(5)
    for q in range(3):
        pos = 2 + (q - 1) * 5 / 3
        lo = int(np.floor(pos))
        expected[lo] += (1 - (pos - lo)) / 3
        if lo + 1 < 5:
            expected[lo + 1] += (pos - lo) / 3
    np.testing.assert_allclose(out[2], expected / expected.sum(), atol=1e-12)


def test_resize_degenerate():
    with pytest.raises(DegenerateKernelError):
        resize_kernel(-np.ones((3, 3)), 5, 5)


def test_resize_even_target():
    with pytest.raises(DimensionError):
        resize_kernel(delta_kernel(3), 4, 5)


@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, (5, 5), elements=st.floats(0.0, 1.0)).filter(lambda a: a.sum() > 1e-3),
       st.sampled_from([3, 5, 7, 9, 11]), st.sampled_from([3, 5, 7, 9, 11]))
def test_resize_kernel_invariants(k, rows, cols):
    out = resize_kernel(k, rows, cols)
    assert out.shape == (rows, cols)
    assert out.min() >= 0.0
    assert abs(out.sum() - 1.0) <= 1e-12
