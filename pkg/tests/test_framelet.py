import numpy as np
import pytest

from framedeblur.errors import DimensionError
from framedeblur.framelet import FILTERS, analyze, filter_response, synthesize


def test_constant_grid():
    c = analyze(np.full((8, 6), 0.7))
    np.testing.assert_allclose(c[0, 0], 0.7, atol=1e-12)
    mask = np.ones((3, 3), bool)
    mask[0, 0] = False
    assert np.abs(c[mask]).max() <= 1e-12


def test_zero_grid():
    assert not analyze(np.zeros((5, 5))).any()


def test_ramp_subband_is_centered_difference():
    N = 16
    g = np.tile(np.arange(N) / N, (N, 1))  # g[i, j] = j / N
    c = analyze(g)
    # direct filter sum: sum_t h0[t] over rows (=1) times h1 applied along columns
    s = np.sqrt(2) / 4
    expected = s * (np.roll(g, -1, axis=1) - np.roll(g, 1, axis=1))
    np.testing.assert_allclose(c[0, 1], expected, atol=1e-14)
    interior = c[0, 1][:, 1:-1]
    np.testing.assert_allclose(interior, s * 2 / N, atol=1e-14)


def test_round_trip_100_grids():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(100):
        g = rng.normal(size=(32, 32))
        worst = max(worst, np.abs(synthesize(analyze(g)) - g).max())
    assert worst <= 1e-10


def test_zero_coefficients():
    assert not synthesize(np.zeros((3, 3, 4, 4))).any()


def test_impulse_synthesis_is_filter_footprint():
    c = np.zeros((3, 3, 9, 9))
    c[0, 0, 4, 5] = 1.0
    out = synthesize(c)
    expected = np.zeros((9, 9))
    expected[3:6, 4:7] = np.outer(FILTERS[0], FILTERS[0])
    np.testing.assert_allclose(out, expected, atol=1e-15)


def test_energy_identity(rng):
    g = rng.normal(size=(20, 24))
    assert abs(np.sum(analyze(g) ** 2) - np.sum(g**2)) <= 1e-10 * max(1.0, np.sum(g**2))


def test_exact_adjoint(rng):
    g = rng.normal(size=(12, 10))
    C = rng.normal(size=(3, 3, 12, 10))
    assert abs(np.sum(analyze(g) * C) - np.sum(g * synthesize(C))) <= 1e-10


def test_linearity(rng):
    f, g = rng.normal(size=(2, 8, 8))
    np.testing.assert_allclose(analyze(2 * f - 3 * g), 2 * analyze(f) - 3 * analyze(g), atol=1e-13)
    C, D = rng.normal(size=(2, 3, 3, 8, 8))
    np.testing.assert_allclose(synthesize(C + D), synthesize(C) + synthesize(D), atol=1e-13)


def test_mismatched_subbands():
    bad = [[np.zeros((4, 4))] * 3, [np.zeros((4, 4))] * 3, [np.zeros((4, 4))] * 2 + [np.zeros((5, 4))]]
    with pytest.raises(DimensionError):
        synthesize(bad)
    with pytest.raises(DimensionError):
        synthesize(np.zeros((2, 3, 4, 4)))


def test_filter_masks_match_closed_forms():
    w = np.linspace(-np.pi, np.pi, 257)
    H = filter_response(w)
    np.testing.assert_allclose(H[0], np.cos(w / 2) ** 2, atol=1e-14)
    # -(sqrt(2) i / 2) sin w up to the sign fixed by the tap-order convention
    np.testing.assert_allclose(np.abs(H[1]), np.abs(np.sqrt(2) / 2 * np.sin(w)), atol=1e-14)
    np.testing.assert_allclose(H[2], np.sin(w / 2) ** 2, atol=1e-14)
    np.testing.assert_allclose(np.sum(np.abs(H) ** 2, axis=0), 1.0, atol=1e-12)
