import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lumendepth import losses
from oracles import (
    edge_image_brute,
    finite_difference_gradient,
    multiscale_edge_loss_brute,
    ssim_brute,
)


def random_pair(seed, shape=(16, 16), scale=30.0, offset=20.0):
    rng = np.random.default_rng(seed)
    d = offset + scale * rng.random(shape)
    d_hat = offset + scale * rng.random(shape)
    return d, d_hat


def nudge_from_kinks(d, d_hat, h=1e-4):
    """Resample away from abs/max kinks so finite differences are clean."""
    for k in losses.EDGE_SPACINGS:
        g = losses.edge_image(d, k)
        g_hat = losses.edge_image(d_hat, k)
        assert np.abs(g_hat - g).min() > 10 * h
    diffs = np.stack([np.abs(losses.edge_image(d_hat, k) - losses.edge_image(d, k)) for k in (1, 2, 3)])
    top2 = np.sort(diffs, axis=0)[-2:]
    assert (top2[1] - top2[0]).min() > 10 * h  # no near-ties in the max


# ---------------------------------------------------------------------------
# edge images
# ---------------------------------------------------------------------------

def test_edge_image_constant_is_zero():
    for k in (1, 2, 3):
        assert np.all(losses.edge_image(np.full((9, 9), 37.2), k) == 0.0)


def test_edge_image_impulse_g3():
    d = np.zeros((9, 9))
    d[4, 4] = 1.0
    g3 = losses.edge_image(d, 1)
    expected_nonzero = {(4, 3), (4, 5), (3, 4), (5, 4)}
    nz = {tuple(p) for p in np.argwhere(g3 > 0)}
    assert nz == expected_nonzero
    assert all(g3[p] == 1.0 for p in expected_nonzero)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_edge_image_step_edge(k):
    h = 2.5
    d = np.zeros((12, 12))
    d[:, 6:] = h
    g = losses.edge_image(d, k)
    # the step at column boundary 6 is seen from columns 6-k .. 5+k
    hot_cols = set(range(6 - k, 6 + k))
    for c in range(12):
        expected = h if c in hot_cols else 0.0
        assert np.allclose(g[:, c], expected), (k, c)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_edge_image_matches_brute_force(k, seed):
    rng = np.random.default_rng(seed)
    d = rng.random((11, 13)) * 50
    np.testing.assert_allclose(losses.edge_image(d, k), edge_image_brute(d, k), atol=1e-12)


def test_edge_image_too_small():
    with pytest.raises(ValueError):
        losses.edge_image(np.zeros((5, 9)), 3)


# ---------------------------------------------------------------------------
# multi-scale edge loss
# ---------------------------------------------------------------------------

def test_edge_loss_identical_inputs():
    d = np.random.default_rng(0).random((9, 9)) * 40
    value, grad = losses.multiscale_edge_loss(d, d.copy())
    assert value == 0.0
    assert np.all(grad == 0.0)


def test_edge_loss_constant_offset_exact():
    # depths on a binary-fraction grid: the offset addition is exact, so
    # shared edges cancel bit-exactly
    d = np.round(np.random.default_rng(1).random((12, 12)) * 160) * 0.25
    value, _ = losses.multiscale_edge_loss(d, d + 8.0)
    assert value == 0.0


def test_edge_loss_constant_offset_float():
    d = np.random.default_rng(1).random((12, 12)) * 40
    value, _ = losses.multiscale_edge_loss(d, d + 7.2501)
    assert value <= 1e-12


def test_edge_loss_impulse_12_over_81():
    d = np.zeros((9, 9))
    d_hat = np.zeros((9, 9))
    d_hat[4, 4] = 1.0
    value, _ = losses.multiscale_edge_loss(d, d_hat)
    assert value == pytest.approx(12.0 / 81.0, abs=1e-15)
    assert value == pytest.approx(multiscale_edge_loss_brute(d, d_hat), abs=1e-12)


@pytest.mark.parametrize("seed", [3, 4])
def test_edge_loss_matches_brute_force(seed):
    d, d_hat = random_pair(seed, shape=(9, 9))
    value, _ = losses.multiscale_edge_loss(d, d_hat)
    assert value == pytest.approx(multiscale_edge_loss_brute(d, d_hat), abs=1e-12)


def test_edge_loss_symmetry_and_dominance():
    d, d_hat = random_pair(7)
    v_ab, _ = losses.multiscale_edge_loss(d, d_hat)
    v_ba, _ = losses.multiscale_edge_loss(d_hat, d)
    assert v_ab == pytest.approx(v_ba, rel=1e-12)
    single = np.abs(losses.edge_image(d_hat, 1) - losses.edge_image(d, 1)).mean()
    assert v_ab >= single - 1e-12


def test_edge_loss_dimension_mismatch():
    with pytest.raises(ValueError):
        losses.multiscale_edge_loss(np.zeros((9, 9)), np.zeros((9, 10)))


@pytest.mark.parametrize("seed", list(range(10)))
def test_edge_loss_gradient_check(seed):
    d, d_hat = random_pair(seed)
    nudge_from_kinks(d, d_hat)
    _, grad = losses.multiscale_edge_loss(d, d_hat)
    fd = finite_difference_gradient(lambda x: losses.multiscale_edge_loss(d, x)[0], d_hat)
    denom = max(np.abs(fd).max(), 1e-12)
    assert np.abs(grad - fd).max() / denom < 1e-4


# ---------------------------------------------------------------------------
# L1
# ---------------------------------------------------------------------------

def test_l1_identities():
    d = np.random.default_rng(2).random((8, 8)) * 50
    assert losses.l1_loss(d, d.copy())[0] == 0.0
    value, grad = losses.l1_loss(d, d + 1.0)
    assert value == pytest.approx(1.0, abs=1e-12)
    assert np.all(grad == 1.0 / d.size)


def test_l1_matches_direct_summation():
    d, d_hat = random_pair(11, shape=(8, 8))
    value, _ = losses.l1_loss(d, d_hat)
    assert value == pytest.approx(float(np.abs(d_hat - d).sum()) / 64, rel=1e-14)


@pytest.mark.parametrize("seed", list(range(10)))
def test_l1_gradient_check(seed):
    d, d_hat = random_pair(seed + 50)
    assert np.abs(d_hat - d).min() > 1e-3  # away from the kink
    _, grad = losses.l1_loss(d, d_hat)
    fd = finite_difference_gradient(lambda x: losses.l1_loss(d, x)[0], d_hat)
    assert np.abs(grad - fd).max() / np.abs(fd).max() < 1e-4


# ---------------------------------------------------------------------------
# SSIM
# ---------------------------------------------------------------------------

def test_ssim_identical_is_zero():
    d = np.random.default_rng(3).random((10, 10)) * 80
    value, grad = losses.ssim_loss(d, d.copy())
    assert value == pytest.approx(0.0, abs=1e-15)
    assert np.abs(grad).max() < 1e-12


def test_ssim_constant_extremes():
    d = np.zeros((8, 8))
    d_hat = np.full((8, 8), 100.0)
    value, _ = losses.ssim_loss(d, d_hat)
    expected = (1.0 - losses.SSIM_C1 / (1.0 + losses.SSIM_C1)) / 2.0
    assert value == pytest.approx(expected, abs=1e-12)
    assert value == pytest.approx(0.49995, abs=1e-5)


@pytest.mark.parametrize("seed", [5, 6, 7])
def test_ssim_matches_brute_force(seed):
    d, d_hat = random_pair(seed, shape=(12, 11))
    value, _ = losses.ssim_loss(d, d_hat)
    assert value == pytest.approx((1.0 - ssim_brute(d, d_hat)) / 2.0, abs=1e-9)


@pytest.mark.parametrize("seed", list(range(10)))
def test_ssim_gradient_check(seed):
    d, d_hat = random_pair(seed + 100)
    _, grad = losses.ssim_loss(d, d_hat)
    fd = finite_difference_gradient(lambda x: losses.ssim_loss(d, x)[0], d_hat)
    assert np.abs(grad - fd).max() / np.abs(fd).max() < 1e-4


# ---------------------------------------------------------------------------
# composite
# ---------------------------------------------------------------------------

def test_composite_identical_is_zero():
    d = np.random.default_rng(4).random((16, 16)) * 60
    value, grad = losses.composite_loss(d, d.copy())
    assert value == 0.0
    assert np.abs(grad).max() < 1e-12


def test_composite_weight_identity():
    d, d_hat = random_pair(21)
    value, _ = losses.composite_loss(d, d_hat, losses.LossWeights(lam=0.0))
    expected = losses.ssim_loss(d, d_hat)[0] + losses.multiscale_edge_loss(d, d_hat)[0]
    assert value == pytest.approx(expected, abs=1e-15)


def test_composite_termwise():
    d, d_hat = random_pair(22)
    value, _ = losses.composite_loss(d, d_hat, losses.LossWeights(lam=0.1))
    expected = (
        0.1 * losses.l1_loss(d, d_hat)[0]
        + losses.ssim_loss(d, d_hat)[0]
        + losses.multiscale_edge_loss(d, d_hat)[0]
    )
    assert value == pytest.approx(expected, abs=1e-12)


def test_loss_weights_validation():
    with pytest.raises(ValueError):
        losses.LossWeights(lam=-0.1)


# ---------------------------------------------------------------------------
# properties
# ---------------------------------------------------------------------------

@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_symmetry_and_nonnegativity(seed):
    d, d_hat = random_pair(seed)
    for fn in (losses.l1_loss, losses.ssim_loss, losses.multiscale_edge_loss):
        v_ab = fn(d, d_hat)[0]
        v_ba = fn(d_hat, d)[0]
        assert v_ab >= 0.0
        assert v_ab == pytest.approx(v_ba, rel=1e-9, abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_l1_zero_iff_identical(seed):
    d, d_hat = random_pair(seed)
    value, _ = losses.l1_loss(d, d_hat)
    if np.array_equal(d, d_hat):
        assert value == 0.0
    else:
        assert value > 0.0
