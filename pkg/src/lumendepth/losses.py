"""Depth-training objective: point-wise L1, SSIM, and multi-scale edge loss.

Every term returns ``(value, gradient)`` where the gradient is taken with
respect to the *estimated* depth map (second argument).  All terms accept
depth maps in millimeters.

Multi-scale edge images use the symmetric differential filter

    G_p = |d(r, c+k) - d(r, c-k)| + |d(r+k, c) - d(r-k, c)|

with replicate padding at the borders, for spacings k = 1, 2, 3 (filter
supports 3x3, 5x5, 7x7).  The filter is unnormalized; magnitudes of the
horizontal and vertical differences are summed.  The per-pixel maximum
over scales breaks ties toward the smallest scale, which fixes the
subgradient routing and keeps training deterministic.

The SSIM term normalizes depths by the 100 mm range and uses a 7x7
uniform window over valid positions (no padding), constants
C1 = 0.01^2 and C2 = 0.03^2 on unit dynamic range, biased second moments.
The loss is ``clamp((1 - mean SSIM) / 2, 0, 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EDGE_SPACINGS = (1, 2, 3)

SSIM_WINDOW = 7
SSIM_C1 = 0.01**2
SSIM_C2 = 0.03**2
DEPTH_RANGE_MM = 100.0


@dataclass(frozen=True)
class LossWeights:
    """Composite-loss weights; `lam` multiplies the L1 term (default 0.1)."""

    lam: float = 0.1

    def __post_init__(self) -> None:
        if self.lam < 0.0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")


@dataclass
class EdgeImageSet:
    """Edge magnitudes of one depth map at the three filter supports."""

    g3: np.ndarray
    g5: np.ndarray
    g7: np.ndarray

    def stack(self) -> np.ndarray:
        return np.stack([self.g3, self.g5, self.g7])


def _check_pair(d: np.ndarray, d_hat: np.ndarray, min_side: int) -> tuple[np.ndarray, np.ndarray]:
    d = np.asarray(d, dtype=np.float64)
    d_hat = np.asarray(d_hat, dtype=np.float64)
    if d.ndim != 2 or d_hat.ndim != 2:
        raise ValueError(f"depth maps must be 2-D, got {d.shape} and {d_hat.shape}")
    if d.shape != d_hat.shape:
        raise ValueError(f"depth map dimensions differ: {d.shape} vs {d_hat.shape}")
    if min(d.shape) < min_side:
        raise ValueError(f"depth maps must be at least {min_side}x{min_side}, got {d.shape}")
    return d, d_hat


# ---------------------------------------------------------------------------
# edge images
# ---------------------------------------------------------------------------

def edge_image(d: np.ndarray, spacing: int) -> np.ndarray:
    """Edge magnitudes at offset `spacing`; filter support is 2*spacing+1."""
    d = np.asarray(d, dtype=np.float64)
    if spacing not in EDGE_SPACINGS:
        raise ValueError(f"spacing must be in {EDGE_SPACINGS}, got {spacing}")
    if d.ndim != 2 or min(d.shape) < 2 * spacing + 1:
        raise ValueError(f"image {d.shape} smaller than filter support {2 * spacing + 1}")
    dh, dv = _edge_diffs(d, spacing)
    return np.abs(dh) + np.abs(dv)


def edge_image_set(d: np.ndarray) -> EdgeImageSet:
    return EdgeImageSet(*(edge_image(d, k) for k in EDGE_SPACINGS))


def _edge_diffs(d: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Signed symmetric differences at offset k with replicate padding."""
    h, w = d.shape
    p = np.pad(d, k, mode="edge")
    horiz = p[k : k + h, 2 * k :] - p[k : k + h, : w]
    vert = p[2 * k :, k : k + w] - p[: h, k : k + w]
    return horiz, vert


def _edge_backward(d: np.ndarray, k: int, g_edge: np.ndarray) -> np.ndarray:
    """Gradient of sum(g_edge * edge_image(d, k)) with respect to d."""
    h, w = d.shape
    dh, dv = _edge_diffs(d, k)
    sh = np.sign(dh) * g_edge
    sv = np.sign(dv) * g_edge

    grad_p = np.zeros((h + 2 * k, w + 2 * k))
    grad_p[k : k + h, 2 * k :] += sh
    grad_p[k : k + h, : w] -= sh
    grad_p[2 * k :, k : k + w] += sv
    grad_p[: h, k : k + w] -= sv

    # fold the replicate padding back onto the border pixels (adjoint of pad)
    grad_p[:, k] += grad_p[:, :k].sum(axis=1)
    grad_p[:, k + w - 1] += grad_p[:, k + w :].sum(axis=1)
    core_cols = grad_p[:, k : k + w]
    core_cols[k] += core_cols[:k].sum(axis=0)
    core_cols[k + h - 1] += core_cols[k + h :].sum(axis=0)
    return core_cols[k : k + h].copy()


def multiscale_edge_loss(d: np.ndarray, d_hat: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean per-pixel maximum, over the three scales, of |Ghat - G|.

    The gradient flows only through the estimated map's edge images; ties
    in the per-pixel max are routed to the smallest scale.
    """
    d, d_hat = _check_pair(d, d_hat, 2 * max(EDGE_SPACINGS) + 1)
    n = d.size
    discrepancies = []
    signs = []
    for k in EDGE_SPACINGS:
        g = edge_image(d, k)
        g_hat = edge_image(d_hat, k)
        delta = g_hat - g
        discrepancies.append(np.abs(delta))
        signs.append(np.sign(delta))
    stacked = np.stack(discrepancies)
    # argmax returns the first maximal index, i.e. the smallest scale on ties
    winner = np.argmax(stacked, axis=0)
    loss = float(stacked.max(axis=0).mean())

    grad = np.zeros_like(d_hat)
    for i, k in enumerate(EDGE_SPACINGS):
        g_edge = np.where(winner == i, signs[i], 0.0) / n
        grad += _edge_backward(d_hat, k, g_edge)
    return loss, grad


# ---------------------------------------------------------------------------
# point-wise L1
# ---------------------------------------------------------------------------

def l1_loss(d: np.ndarray, d_hat: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean absolute per-pixel difference; subgradient 0 at equality."""
    d, d_hat = _check_pair(d, d_hat, 1)
    delta = d_hat - d
    return float(np.abs(delta).mean()), np.sign(delta) / d.size


# ---------------------------------------------------------------------------
# SSIM
# ---------------------------------------------------------------------------

def _box_valid(x: np.ndarray, w: int) -> np.ndarray:
    """Mean over every valid w x w window, shape (H-w+1, W-w+1)."""
    view = np.lib.stride_tricks.sliding_window_view(x, (w, w))
    return view.mean(axis=(-2, -1))


def _box_scatter(g: np.ndarray, shape: tuple[int, int], w: int) -> np.ndarray:
    """Adjoint of `_box_valid` without the 1/n factor: spread window values."""
    out = np.zeros(shape)
    gh, gw = g.shape
    for di in range(w):
        for dj in range(w):
            out[di : di + gh, dj : dj + gw] += g
    return out


def ssim_map(d: np.ndarray, d_hat: np.ndarray) -> np.ndarray:
    """Per-window SSIM on range-normalized depths (valid 7x7 windows)."""
    d, d_hat = _check_pair(d, d_hat, SSIM_WINDOW + 1)
    x = d / DEPTH_RANGE_MM
    y = d_hat / DEPTH_RANGE_MM
    w = SSIM_WINDOW
    mu_x = _box_valid(x, w)
    mu_y = _box_valid(y, w)
    xx = _box_valid(x * x, w)
    yy = _box_valid(y * y, w)
    xy = _box_valid(x * y, w)
    var_x = xx - mu_x**2
    var_y = yy - mu_y**2
    cov = xy - mu_x * mu_y
    a1 = 2.0 * mu_x * mu_y + SSIM_C1
    a2 = 2.0 * cov + SSIM_C2
    b1 = mu_x**2 + mu_y**2 + SSIM_C1
    b2 = var_x + var_y + SSIM_C2
    return (a1 * a2) / (b1 * b2)


def ssim_loss(d: np.ndarray, d_hat: np.ndarray) -> tuple[float, np.ndarray]:
    """``clamp((1 - mean SSIM) / 2, 0, 1)`` with its analytic gradient."""
    d, d_hat = _check_pair(d, d_hat, SSIM_WINDOW + 1)
    x = d / DEPTH_RANGE_MM
    y = d_hat / DEPTH_RANGE_MM
    w = SSIM_WINDOW
    n = w * w

    mu_x = _box_valid(x, w)
    mu_y = _box_valid(y, w)
    xx = _box_valid(x * x, w)
    yy = _box_valid(y * y, w)
    xy = _box_valid(x * y, w)
    var_x = xx - mu_x**2
    var_y = yy - mu_y**2
    cov = xy - mu_x * mu_y

    a1 = 2.0 * mu_x * mu_y + SSIM_C1
    a2 = 2.0 * cov + SSIM_C2
    b1 = mu_x**2 + mu_y**2 + SSIM_C1
    b2 = var_x + var_y + SSIM_C2
    denom = b1 * b2
    s = (a1 * a2) / denom
    mean_ssim = float(s.mean())
    loss = float(np.clip((1.0 - mean_ssim) / 2.0, 0.0, 1.0))

    # ds/d(mu_y, E[y^2], E[xy]) treating the three window moments of y as
    # the independent variables (var_y and cov are derived from them)
    ds_dmu_y = 2.0 * mu_x * (a2 - a1) / denom - 2.0 * mu_y * s * (b2 - b1) / denom
    ds_dey2 = -s / b2
    ds_dexy = 2.0 * a1 / denom

    n_windows = s.size
    scale = -1.0 / (2.0 * n_windows * n)  # dL/d(mean SSIM) times window-mean factor
    grad_y = scale * (
        _box_scatter(ds_dmu_y, y.shape, w)
        + 2.0 * y * _box_scatter(ds_dey2, y.shape, w)
        + x * _box_scatter(ds_dexy, y.shape, w)
    )
    return loss, grad_y / DEPTH_RANGE_MM


# ---------------------------------------------------------------------------
# composite
# ---------------------------------------------------------------------------

def composite_loss(
    d: np.ndarray,
    d_hat: np.ndarray,
    weights: LossWeights = LossWeights(),
) -> tuple[float, np.ndarray]:
    """``lam * L_d + L_S + L_e`` and the weighted sum of term gradients."""
    v_l1, g_l1 = l1_loss(d, d_hat)
    v_ssim, g_ssim = ssim_loss(d, d_hat)
    v_edge, g_edge = multiscale_edge_loss(d, d_hat)
    value = weights.lam * v_l1 + v_ssim + v_edge
    grad = weights.lam * g_l1 + g_ssim + g_edge
    return float(value), grad


def loss_terms(d: np.ndarray, d_hat: np.ndarray, weights: LossWeights = LossWeights()) -> dict[str, float]:
    """Per-term report used by the evaluation CLI."""
    v_l1, _ = l1_loss(d, d_hat)
    v_ssim, _ = ssim_loss(d, d_hat)
    v_edge, _ = multiscale_edge_loss(d, d_hat)
    return {
        "l1": v_l1,
        "ssim": v_ssim,
        "edge": v_edge,
        "composite": weights.lam * v_l1 + v_ssim + v_edge,
    }
