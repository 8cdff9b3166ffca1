"""Independent brute-force oracles used by the test suite.

Everything here is written as plain loops over the definitions, kept
deliberately separate from the library implementations it checks.
"""

from __future__ import annotations

import numpy as np

SSIM_C1 = 0.01**2
SSIM_C2 = 0.03**2


def edge_image_brute(d: np.ndarray, k: int) -> np.ndarray:
    """|d(r, c+k) - d(r, c-k)| + |d(r+k, c) - d(r-k, c)|, replicate padding."""
    h, w = d.shape
    out = np.zeros((h, w))
    clip_r = lambda r: min(max(r, 0), h - 1)
    clip_c = lambda c: min(max(c, 0), w - 1)
    for r in range(h):
        for c in range(w):
            horiz = d[r, clip_c(c + k)] - d[r, clip_c(c - k)]
            vert = d[clip_r(r + k), c] - d[clip_r(r - k), c]
            out[r, c] = abs(horiz) + abs(vert)
    return out


def multiscale_edge_loss_brute(d: np.ndarray, d_hat: np.ndarray) -> float:
    total = 0.0
    for r in range(d.shape[0]):
        for c in range(d.shape[1]):
            best = 0.0
            for k in (1, 2, 3):
                g = edge_image_brute(d, k)[r, c]
                g_hat = edge_image_brute(d_hat, k)[r, c]
                best = max(best, abs(g_hat - g))
            total += best
    return total / d.size


def ssim_brute(d: np.ndarray, d_hat: np.ndarray, window: int = 7) -> float:
    """Mean SSIM over valid windows on depths normalized by 100 mm."""
    x = d / 100.0
    y = d_hat / 100.0
    h, w = x.shape
    values = []
    for r in range(h - window + 1):
        for c in range(w - window + 1):
            wx = x[r : r + window, c : c + window].ravel()
            wy = y[r : r + window, c : c + window].ravel()
            mx, my = wx.mean(), wy.mean()
            vx = (wx**2).mean() - mx**2
            vy = (wy**2).mean() - my**2
            cov = (wx * wy).mean() - mx * my
            values.append(
                ((2 * mx * my + SSIM_C1) * (2 * cov + SSIM_C2))
                / ((mx**2 + my**2 + SSIM_C1) * (vx + vy + SSIM_C2))
            )
    return float(np.mean(values))


def pearson_brute(true_vals: np.ndarray, est_vals: np.ndarray) -> float:
    """Direct covariance-formula correlation coefficient."""
    t = np.asarray(true_vals, dtype=np.float64)
    e = np.asarray(est_vals, dtype=np.float64)
    tc = t - t.mean()
    ec = e - e.mean()
    return float((tc * ec).sum() / np.sqrt((tc**2).sum() * (ec**2).sum()))


def finite_difference_gradient(fn, x: np.ndarray, h: float = 1e-4) -> np.ndarray:
    """Central finite differences of a scalar function of an array."""
    x = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(x)
    flat = grad.ravel()
    xf = x.copy().ravel()
    for i in range(x.size):
        orig = xf[i]
        xf[i] = orig + h
        f_plus = fn(xf.reshape(x.shape))
        xf[i] = orig - h
        f_minus = fn(xf.reshape(x.shape))
        xf[i] = orig
        flat[i] = (f_plus - f_minus) / (2.0 * h)
    return grad


def finite_difference_at(fn, x: np.ndarray, indices: np.ndarray, h: float = 1e-3) -> np.ndarray:
    """Central differences of fn at selected flat indices of x."""
    xf = np.asarray(x, dtype=np.float64).copy().ravel()
    out = np.zeros(len(indices))
    for j, i in enumerate(indices):
        orig = xf[i]
        xf[i] = orig + h
        f_plus = fn(xf.reshape(x.shape))
        xf[i] = orig - h
        f_minus = fn(xf.reshape(x.shape))
        xf[i] = orig
        out[j] = (f_plus - f_minus) / (2.0 * h)
    return out
