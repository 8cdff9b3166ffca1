"""Variational shape-from-shading for the Lambertian domain.

Recovers a depth map from a single diffuse image with known reflectance
by minimizing

    E(z) = mean_data (rho * cos(theta)(z, p) - phi_p)^2
         + w * mean_interior ||Lap z||^2

where ``cos(theta)`` is computed from the depth-induced surface normal
and the per-pixel view ray (light co-located with the camera), and the
Laplacian penalty encodes the smooth-and-continuous surface assumption.

The solver state is perspective depth along the camera's forward axis:
pixel p with unit ray d_p corresponds to the 3-D point

    P_p = origin + z_p * d_p / (d_p . forward)

so a fronto-parallel wall is the constant state, which makes the ground
truth of the flat-wall test an exact stationary point (the Laplacian of a
constant vanishes and the photometric residual is zero).  The returned
depth map is converted back to ray length to match the renderer's
convention.

Two analysis facts shape the solver.  First, with the light co-located
with the camera and no distance falloff, the data term is *exactly*
invariant under global rescaling of the depth state (scaling all z scales
the surface about the camera origin, which leaves every normal direction
and every view ray unchanged).  The metric scale of the reconstruction
therefore comes entirely from the initialization anchor; gradient descent
projects out the scale-gauge direction (the data gradient is orthogonal
to it analytically; only the smoothness term would otherwise slowly
collapse the scale toward zero).  Second, the Laplacian penalty is
evaluated on range-normalized depth (z / 100) so both objective terms are
dimensionless and the default weight keeps the penalty subordinate to the
photometric term.

Optimization is gradient descent with a backtracking line search
(objective non-increasing across accepted iterations) and a growth factor
on acceptance, run coarse-to-fine over a resolution pyramid.  Pixels with
zero intensity (misses) and pixels whose normal stencil touches one are
excluded from the data term and evolve under the smoothness term alone.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .scenegen import Camera, camera_rays


class SfsDomainWarning(UserWarning):
    """Intensity outside the Lambertian range [0, rho]."""


# the Laplacian penalty acts on depth normalized by this range, keeping
# both objective terms dimensionless
_LAP_SCALE_MM = 100.0


@dataclass(frozen=True)
class SfsOptions:
    smoothness_weight: float = 0.1
    max_iterations: int = 800  # per pyramid level
    step_size: float = 20.0
    convergence_tol: float = 1e-9  # relative objective decrease
    fix_scale_gauge: bool = True
    coarse_to_fine: bool = True

    def __post_init__(self) -> None:
        if self.smoothness_weight < 0.0:
            raise ValueError("smoothness_weight must be >= 0")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.step_size <= 0.0:
            raise ValueError("step_size must be positive")


@dataclass
class SfsResult:
    depth: np.ndarray          # ray-length depth map, mm, clipped to [0, 100]
    axial_depth: np.ndarray    # solver state: depth along the forward axis
    converged: bool
    diverged: bool
    iterations: int
    objective: float
    objective_history: list[float]


def estimate_theta(phi: np.ndarray | float, rho: float) -> np.ndarray | float:
    """Shading angle from intensity: arccos(phi / rho), phi clamped to [0, rho]."""
    if rho <= 0.0:
        raise ValueError(f"rho must be positive, got {rho}")
    phi_arr = np.asarray(phi, dtype=np.float64)
    if np.any(phi_arr < 0.0) or np.any(phi_arr > rho * (1.0 + 1e-6)):
        warnings.warn(
            f"intensity outside [0, {rho:g}]; clamping before arccos",
            SfsDomainWarning,
            stacklevel=2,
        )
    theta = np.arccos(np.clip(phi_arr, 0.0, rho) / rho)
    return float(theta) if np.isscalar(phi) else theta


def _axis_scaled_rays(camera: Camera) -> tuple[np.ndarray, np.ndarray]:
    """Unit rays and rays rescaled to unit forward component."""
    dirs = camera_rays(camera)
    denom = dirs @ camera.forward
    return dirs, dirs / denom[:, :, None]


def sfs_objective(
    z: np.ndarray,
    phi: np.ndarray,
    camera: Camera,
    rho: float,
    smoothness_weight: float,
) -> tuple[float, np.ndarray]:
    """Objective value and its analytic gradient with respect to `z`.

    `z` is the axial-depth state, `phi` the observed intensity.
    """
    dirs, dd = _axis_scaled_rays(camera)
    view = -dirs  # unit vector from surface toward the camera

    points = camera.position[None, None, :] + z[:, :, None] * dd
    t_col = 0.5 * (points[1:-1, 2:] - points[1:-1, :-2])
    t_row = 0.5 * (points[2:, 1:-1] - points[:-2, 1:-1])
    m = np.cross(t_col, t_row)
    m_norm = np.linalg.norm(m, axis=-1)
    m_norm = np.maximum(m_norm, 1e-30)
    u = np.einsum("ijk,ijk->ij", m, view[1:-1, 1:-1]) / m_norm

    lit = phi > 0.0
    mask = (
        lit[1:-1, 1:-1]
        & lit[1:-1, 2:]
        & lit[1:-1, :-2]
        & lit[2:, 1:-1]
        & lit[:-2, 1:-1]
    )
    resid = np.where(mask, rho * u - phi[1:-1, 1:-1], 0.0)
    e_data = float((resid**2).sum())

    zn = z / _LAP_SCALE_MM
    lap = zn[1:-1, 2:] + zn[1:-1, :-2] + zn[2:, 1:-1] + zn[:-2, 1:-1] - 4.0 * zn[1:-1, 1:-1]
    e_smooth = smoothness_weight * float((lap**2).sum())
    value = e_data + e_smooth

    # data-term gradient: chain through u = (m . v) / |m|, m = t_col x t_row
    coeff = 2.0 * rho * resid
    m_hat = m / m_norm[:, :, None]
    g_m = coeff[:, :, None] * (view[1:-1, 1:-1] - u[:, :, None] * m_hat) / m_norm[:, :, None]
    g_tc = np.cross(t_row, g_m)
    g_tr = np.cross(g_m, t_col)

    grad_points = np.zeros_like(points)
    grad_points[1:-1, 2:] += 0.5 * g_tc
    grad_points[1:-1, :-2] -= 0.5 * g_tc
    grad_points[2:, 1:-1] += 0.5 * g_tr
    grad_points[:-2, 1:-1] -= 0.5 * g_tr
    grad = np.einsum("ijk,ijk->ij", grad_points, dd)

    g_lap = (2.0 * smoothness_weight / _LAP_SCALE_MM) * lap
    grad[1:-1, 2:] += g_lap
    grad[1:-1, :-2] += g_lap
    grad[2:, 1:-1] += g_lap
    grad[:-2, 1:-1] += g_lap
    grad[1:-1, 1:-1] -= 4.0 * g_lap

    return value, grad


def _objective_value(z, phi, camera, rho, weight) -> float:
    # value-only evaluation for the line search (cheaper than the gradient)
    dirs, dd = _axis_scaled_rays(camera)
    points = camera.position[None, None, :] + z[:, :, None] * dd
    t_col = 0.5 * (points[1:-1, 2:] - points[1:-1, :-2])
    t_row = 0.5 * (points[2:, 1:-1] - points[:-2, 1:-1])
    m = np.cross(t_col, t_row)
    m_norm = np.maximum(np.linalg.norm(m, axis=-1), 1e-30)
    u = np.einsum("ijk,ijk->ij", m, -dirs[1:-1, 1:-1]) / m_norm
    lit = phi > 0.0
    mask = (
        lit[1:-1, 1:-1] & lit[1:-1, 2:] & lit[1:-1, :-2] & lit[2:, 1:-1] & lit[:-2, 1:-1]
    )
    resid = np.where(mask, rho * u - phi[1:-1, 1:-1], 0.0)
    zn = z / _LAP_SCALE_MM
    lap = zn[1:-1, 2:] + zn[1:-1, :-2] + zn[2:, 1:-1] + zn[:-2, 1:-1] - 4.0 * zn[1:-1, 1:-1]
    return float((resid**2).sum()) + weight * float((lap**2).sum())


def sfs_reconstruct(
    image: np.ndarray,
    camera: Camera,
    rho: float,
    opts: SfsOptions = SfsOptions(),
    init: np.ndarray | None = None,
) -> SfsResult:
    """Reconstruct a ray-length depth map from a Lambertian render."""
    if rho <= 0.0:
        raise ValueError(f"rho must be positive, got {rho}")
    image = np.asarray(image, dtype=np.float64)
    phi = image.mean(axis=2) if image.ndim == 3 else image
    if phi.shape != (camera.resolution, camera.resolution):
        raise ValueError(f"image {phi.shape} does not match camera resolution {camera.resolution}")

    if init is None:
        z = np.full(phi.shape, 100.0 * (1.0 - float(phi.mean()) / rho))
    else:
        z = np.asarray(init, dtype=np.float64).copy()
        if z.shape != phi.shape:
            raise ValueError("init shape does not match image")

    # coarse-to-fine: halve the camera resolution while even and >= 32
    levels = [camera.resolution]
    if opts.coarse_to_fine:
        while levels[-1] % 2 == 0 and levels[-1] >= 32:
            levels.append(levels[-1] // 2)
    levels.reverse()

    phis = {camera.resolution: phi}
    for res in levels[-2::-1]:
        phis[res] = _downsample_phi(phis[res * 2])
    z_level = _downsample_state(z, camera.resolution // levels[0])

    history: list[float] = []
    converged = diverged = False
    total_iters = 0
    value = np.inf
    for i, res in enumerate(levels):
        cam_level = Camera(camera.position, camera.forward, camera.up, camera.fov_deg, res)
        z_level, value, level_hist, converged, diverged, iters = _descend(
            z_level, phis[res], cam_level, rho, opts
        )
        history.extend(level_hist)
        total_iters += iters
        if diverged:
            break
        if i + 1 < len(levels):
            z_level = np.repeat(np.repeat(z_level, 2, axis=0), 2, axis=1)

    dirs, _ = _axis_scaled_rays(camera)
    ray_scale = 1.0 / (dirs @ camera.forward)
    depth = np.clip(z_level * ray_scale, 0.0, 100.0)
    return SfsResult(
        depth=depth,
        axial_depth=z_level,
        converged=converged and not diverged,
        diverged=diverged,
        iterations=total_iters,
        objective=value,
        objective_history=history,
    )


def _downsample_phi(phi: np.ndarray) -> np.ndarray:
    h, w = phi.shape
    blocks = phi.reshape(h // 2, 2, w // 2, 2)
    mean = blocks.mean(axis=(1, 3))
    all_lit = (blocks > 0.0).all(axis=(1, 3))
    return np.where(all_lit, mean, 0.0)


def _downsample_state(z: np.ndarray, factor: int) -> np.ndarray:
    if factor == 1:
        return z.copy()
    h, w = z.shape
    return z.reshape(h // factor, factor, w // factor, factor).mean(axis=(1, 3))


def _descend(
    z: np.ndarray,
    phi: np.ndarray,
    camera: Camera,
    rho: float,
    opts: SfsOptions,
) -> tuple[np.ndarray, float, list[float], bool, bool, int]:
    """Projected gradient descent with backtracking at one pyramid level."""
    weight = opts.smoothness_weight
    value, grad = sfs_objective(z, phi, camera, rho, weight)
    history = [value]
    alpha = opts.step_size
    converged = False
    diverged = not np.isfinite(value)
    iterations = 0

    for iterations in range(1, opts.max_iterations + 1):
        direction = grad
        if opts.fix_scale_gauge:
            # remove the exact scale-gauge null direction (z itself); the
            # data gradient is orthogonal to it analytically, so this only
            # stops the smoothness term from shrinking the global scale
            z_sq = float((z**2).sum())
            if z_sq > 0.0:
                direction = grad - (float((grad * z).sum()) / z_sq) * z
        g_sq = float((grad * direction).sum())
        if g_sq <= 0.0:
            converged = True
            break
        accepted = False
        for _ in range(60):
            z_new = z - alpha * direction
            v_new = _objective_value(z_new, phi, camera, rho, weight)
            if np.isfinite(v_new) and v_new <= value - 1e-4 * alpha * g_sq:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            converged = True  # no further progress along the descent direction
            break
        rel_decrease = (value - v_new) / max(abs(value), 1e-30)
        z = z_new
        value, grad = sfs_objective(z, phi, camera, rho, weight)
        history.append(value)
        alpha *= 1.3
        if not np.isfinite(value):
            diverged = True
            break
        if rel_decrease < opts.convergence_tol:
            converged = True
            break

    return z, value, history, converged, diverged, iterations
