"""Sphere-tracing renderer for the two image domains and ground-truth depth.

The light source is co-located with the camera and points along each
pixel's viewing ray, so the shading angle theta is the angle between the
surface normal and the (reversed) ray direction.  The Lambertian domain
renders the pure diffuse value ``rho * cos(theta)``; the real-like domain
adds a Phong specular lobe and a seeded procedural texture that tints the
surface red-dominantly.  There is no distance falloff and no global
illumination.

Depth is the ray length to the hit point, in mm, with a hard ceiling of
100 mm: rays that march past the ceiling are misses and get depth 100 and
intensity 0.  Both domains of the same scene and camera share identical
geometry, so a degenerate real-like material (no specular, no texture)
reproduces the Lambertian render bit-exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import imgio
from .scenegen import (
    Camera,
    Material,
    Scene,
    WallScene,
    camera_rays,
    make_scene,
    sample_cameras,
    scene_to_dict,
    camera_to_dict,
    sdf,
    sdf_normal,
    sdf_pruned,
    unit,
)

DEPTH_CEILING_MM = 100.0
HIT_TOLERANCE_MM = 4e-4
NORMAL_STEP_MM = 1e-3
MAX_MARCH_STEPS = 512
# minimum march step; grazing rays would otherwise stall.  Overshoots are
# bounded by this value and resolved exactly by bisection, so it only has
# to stay below the thinnest scene feature.
_STEP_FLOOR_MM = 0.1
# straggler fallback: forward scan pitch and bisection iterations
_SCAN_STEP_MM = 0.25
_BISECT_ITERS = 24

# channel weights of the texture attenuation; red is damped least, which
# gives the textured surface its red-dominant tint
_TEXTURE_CHANNEL_WEIGHTS = np.array([0.35, 1.0, 0.85])


@dataclass
class ShadingSample:
    """Geometry of a single ray-surface hit."""

    hit_point: np.ndarray
    normal: np.ndarray
    ray_direction: np.ndarray
    depth: float
    cos_theta: float


@dataclass
class TraceResult:
    """Vectorized trace of a full image: per-pixel hit geometry."""

    hit: np.ndarray          # (H, W) bool
    depth: np.ndarray        # (H, W) mm; DEPTH_CEILING_MM where missed
    points: np.ndarray       # (H, W, 3) hit points (undefined where missed)
    normals: np.ndarray      # (H, W, 3) unit normals (undefined where missed)
    cos_theta: np.ndarray    # (H, W) N . (-ray), clipped to [0, 1]; 0 where missed
    directions: np.ndarray   # (H, W, 3) unit ray directions


def trace_rays(scene: Scene | WallScene, origin: np.ndarray, directions: np.ndarray) -> TraceResult:
    """Sphere-trace a bundle of rays from a common origin.

    `directions` has shape (..., 3).  The SDF magnitude is a safe step
    length on either side of the surface (unit Lipschitz), so the march
    starts inside the lumen (negative SDF) and walks to the zero crossing.
    """
    dirs = np.asarray(directions, dtype=np.float64)
    shape = dirs.shape[:-1]
    flat_dirs = dirs.reshape(-1, 3)
    n = len(flat_dirs)

    t = np.zeros(n)
    prev_t = np.zeros(n)
    active = np.ones(n, dtype=bool)
    hit = np.zeros(n, dtype=bool)
    bracketed = np.zeros(n, dtype=bool)
    for _ in range(MAX_MARCH_STEPS):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        p = origin[None, :] + t[idx, None] * flat_dirs[idx]
        s = sdf_pruned(scene, p).astype(np.float64)

        converged = np.abs(s) <= HIT_TOLERANCE_MM
        hit[idx[converged]] = True
        active[idx[converged]] = False

        # step-floor overshoot landed inside the wall: the crossing is
        # bracketed by [prev_t, t], resolved below by bisection
        overshot = (s > HIT_TOLERANCE_MM) & ~converged
        bracketed[idx[overshot]] = True
        active[idx[overshot]] = False

        marching = idx[~converged & ~overshot]
        step = np.maximum(np.abs(s[~converged & ~overshot]), _STEP_FLOOR_MM)
        prev_t[marching] = t[marching]
        t[marching] += step
        active[marching[t[marching] > DEPTH_CEILING_MM]] = False

    if bracketed.any():
        idx = np.nonzero(bracketed)[0]
        t[idx] = _bisect(scene, origin, flat_dirs[idx], prev_t[idx], t[idx])
        hit[idx] = True

    if active.any():
        # leftover grazing rays: fixed-pitch forward scan plus bisection
        idx = np.nonzero(active)[0]
        t_hit, found = _scan_and_bisect(scene, origin, flat_dirs[idx], t[idx])
        t[idx[found]] = t_hit[found]
        hit[idx[found]] = True

    depth = np.where(hit, np.minimum(t, DEPTH_CEILING_MM), DEPTH_CEILING_MM)
    points = origin[None, :] + depth[:, None] * flat_dirs
    normals = np.zeros_like(flat_dirs)
    cos_theta = np.zeros(n)
    if hit.any():
        hp = points[hit]
        nrm = sdf_normal(scene, hp, h=NORMAL_STEP_MM, pruned=True)
        normals[hit] = nrm
        cos_theta[hit] = np.clip(np.einsum("ij,ij->i", nrm, -flat_dirs[hit]), 0.0, 1.0)

    return TraceResult(
        hit=hit.reshape(shape),
        depth=depth.reshape(shape),
        points=points.reshape(shape + (3,)),
        normals=normals.reshape(shape + (3,)),
        cos_theta=cos_theta.reshape(shape),
        directions=dirs,
    )


def _bisect(
    scene: Scene | WallScene,
    origin: np.ndarray,
    dirs: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
) -> np.ndarray:
    """Bisect SDF zero crossings bracketed by [lo, hi] per ray."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(_BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        s_mid = sdf_pruned(scene, origin[None, :] + mid[:, None] * dirs)
        inside = s_mid < 0.0
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return 0.5 * (lo + hi)


def _scan_and_bisect(
    scene: Scene | WallScene,
    origin: np.ndarray,
    dirs: np.ndarray,
    t_start: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Find the first SDF zero crossing in (t_start, ceiling] per ray.

    Samples at `_SCAN_STEP_MM` pitch (finer than any scene feature) to
    bracket the crossing, then bisects the bracket.  Returns hit
    parameters and a found mask; unbracketed rays are misses.
    """
    m = len(dirs)
    n_steps = int(np.ceil(DEPTH_CEILING_MM / _SCAN_STEP_MM)) + 1
    offsets = np.arange(1, n_steps + 1) * _SCAN_STEP_MM
    ts = np.minimum(t_start[:, None] + offsets[None, :], DEPTH_CEILING_MM)
    pts = origin[None, None, :] + ts[:, :, None] * dirs[:, None, :]
    values = sdf_pruned(scene, pts.reshape(-1, 3)).astype(np.float64).reshape(m, n_steps)

    crossed = values >= 0.0
    found = crossed.any(axis=1)
    first = np.argmax(crossed, axis=1)
    hi = ts[np.arange(m), first]
    lo = np.where(first > 0, ts[np.arange(m), np.maximum(first - 1, 0)], t_start)
    t_hit = _bisect(scene, origin, dirs, lo, hi)
    return t_hit, found & (t_hit <= DEPTH_CEILING_MM)


def trace_image(scene: Scene | WallScene, camera: Camera) -> TraceResult:
    """Trace one ray through every pixel of `camera`."""
    return trace_rays(scene, camera.position, camera_rays(camera))


def trace(scene: Scene | WallScene, camera: Camera, pixel: tuple[int, int]) -> ShadingSample | None:
    """Trace a single pixel; returns None on a miss."""
    from .scenegen import camera_ray

    origin, direction = camera_ray(camera, pixel)
    result = trace_rays(scene, origin, direction[None, :])
    if not result.hit[0]:
        return None
    return ShadingSample(
        hit_point=result.points[0],
        normal=result.normals[0],
        ray_direction=direction,
        depth=float(result.depth[0]),
        cos_theta=float(result.cos_theta[0]),
    )


# ---------------------------------------------------------------------------
# procedural texture (seeded ridged value noise, two octaves)
# ---------------------------------------------------------------------------

def _lattice_hash(ix: np.ndarray, iy: np.ndarray, iz: np.ndarray, seed: int) -> np.ndarray:
    h = (
        ix.astype(np.uint64) * np.uint64(73856093)
        ^ iy.astype(np.uint64) * np.uint64(19349663)
        ^ iz.astype(np.uint64) * np.uint64(83492791)
        ^ np.uint64(seed & 0xFFFFFFFF) * np.uint64(2654435761)
    ) & np.uint64(0xFFFFFFFF)
    h ^= h >> np.uint64(16)
    h = (h * np.uint64(0x7FEB352D)) & np.uint64(0xFFFFFFFF)
    h ^= h >> np.uint64(15)
    h = (h * np.uint64(0x846CA68B)) & np.uint64(0xFFFFFFFF)
    h ^= h >> np.uint64(16)
    return h.astype(np.float64) / float(0xFFFFFFFF)


def _value_noise(points: np.ndarray, scale_mm: float, seed: int) -> np.ndarray:
    """Trilinear value noise in [0, 1] on a lattice of pitch `scale_mm`."""
    q = np.asarray(points, dtype=np.float64) / scale_mm
    base = np.floor(q)
    frac = q - base
    w = frac * frac * (3.0 - 2.0 * frac)  # smoothstep fade
    ib = base.astype(np.int64)
    out = np.zeros(q.shape[:-1])
    for dx in (0, 1):
        for dy in (0, 1):
            for dz in (0, 1):
                corner = _lattice_hash(ib[..., 0] + dx, ib[..., 1] + dy, ib[..., 2] + dz, seed)
                weight = (
                    (w[..., 0] if dx else 1.0 - w[..., 0])
                    * (w[..., 1] if dy else 1.0 - w[..., 1])
                    * (w[..., 2] if dz else 1.0 - w[..., 2])
                )
                out += corner * weight
    return out


def texture_field(points: np.ndarray, seed: int) -> np.ndarray:
    """Ridged two-octave noise in [0, 1] evaluated at surface points (mm)."""
    n1 = 1.0 - np.abs(2.0 * _value_noise(points, 6.0, seed) - 1.0)
    n2 = 1.0 - np.abs(2.0 * _value_noise(points, 2.5, seed + 101) - 1.0)
    return np.clip(0.65 * n1 + 0.35 * n2, 0.0, 1.0)


# ---------------------------------------------------------------------------
# shading
# ---------------------------------------------------------------------------

def render_lambertian(
    scene: Scene | WallScene,
    camera: Camera,
    trace_result: TraceResult | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Pure diffuse render plus exact depth map.

    Requires a Lambertian material (no specular, no texture); per-pixel
    gray value is ``rho * cos(theta)`` replicated to RGB.
    """
    if not scene.material.is_lambertian:
        raise ValueError(
            "render_lambertian requires a Lambertian material "
            f"(spec_strength={scene.material.spec_strength}, "
            f"texture_amplitude={scene.material.texture_amplitude}); "
            "use Material.lambertian() to strip specular and texture"
        )
    if trace_result is None:
        trace_result = trace_image(scene, camera)
    cos_theta = np.where(trace_result.hit, trace_result.cos_theta, 0.0)
    phi = scene.material.rho * cos_theta
    image = np.repeat(phi[:, :, None], 3, axis=2)
    return image, trace_result.depth.copy()


def render_reallike(
    scene: Scene | WallScene,
    camera: Camera,
    trace_result: TraceResult | None = None,
) -> np.ndarray:
    """Dichromatic render: textured diffuse term plus Phong specular lobe.

    Per channel c: ``rho * T_c * cos(theta) + k_s * cos(theta)**alpha``
    where ``T_c = 1 - amplitude * weight_c * noise`` stays in
    ``[1 - amplitude, 1]``.  A degenerate material reproduces
    :func:`render_lambertian` bit-exactly.
    """
    material = scene.material
    if trace_result is None:
        trace_result = trace_image(scene, camera)
    cos_theta = np.where(trace_result.hit, trace_result.cos_theta, 0.0)
    diffuse_gray = material.rho * cos_theta

    if material.texture_amplitude > 0.0:
        noise = texture_field(trace_result.points, material.texture_seed)
        atten = 1.0 - material.texture_amplitude * noise[:, :, None] * _TEXTURE_CHANNEL_WEIGHTS
        image = diffuse_gray[:, :, None] * atten
    else:
        image = np.repeat(diffuse_gray[:, :, None], 3, axis=2)

    if material.spec_strength > 0.0:
        spec = material.spec_strength * cos_theta**material.spec_exponent
        image = image + spec[:, :, None]

    image = np.clip(image, 0.0, 1.0)
    image = np.where(trace_result.hit[:, :, None], image, 0.0)
    return image


# ---------------------------------------------------------------------------
# dataset generation
# ---------------------------------------------------------------------------

def render_dataset(
    scenes: list[Scene],
    poses_per_scene: int,
    out_dir: str | Path,
    seed: int,
    resolution: int = 64,
    fov_deg: float = 90.0,
    depth_for_reallike: bool = False,
) -> imgio.Manifest:
    """Render every scene from seeded poses and write a dataset.

    Per pose this writes a Lambertian image with its paired depth map and
    an unpaired real-like image of the same geometry.  With
    `depth_for_reallike`, real-like entries get their own copy of the
    ground-truth depth (needed by the evaluation experiments; Lambertian
    surface translation training ignores it).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    entries: list[imgio.ManifestEntry] = []
    for scene_idx, scene in enumerate(scenes):
        lam_scene = Scene(
            centerline=scene.centerline,
            base_radius=scene.base_radius,
            fold_amplitude=scene.fold_amplitude,
            fold_frequency=scene.fold_frequency,
            polyps=scene.polyps,
            material=scene.material.lambertian(),
            family=scene.family,
            seed=scene.seed,
        )
        cameras = sample_cameras(scene, poses_per_scene, seed=[seed, scene_idx], resolution=resolution, fov_deg=fov_deg)
        for pose_idx, camera in enumerate(cameras):
            stem = f"scene{scene_idx:02d}_pose{pose_idx:02d}"
            trace_result = trace_image(scene, camera)
            lam_image, depth = render_lambertian(lam_scene, camera, trace_result=trace_result)
            real_image = render_reallike(scene, camera, trace_result=trace_result)

            lam_path = f"{stem}_lam.ppm"
            depth_path = f"{stem}_depth.pgm"
            real_path = f"{stem}_real.ppm"
            imgio.write_color(lam_image, out_dir / lam_path)
            imgio.write_depth(depth, out_dir / depth_path)
            imgio.write_color(real_image, out_dir / real_path)

            scene_doc = scene_to_dict(scene)
            camera_doc = camera_to_dict(camera)
            entries.append(
                imgio.ManifestEntry(
                    image=lam_path,
                    domain=imgio.DOMAIN_LAMBERTIAN,
                    depth=depth_path,
                    label=scene.family,
                    scene=scene_doc,
                    camera=camera_doc,
                )
            )
            real_depth_path = None
            if depth_for_reallike:
                real_depth_path = f"{stem}_real_depth.pgm"
                imgio.write_depth(depth, out_dir / real_depth_path)
            entries.append(
                imgio.ManifestEntry(
                    image=real_path,
                    domain=imgio.DOMAIN_REALLIKE,
                    depth=real_depth_path,
                    label=scene.family,
                    scene=scene_doc,
                    camera=camera_doc,
                )
            )
    manifest = imgio.Manifest(seed=seed, entries=entries)
    imgio.write_manifest(manifest, out_dir / "manifest.json")
    return manifest


def make_default_scenes(n_scenes: int, seed: int) -> list[Scene]:
    """n scenes cycling through the three families (desk default: 6)."""
    return [make_scene(family=i % 3, seed=seed + i) for i in range(n_scenes)]


def make_wall_scene(distance: float = 50.0, material: Material | None = None) -> WallScene:
    """Flat-wall test scene used by the renderer and solver oracles."""
    return WallScene(distance=distance, material=material or Material(rho=0.8))
