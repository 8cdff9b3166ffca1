"""Procedural hollow-organ scenes and endoscope-style cameras.

A scene is a tube around a cubic-spline centerline with a fold-modulated
radius and optional polyp bumps, represented as a signed distance field
(SDF).  The SDF is negative strictly inside the lumen and positive in the
wall, and is built exclusively from unit-Lipschitz pieces (point-sphere
distances combined with min / quadratic smooth-max), so the sphere tracer
in :mod:`lumendepth.render` can use the SDF value directly as a safe step.

Three scene families are generated, geometrically separable by their
depth statistics:

* family 0 ``straight-wide``: long straight tube, large radius; looking
  down the bore exceeds the 100 mm depth ceiling (miss pixels);
* family 1 ``curved-narrow``: strongly bent tube, small radius; near
  walls everywhere, the bend occludes the bore;
* family 2 ``terminal-pouch``: short tube with a closed rounded end
  within viewing distance.

All randomness is drawn from ``numpy.random.default_rng`` seeded by the
``(family, seed)`` pair, so scene construction is deterministic across
runs and thread counts.  Distances are millimeters throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

FAMILY_NAMES = {0: "straight-wide", 1: "curved-narrow", 2: "terminal-pouch"}

# sampling density of the centerline polyline backing the SDF
_SAMPLE_SPACING_MM = 0.35
_MIN_SAMPLES = 192
_MAX_SAMPLES = 2048

# quadratic smooth-max blending radius for polyps
_POLYP_BLEND_MM = 1.5

# pruned SDF queries: coarse anchor stride and fine window half-width
_ANCHOR_STRIDE = 8
_WINDOW_HALF = _ANCHOR_STRIDE + 3


def unit(v: np.ndarray) -> np.ndarray:
    """Normalize the last axis to unit length."""
    v = np.asarray(v, dtype=np.float64)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


@dataclass(frozen=True)
class Material:
    """Surface reflection parameters of the dichromatic model.

    ``rho`` is the diffuse reflectance; ``spec_strength`` and
    ``spec_exponent`` shape the specular lobe; ``texture_amplitude``
    scales the procedural surface texture.  A Lambertian material has
    zero specular strength and zero texture amplitude.
    """

    rho: float
    spec_strength: float = 0.0
    spec_exponent: float = 1.0
    texture_amplitude: float = 0.0
    texture_seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.rho <= 1.0:
            raise ValueError(f"rho must be in (0, 1], got {self.rho}")
        if self.spec_strength < 0.0:
            raise ValueError(f"spec_strength must be >= 0, got {self.spec_strength}")
        if self.spec_exponent < 1.0:
            raise ValueError(f"spec_exponent must be >= 1, got {self.spec_exponent}")
        if not 0.0 <= self.texture_amplitude < 1.0:
            raise ValueError(f"texture_amplitude must be in [0, 1), got {self.texture_amplitude}")

    @property
    def is_lambertian(self) -> bool:
        return self.spec_strength == 0.0 and self.texture_amplitude == 0.0

    def lambertian(self) -> "Material":
        """Degenerate copy with specular and texture removed."""
        return Material(rho=self.rho)


@dataclass(eq=False)
class Scene:
    """Tube scene: spline centerline, folded radius, polyps, material."""

    centerline: np.ndarray  # (K, 3) control points, mm
    base_radius: float
    fold_amplitude: float
    fold_frequency: float  # cycles per mm of arclength
    polyps: tuple[tuple[np.ndarray, float], ...]
    material: Material
    family: int
    seed: int = 0

    def __post_init__(self) -> None:
        self.centerline = np.asarray(self.centerline, dtype=np.float64)
        if self.centerline.ndim != 2 or self.centerline.shape[1] != 3 or len(self.centerline) < 2:
            raise ValueError("centerline must be a (K>=2, 3) array of control points")
        if self.base_radius <= 0.0:
            raise ValueError(f"base_radius must be positive, got {self.base_radius}")
        if not 0.0 <= self.fold_amplitude <= 0.5:
            raise ValueError(f"fold_amplitude must be in [0, 0.5], got {self.fold_amplitude}")
        if self.fold_frequency < 0.0:
            raise ValueError("fold_frequency must be >= 0")
        for center, radius in self.polyps:
            if radius >= self.base_radius:
                raise ValueError(f"polyp radius {radius} must be smaller than base radius")
        # keep |dr/ds| < 1 so the sphere-sampled SDF stays unit-Lipschitz
        slope = self.base_radius * self.fold_amplitude * 2.0 * math.pi * self.fold_frequency
        if slope >= 0.9:
            raise ValueError(f"fold slope {slope:.3f} too steep (>= 0.9); reduce amplitude or frequency")
        if self.family not in FAMILY_NAMES:
            raise ValueError(f"family must be one of {sorted(FAMILY_NAMES)}, got {self.family}")

    @cached_property
    def _spine(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Dense centerline samples: (points (M,3), radii (M,), arclen (M,))."""
        length = polyline_length(_catmull_rom(self.centerline, np.linspace(0.0, 1.0, 512)))
        m = int(np.clip(round(length / _SAMPLE_SPACING_MM), _MIN_SAMPLES, _MAX_SAMPLES))
        u = np.linspace(0.0, 1.0, m)
        pts = _catmull_rom(self.centerline, u)
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        arclen = np.concatenate([[0.0], np.cumsum(seg)])
        radii = self.base_radius * (
            1.0 + self.fold_amplitude * np.sin(2.0 * math.pi * self.fold_frequency * arclen)
        )
        return pts, radii, arclen

    @cached_property
    def _spine_f32(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        pts, radii, _ = self._spine
        pts32 = pts.astype(np.float32)
        radii32 = radii.astype(np.float32)
        return pts32, radii32, np.einsum("ij,ij->i", pts32, pts32)

    @cached_property
    def _anchors(self) -> tuple[np.ndarray, np.ndarray]:
        """Coarse spine subsample (indices, points) for pruned queries."""
        pts = self._spine[0]
        idx = np.arange(0, len(pts), _ANCHOR_STRIDE)
        return idx, pts[idx]

    @property
    def spine_points(self) -> np.ndarray:
        return self._spine[0]

    @property
    def spine_radii(self) -> np.ndarray:
        return self._spine[1]

    @property
    def length(self) -> float:
        return float(self._spine[2][-1])

    def centerline_point(self, u: float | np.ndarray) -> np.ndarray:
        return _catmull_rom(self.centerline, np.atleast_1d(np.asarray(u, dtype=np.float64))).squeeze()

    def centerline_tangent(self, u: float) -> np.ndarray:
        h = 1e-4
        a = self.centerline_point(max(0.0, u - h))
        b = self.centerline_point(min(1.0, u + h))
        return unit(b - a)

    def local_radius(self, u: float) -> float:
        pts, radii, _ = self._spine
        p = self.centerline_point(u)
        return float(radii[np.argmin(np.linalg.norm(pts - p, axis=1))])


@dataclass(eq=False)
class WallScene:
    """Degenerate test scene: a flat wall perpendicular to +z at `distance`."""

    distance: float
    material: Material

    def __post_init__(self) -> None:
        if self.distance <= 0.0:
            raise ValueError("wall distance must be positive")


@dataclass(eq=False)
class Camera:
    """Pinhole camera with a square image plane."""

    position: np.ndarray
    forward: np.ndarray
    up: np.ndarray
    fov_deg: float = 90.0
    resolution: int = 64

    def __post_init__(self) -> None:
        self.position = np.asarray(self.position, dtype=np.float64)
        self.forward = np.asarray(self.forward, dtype=np.float64)
        self.up = np.asarray(self.up, dtype=np.float64)
        for name in ("position", "forward", "up"):
            if getattr(self, name).shape != (3,):
                raise ValueError(f"camera {name} must be a 3-vector")
        if abs(np.linalg.norm(self.forward) - 1.0) > 1e-9 or abs(np.linalg.norm(self.up) - 1.0) > 1e-9:
            raise ValueError("camera forward/up must be unit vectors")
        if abs(float(np.dot(self.forward, self.up))) > 1e-9:
            raise ValueError("camera forward/up must be orthogonal")
        if not 30.0 < self.fov_deg < 160.0:
            raise ValueError(f"fov must be in (30, 160) degrees, got {self.fov_deg}")
        if self.resolution < 1:
            raise ValueError("resolution must be positive")

    @property
    def right(self) -> np.ndarray:
        return np.cross(self.up, self.forward)


def make_camera(
    position: np.ndarray,
    forward: np.ndarray,
    up_hint: np.ndarray | None = None,
    fov_deg: float = 90.0,
    resolution: int = 64,
) -> Camera:
    """Build a camera, orthonormalizing `up_hint` against `forward`."""
    forward = unit(np.asarray(forward, dtype=np.float64))
    if up_hint is None:
        up_hint = np.array([0.0, 1.0, 0.0])
        if abs(float(np.dot(forward, up_hint))) > 0.9:
            up_hint = np.array([1.0, 0.0, 0.0])
    up_hint = np.asarray(up_hint, dtype=np.float64)
    up = up_hint - float(np.dot(up_hint, forward)) * forward
    norm = np.linalg.norm(up)
    if norm < 1e-12:
        raise ValueError("up_hint is parallel to forward")
    return Camera(
        position=np.asarray(position, dtype=np.float64),
        forward=forward,
        up=up / norm,
        fov_deg=fov_deg,
        resolution=resolution,
    )


# ---------------------------------------------------------------------------
# centerline spline
# ---------------------------------------------------------------------------

def _catmull_rom(control: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Uniform Catmull-Rom spline through `control`, u in [0, 1]."""
    control = np.asarray(control, dtype=np.float64)
    k = len(control)
    if k == 2:
        return control[0] + np.outer(u, control[1] - control[0])
    padded = np.vstack([2 * control[0] - control[1], control, 2 * control[-1] - control[-2]])
    nseg = k - 1
    x = np.clip(u, 0.0, 1.0) * nseg
    idx = np.minimum(x.astype(int), nseg - 1)
    t = (x - idx)[:, None]
    p0, p1, p2, p3 = (padded[idx + j] for j in range(4))
    t2, t3 = t * t, t * t * t
    return 0.5 * (
        2.0 * p1
        + (p2 - p0) * t
        + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2
        + (3.0 * p1 - 3.0 * p2 - p0 + p3) * t3
    )


def polyline_length(points: np.ndarray) -> float:
    return float(np.linalg.norm(np.diff(points, axis=0), axis=1).sum())


# ---------------------------------------------------------------------------
# signed distance field
# ---------------------------------------------------------------------------

def _smooth_max(a: np.ndarray, b: np.ndarray, k: float) -> np.ndarray:
    # quadratic polynomial smooth max; gradient is a convex combination of
    # the branch gradients, so unit-Lipschitz inputs stay unit-Lipschitz
    h = np.clip(0.5 - 0.5 * (b - a) / k, 0.0, 1.0)
    return b + (a - b) * h + k * h * (1.0 - h)


def sdf(scene: Scene | WallScene, points: np.ndarray, dtype: type = np.float64) -> np.ndarray:
    """Signed distance (mm) from `points` to the lumen wall.

    Negative strictly inside the lumen, positive in the wall.  Accepts a
    single point ``(3,)`` or a batch ``(..., 3)``.  `dtype=np.float32`
    selects a faster single-precision path (used by the ray marcher,
    accurate to ~1e-5 mm).
    """
    pts = np.asarray(points, dtype=dtype)
    single = pts.ndim == 1
    p = np.atleast_2d(pts).reshape(-1, 3)

    if isinstance(scene, WallScene):
        d = (p[:, 2] - dtype(scene.distance)).astype(dtype)
    else:
        if dtype == np.float32:
            centers, radii, c_sq = scene._spine_f32
        else:
            centers, radii, _ = scene._spine
            c_sq = np.einsum("ij,ij->i", centers, centers)
        # min over spheres |p - c_i| - r_i, computed blockwise via matmul
        d = np.empty(len(p), dtype=dtype)
        block = max(8 * 1024 * 1024 // max(len(centers), 1), 16)
        for start in range(0, len(p), block):
            q = p[start : start + block]
            q_sq = np.einsum("ij,ij->i", q, q)
            d2 = q_sq[:, None] - 2.0 * (q @ centers.T) + c_sq[None, :]
            np.maximum(d2, 0.0, out=d2)
            np.sqrt(d2, out=d2)
            d2 -= radii[None, :]
            d[start : start + block] = np.min(d2, axis=1)
        for center, radius in scene.polyps:
            bump = dtype(radius) - np.linalg.norm(p - center[None, :].astype(dtype), axis=1)
            d = _smooth_max(d, bump.astype(dtype), dtype(_POLYP_BLEND_MM))

    if single:
        return dtype(d[0])
    return d.reshape(pts.shape[:-1])


def sdf_pruned(scene: Scene | WallScene, points: np.ndarray, dtype: type = np.float32) -> np.ndarray:
    """Fast SDF for the ray marcher: spheres near the two closest anchors.

    Exact wherever the query point is near the tube (in particular at and
    inside the lumen); tiny overestimates are possible deep in the wall,
    where only the exact :func:`sdf` is contractual.
    """
    pts = np.asarray(points, dtype=dtype)
    p = np.atleast_2d(pts).reshape(-1, 3)

    if isinstance(scene, WallScene):
        return sdf(scene, points, dtype=dtype)

    anchor_idx, anchor_pts = scene._anchors
    if len(anchor_idx) < 6:
        return sdf(scene, points, dtype=dtype)
    centers, radii, _ = scene._spine_f32 if dtype == np.float32 else (scene._spine[0], scene._spine[1], None)
    anchor_pts = anchor_pts.astype(dtype)

    d2a = (
        np.einsum("ij,ij->i", p, p)[:, None]
        - 2.0 * (p @ anchor_pts.T)
        + np.einsum("ij,ij->i", anchor_pts, anchor_pts)[None, :]
    )
    top2 = np.argpartition(d2a, 1, axis=1)[:, :2]
    offsets = np.arange(-_WINDOW_HALF, _WINDOW_HALF + 1)
    window = anchor_idx[top2][:, :, None] + offsets[None, None, :]
    window = np.clip(window.reshape(len(p), -1), 0, len(centers) - 1)

    gathered = centers[window]  # (B, L, 3)
    diff = p[:, None, :] - gathered
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff)) - radii[window]
    d = np.min(dist, axis=1)

    for center, radius in scene.polyps:
        bump = dtype(radius) - np.linalg.norm(p - center[None, :].astype(dtype), axis=1)
        d = _smooth_max(d, bump.astype(dtype), dtype(_POLYP_BLEND_MM))

    return d.reshape(pts.shape[:-1]) if pts.ndim > 1 else dtype(d[0])


def sdf_normal(
    scene: Scene | WallScene,
    points: np.ndarray,
    h: float = 1e-3,
    pruned: bool = False,
) -> np.ndarray:
    """Surface normal facing the lumen: minus the central-difference SDF gradient."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    evaluate = (lambda q: sdf_pruned(scene, q, dtype=np.float64)) if pruned else (lambda q: sdf(scene, q))
    grad = np.empty_like(pts)
    for axis in range(3):
        e = np.zeros(3)
        e[axis] = h
        grad[:, axis] = (evaluate(pts + e) - evaluate(pts - e)) / (2.0 * h)
    n = -unit(grad)
    return n[0] if np.asarray(points).ndim == 1 else n


# ---------------------------------------------------------------------------
# scene families
# ---------------------------------------------------------------------------

def make_scene(family: int, seed: int) -> Scene:
    """Deterministically generate a scene of the given family.

    Family 0 is a long straight wide tube, family 1 a strongly curved
    narrow tube, family 2 a short tube closed by a terminal pouch.
    """
    if family not in FAMILY_NAMES:
        raise ValueError(f"family must be one of {sorted(FAMILY_NAMES)}, got {family}")
    rng = np.random.default_rng([family, seed])

    material = Material(
        rho=float(rng.uniform(0.65, 0.9)),
        spec_strength=float(rng.uniform(0.25, 0.5)),
        spec_exponent=float(rng.uniform(16.0, 48.0)),
        texture_amplitude=float(rng.uniform(0.35, 0.6)),
        texture_seed=int(rng.integers(0, 2**31)),
    )

    if family == 0:
        length = float(rng.uniform(170.0, 200.0))
        control = np.zeros((7, 3))
        control[:, 2] = np.linspace(0.0, length, 7)
        base_radius = float(rng.uniform(14.0, 18.0))
        fold_amp = float(rng.uniform(0.04, 0.10))
        fold_freq = float(rng.uniform(0.012, 0.025))
        n_polyps = int(rng.integers(0, 3))
        polyp_radius_range = (2.5, 4.0)
    elif family == 1:
        length = float(rng.uniform(120.0, 150.0))
        bend = float(rng.uniform(1.7, 2.4))  # total turn, radians
        control = _bent_centerline(length, bend, rng)
        base_radius = float(rng.uniform(5.0, 6.5))
        fold_amp = float(rng.uniform(0.05, 0.12))
        fold_freq = float(rng.uniform(0.02, 0.04))
        n_polyps = int(rng.integers(0, 2))
        polyp_radius_range = (1.5, 2.5)
    else:
        length = float(rng.uniform(42.0, 55.0))
        tilt = unit(np.array([rng.normal(0, 0.06), rng.normal(0, 0.06), 1.0]))
        control = np.linspace(0.0, length, 6)[:, None] * tilt[None, :]
        base_radius = float(rng.uniform(11.0, 13.0))
        fold_amp = float(rng.uniform(0.03, 0.08))
        fold_freq = float(rng.uniform(0.02, 0.04))
        n_polyps = int(rng.integers(0, 2))
        polyp_radius_range = (2.0, 3.0)

    scene = Scene(
        centerline=control,
        base_radius=base_radius,
        fold_amplitude=fold_amp,
        fold_frequency=fold_freq,
        polyps=(),
        material=material,
        family=family,
        seed=seed,
    )
    polyps = []
    for _ in range(n_polyps):
        u = float(rng.uniform(0.25, 0.75))
        center_pt = scene.centerline_point(u)
        tangent = scene.centerline_tangent(u)
        angle = float(rng.uniform(0.0, 2.0 * math.pi))
        radial = _perp_frame(tangent, angle)
        radius = float(rng.uniform(*polyp_radius_range))
        polyps.append((center_pt + scene.local_radius(u) * radial, radius))
    if polyps:
        scene = Scene(
            centerline=control,
            base_radius=base_radius,
            fold_amplitude=fold_amp,
            fold_frequency=fold_freq,
            polyps=tuple(polyps),
            material=material,
            family=family,
            seed=seed,
        )
    return scene


def _bent_centerline(length: float, bend: float, rng: np.random.Generator) -> np.ndarray:
    """Centerline turning steadily by `bend` radians in a random plane."""
    k = 10
    phi = float(rng.uniform(0.0, 2.0 * math.pi))
    normal = np.array([math.cos(phi), math.sin(phi), 0.0])  # bend axis, perpendicular to +z
    step = length / (k - 1)
    points = [np.zeros(3)]
    direction = np.array([0.0, 0.0, 1.0])
    for i in range(1, k):
        theta = bend / (k - 1)
        direction = _rotate(direction, normal, theta)
        points.append(points[-1] + step * direction)
    return np.asarray(points)


def _rotate(v: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    axis = unit(axis)
    c, s = math.cos(angle), math.sin(angle)
    return v * c + np.cross(axis, v) * s + axis * float(np.dot(axis, v)) * (1.0 - c)


def _perp_frame(tangent: np.ndarray, angle: float) -> np.ndarray:
    helper = np.array([0.0, 1.0, 0.0]) if abs(tangent[1]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = unit(np.cross(tangent, helper))
    e2 = np.cross(tangent, e1)
    return math.cos(angle) * e1 + math.sin(angle) * e2


# ---------------------------------------------------------------------------
# camera rays and pose sampling
# ---------------------------------------------------------------------------

def _pixel_coord(camera: Camera, index: np.ndarray) -> np.ndarray:
    n = camera.resolution
    half = math.tan(math.radians(camera.fov_deg) / 2.0)
    return (index + 0.5 - n / 2.0) / (n / 2.0) * half


def camera_ray(camera: Camera, pixel: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Ray (origin, unit direction) through the center of `pixel` = (row, col)."""
    row, col = pixel
    n = camera.resolution
    if not (0 <= row < n and 0 <= col < n):
        raise ValueError(f"pixel {pixel} outside {n}x{n} image")
    x = _pixel_coord(camera, np.float64(col))
    y = -_pixel_coord(camera, np.float64(row))
    d = camera.forward + x * camera.right + y * camera.up
    return camera.position.copy(), unit(d)


def camera_rays(camera: Camera) -> np.ndarray:
    """Unit ray directions for every pixel, shape (res, res, 3)."""
    n = camera.resolution
    coords = _pixel_coord(camera, np.arange(n, dtype=np.float64))
    x = coords[None, :, None]          # right, increasing with column
    y = (-coords)[:, None, None]       # up, decreasing with row
    d = camera.forward[None, None, :] + x * camera.right[None, None, :] + y * camera.up[None, None, :]
    return unit(d)


def sample_cameras(
    scene: Scene,
    n: int,
    seed: int | list[int],
    resolution: int = 64,
    fov_deg: float = 90.0,
) -> list[Camera]:
    """Seeded endoscope-like poses: on the centerline, looking along it."""
    seed_words = [seed] if isinstance(seed, int) else list(seed)
    rng = np.random.default_rng([*seed_words, scene.family, scene.seed])
    u_range = (0.05, 0.15) if scene.family == 2 else (0.15, 0.40)
    max_tilt = 0.10 if scene.family == 0 else 0.20
    cameras = []
    for _ in range(n):
        u = float(rng.uniform(*u_range))
        tangent = scene.centerline_tangent(u)
        offset_dir = _perp_frame(tangent, float(rng.uniform(0.0, 2.0 * math.pi)))
        offset = float(rng.uniform(0.0, 0.25)) * scene.local_radius(u)
        position = scene.centerline_point(u) + offset * offset_dir
        # jitter the viewing direction by a small random rotation
        axis = _perp_frame(tangent, float(rng.uniform(0.0, 2.0 * math.pi)))
        tilt = float(rng.uniform(0.0, max_tilt))
        forward = _rotate(tangent, axis, tilt)
        roll = float(rng.uniform(0.0, 2.0 * math.pi))
        up_hint = _perp_frame(forward, roll)
        cameras.append(make_camera(position, forward, up_hint, fov_deg=fov_deg, resolution=resolution))
    return cameras


# ---------------------------------------------------------------------------
# serialization (manifest "scene" / "camera" objects)
# ---------------------------------------------------------------------------

def material_to_dict(material: Material) -> dict:
    return {
        "rho": material.rho,
        "spec_strength": material.spec_strength,
        "spec_exponent": material.spec_exponent,
        "texture_amplitude": material.texture_amplitude,
        "texture_seed": material.texture_seed,
    }


def material_from_dict(doc: dict) -> Material:
    return Material(**doc)


def scene_to_dict(scene: Scene) -> dict:
    return {
        "family": scene.family,
        "seed": scene.seed,
        "centerline": scene.centerline.tolist(),
        "base_radius": scene.base_radius,
        "fold_amplitude": scene.fold_amplitude,
        "fold_frequency": scene.fold_frequency,
        "polyps": [{"center": c.tolist(), "radius": r} for c, r in scene.polyps],
        "material": material_to_dict(scene.material),
    }


def scene_from_dict(doc: dict) -> Scene:
    return Scene(
        centerline=np.asarray(doc["centerline"], dtype=np.float64),
        base_radius=doc["base_radius"],
        fold_amplitude=doc["fold_amplitude"],
        fold_frequency=doc["fold_frequency"],
        polyps=tuple((np.asarray(p["center"], dtype=np.float64), p["radius"]) for p in doc["polyps"]),
        material=material_from_dict(doc["material"]),
        family=doc["family"],
        seed=doc.get("seed", 0),
    )


def camera_to_dict(camera: Camera) -> dict:
    return {
        "position": camera.position.tolist(),
        "forward": camera.forward.tolist(),
        "up": camera.up.tolist(),
        "fov_deg": camera.fov_deg,
        "resolution": camera.resolution,
    }


def camera_from_dict(doc: dict) -> Camera:
    return Camera(
        position=np.asarray(doc["position"], dtype=np.float64),
        forward=np.asarray(doc["forward"], dtype=np.float64),
        up=np.asarray(doc["up"], dtype=np.float64),
        fov_deg=doc["fov_deg"],
        resolution=doc["resolution"],
    )
