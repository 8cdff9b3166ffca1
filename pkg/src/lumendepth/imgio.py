"""Image and manifest I/O.

Conventions used across the package:

* color images are ``float64`` arrays of shape ``(H, W, 3)`` with every
  channel in ``[0, 1]``, stored on disk as binary portable pixmaps
  (P6, maxval 255);
* depth maps are ``float64`` arrays of shape ``(H, W)`` holding metric
  depth in millimeters, clamped to ``[0, 100]``, stored on disk as 16-bit
  binary portable graymaps (P5, maxval 65535, big-endian samples);
* depth-to-intensity mapping is linear and inverted (near = bright):
  ``intensity = round(65535 * (1 - d / 100))`` with rounding half away
  from zero, so 0 mm encodes as 65535 and 100 mm as 0;
* datasets are described by a JSON manifest (one document, keys fixed
  below) listing image files, optional paired depth files, optional
  class labels and a domain tag per entry.

All functions here are pure or touch only their own file handles, so they
are safe for concurrent use on distinct paths.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

DEPTH_MAX_MM = 100.0
DEPTH_MAXVAL = 65535
COLOR_MAXVAL = 255

DOMAIN_REALLIKE = "real-like"
DOMAIN_LAMBERTIAN = "lambertian"
VALID_DOMAINS = (DOMAIN_REALLIKE, DOMAIN_LAMBERTIAN)
VALID_LABELS = (0, 1, 2)

MIN_IMAGE_SIDE = 8


class CodecError(ValueError):
    """Malformed raster file or out-of-contract pixel data."""


class ManifestError(ValueError):
    """Structurally invalid manifest."""


# ---------------------------------------------------------------------------
# array validation
# ---------------------------------------------------------------------------

def validate_color(image: np.ndarray) -> np.ndarray:
    """Check color-image conventions; returns the array unchanged."""
    image = np.asarray(image)
    if image.ndim != 3 or image.shape[2] != 3:
        raise CodecError(f"color image must have shape (H, W, 3), got {image.shape}")
    h, w = image.shape[:2]
    if h < MIN_IMAGE_SIDE or w < MIN_IMAGE_SIDE:
        raise CodecError(f"color image must be at least {MIN_IMAGE_SIDE}x{MIN_IMAGE_SIDE}, got {w}x{h}")
    if not np.isfinite(image).all():
        raise CodecError("color image contains non-finite values")
    if image.min() < 0.0 or image.max() > 1.0:
        bad = np.unravel_index(int(np.argmax(np.abs(image - 0.5))), image.shape)
        raise CodecError(f"color channel value outside [0, 1] (e.g. at {bad})")
    return image


def validate_depth(depth: np.ndarray) -> np.ndarray:
    """Check depth-map conventions; returns the array unchanged."""
    depth = np.asarray(depth)
    if depth.ndim != 2:
        raise CodecError(f"depth map must have shape (H, W), got {depth.shape}")
    h, w = depth.shape
    if h < MIN_IMAGE_SIDE or w < MIN_IMAGE_SIDE:
        raise CodecError(f"depth map must be at least {MIN_IMAGE_SIDE}x{MIN_IMAGE_SIDE}, got {w}x{h}")
    if not np.isfinite(depth).all():
        raise CodecError("depth map contains non-finite values")
    if depth.min() < 0.0 or depth.max() > DEPTH_MAX_MM:
        flat = np.argmax((depth < 0.0) | (depth > DEPTH_MAX_MM))
        row, col = np.unravel_index(int(flat), depth.shape)
        raise CodecError(
            f"depth {depth[row, col]!r} mm at pixel (row={row}, col={col}) outside [0, {DEPTH_MAX_MM:g}]"
        )
    return depth


# ---------------------------------------------------------------------------
# depth <-> 16-bit raster mapping
# ---------------------------------------------------------------------------

def _round_half_away(x: np.ndarray) -> np.ndarray:
    # np.round rounds half to even; the codec is specified as half away
    # from zero.  Values here are always non-negative.
    return np.floor(x + 0.5)


def encode_depth(depth: np.ndarray) -> np.ndarray:
    """Map a depth map in mm to 16-bit intensities (near = bright)."""
    depth = validate_depth(depth)
    raster = _round_half_away(DEPTH_MAXVAL * (1.0 - depth / DEPTH_MAX_MM))
    return raster.astype(np.uint16)


def decode_depth(raster: np.ndarray) -> np.ndarray:
    """Invert :func:`encode_depth` (exact to within 100/65535 mm)."""
    raster = np.asarray(raster)
    if raster.ndim != 2 or raster.dtype != np.uint16:
        raise CodecError(f"depth raster must be a uint16 (H, W) array, got {raster.dtype} {raster.shape}")
    return DEPTH_MAX_MM * (1.0 - raster.astype(np.float64) / DEPTH_MAXVAL)


# ---------------------------------------------------------------------------
# portable pixmap / graymap codecs
# ---------------------------------------------------------------------------

def _read_pnm_tokens(data: bytes, count: int, path: Path) -> tuple[list[int], int]:
    """Parse `count` whitespace-separated integer header tokens.

    Handles '#' comments per the PNM conventions.  Returns the tokens and
    the offset of the first raster byte (one whitespace after the last
    token).
    """
    tokens: list[int] = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] != b"\n":
                i += 1
            continue
        start = i
        while i < n and not data[i : i + 1].isspace():
            i += 1
        if start == i:
            raise CodecError(f"{path}: truncated header")
        token = data[start:i]
        if not token.isdigit():
            raise CodecError(f"{path}: bad header token {token!r}")
        tokens.append(int(token))
    if i >= n or not data[i : i + 1].isspace():
        raise CodecError(f"{path}: missing whitespace after header")
    return tokens, i + 1


def write_color(image: np.ndarray, path: str | Path) -> None:
    """Write a color image as a binary P6 pixmap (maxval 255)."""
    image = validate_color(image)
    h, w = image.shape[:2]
    raster = _round_half_away(image * COLOR_MAXVAL).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P6\n{w} {h}\n{COLOR_MAXVAL}\n".encode("ascii"))
        fh.write(raster.tobytes())


def read_color(path: str | Path) -> np.ndarray:
    """Read a binary P6 pixmap into a float64 (H, W, 3) array in [0, 1]."""
    path = Path(path)
    data = path.read_bytes()
    if not data.startswith(b"P6"):
        raise CodecError(f"{path}: not a binary pixmap (expected magic P6)")
    (w, h, maxval), offset = _read_pnm_tokens(data[2:], 3, path)
    offset += 2
    if maxval != COLOR_MAXVAL:
        raise CodecError(f"{path}: unsupported maxval {maxval} (expected {COLOR_MAXVAL})")
    expected = w * h * 3
    raster = np.frombuffer(data, dtype=np.uint8, count=-1, offset=offset)
    if raster.size != expected:
        raise CodecError(f"{path}: raster has {raster.size} samples, expected {expected}")
    image = raster.reshape(h, w, 3).astype(np.float64) / COLOR_MAXVAL
    return validate_color(image)


def write_depth(depth: np.ndarray, path: str | Path) -> None:
    """Write a depth map as a 16-bit binary P5 graymap (big-endian)."""
    raster = encode_depth(depth)
    h, w = raster.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n{DEPTH_MAXVAL}\n".encode("ascii"))
        fh.write(raster.astype(">u2").tobytes())


def read_depth(path: str | Path) -> np.ndarray:
    """Read a 16-bit binary P5 graymap into a float64 depth map in mm."""
    path = Path(path)
    data = path.read_bytes()
    if not data.startswith(b"P5"):
        raise CodecError(f"{path}: not a binary graymap (expected magic P5)")
    (w, h, maxval), offset = _read_pnm_tokens(data[2:], 3, path)
    offset += 2
    if maxval != DEPTH_MAXVAL:
        raise CodecError(f"{path}: unsupported maxval {maxval} (expected {DEPTH_MAXVAL})")
    try:
        raster = np.frombuffer(data, dtype=">u2", count=-1, offset=offset)
    except ValueError as exc:
        raise CodecError(f"{path}: truncated raster ({exc})") from exc
    if raster.size != w * h:
        raise CodecError(f"{path}: raster has {raster.size} samples, expected {w * h}")
    raster = raster.reshape(h, w).astype(np.uint16)
    if h < MIN_IMAGE_SIDE or w < MIN_IMAGE_SIDE:
        raise CodecError(f"{path}: depth map must be at least {MIN_IMAGE_SIDE}x{MIN_IMAGE_SIDE}")
    return decode_depth(raster)


def read_depth_raster(path: str | Path) -> np.ndarray:
    """Read a P5 graymap as raw uint16 intensities (no mm conversion)."""
    return encode_depth(read_depth(path))


# ---------------------------------------------------------------------------
# manifest
# ---------------------------------------------------------------------------

@dataclass
class ManifestEntry:
    """One dataset record: an image, optionally paired depth and label."""

    image: str
    domain: str
    depth: str | None = None
    label: int | None = None
    scene: dict | None = None
    camera: dict | None = None

    def validate(self) -> None:
        if self.domain not in VALID_DOMAINS:
            raise ManifestError(f"unknown domain tag {self.domain!r} for {self.image!r}")
        if self.label is not None and self.label not in VALID_LABELS:
            raise ManifestError(f"label {self.label!r} outside {{0, 1, 2}} for {self.image!r}")


@dataclass
class Manifest:
    """Seeded list of dataset entries, serialized as one JSON document."""

    seed: int
    entries: list[ManifestEntry] = field(default_factory=list)

    def validate(self) -> None:
        if not isinstance(self.seed, int) or self.seed < 0:
            raise ManifestError(f"seed must be an unsigned integer, got {self.seed!r}")
        seen: set[str] = set()
        for entry in self.entries:
            entry.validate()
            for p in (entry.image, entry.depth):
                if p is None:
                    continue
                if p in seen:
                    raise ManifestError(f"duplicate path {p!r}")
                seen.add(p)

    def domain_entries(self, domain: str) -> list[ManifestEntry]:
        return [e for e in self.entries if e.domain == domain]

    def paired_entries(self) -> list[ManifestEntry]:
        return [e for e in self.entries if e.depth is not None]


def _entry_to_dict(entry: ManifestEntry) -> dict:
    out: dict = {
        "image": entry.image,
        "depth": entry.depth,
        "label": entry.label,
        "domain": entry.domain,
    }
    if entry.scene is not None:
        out["scene"] = entry.scene
    if entry.camera is not None:
        out["camera"] = entry.camera
    return out


def write_manifest(manifest: Manifest, path: str | Path) -> None:
    """Write the manifest as normalized JSON (sorted keys, 2-space indent)."""
    manifest.validate()
    doc = {
        "seed": manifest.seed,
        "entries": [_entry_to_dict(e) for e in manifest.entries],
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def read_manifest(path: str | Path) -> Manifest:
    """Read and validate a manifest JSON document."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ManifestError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict) or "seed" not in doc or "entries" not in doc:
        raise ManifestError(f"{path}: manifest must be an object with 'seed' and 'entries'")
    entries = []
    for raw in doc["entries"]:
        if not isinstance(raw, dict) or "image" not in raw or "domain" not in raw:
            raise ManifestError(f"{path}: entry missing 'image' or 'domain': {raw!r}")
        entries.append(
            ManifestEntry(
                image=raw["image"],
                domain=raw["domain"],
                depth=raw.get("depth"),
                label=raw.get("label"),
                scene=raw.get("scene"),
                camera=raw.get("camera"),
            )
        )
    manifest = Manifest(seed=doc["seed"], entries=entries)
    manifest.validate()
    return manifest


def verify_manifest_files(manifest: Manifest, root: str | Path) -> None:
    """Deep check: every referenced file exists and paired dims match."""
    root = Path(root)
    for entry in manifest.entries:
        image = read_color(root / entry.image)
        if entry.depth is not None:
            depth = read_depth(root / entry.depth)
            if depth.shape != image.shape[:2]:
                raise ManifestError(
                    f"{entry.image!r}: depth dimensions {depth.shape} do not match image {image.shape[:2]}"
                )
