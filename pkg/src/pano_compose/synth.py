"""Deterministic procedural panoramas for testing and demos.

The ``direction`` pattern encodes each ERP pixel's own (theta, phi) into its
RGB value so that rendered views can be decoded and checked against the
projection math:

  * longitude and latitude are split into 45-degree sectors;
  * R holds the position of theta within its sector, scaled to [0, 255];
  * G holds the position of phi within its sector, scaled to [0, 255];
  * B packs the two sector indices: B = theta_sector * 4 + phi_sector.

Within a sector every channel is linear in the angle, so bilinear resampling
reproduces the angle exactly (up to 8-bit quantization, < 0.09 deg per step);
only pixels straddling a sector boundary decode unreliably.
"""

from __future__ import annotations

import numpy as np

SECTOR_DEG = 45.0

PATTERNS = ("direction", "checker", "horizon")


def _pixel_angles(W: int, H: int):
    """(theta, phi) in degrees at every ERP pixel center."""
    u = np.arange(W) + 0.5
    v = np.arange(H) + 0.5
    theta = 360.0 * u / W - 180.0
    phi = -180.0 * v / H + 90.0
    return np.meshgrid(theta, phi)


def encode_direction(theta_deg: np.ndarray, phi_deg: np.ndarray) -> np.ndarray:
    t = np.mod(theta_deg + 180.0, 360.0)
    p = np.clip(phi_deg + 90.0, 0.0, 180.0 - 1e-9)
    ts = np.floor(t / SECTOR_DEG).astype(np.int64) % 8
    ps = np.floor(p / SECTOR_DEG).astype(np.int64)
    r = np.rint((t - ts * SECTOR_DEG) / SECTOR_DEG * 255.0)
    g = np.rint((p - ps * SECTOR_DEG) / SECTOR_DEG * 255.0)
    b = ts * 4 + ps
    return np.stack([r, g, b], axis=-1).astype(np.uint8)


def decode_direction(rgb: np.ndarray):
    """Inverse of encode_direction; linear in R and G.  Returns (theta, phi)
    in degrees."""
    rgb = np.asarray(rgb, dtype=np.float64)
    b = np.rint(rgb[..., 2]).astype(np.int64)
    ts = b // 4
    ps = b % 4
    theta = ts * SECTOR_DEG + rgb[..., 0] / 255.0 * SECTOR_DEG - 180.0
    phi = ps * SECTOR_DEG + rgb[..., 1] / 255.0 * SECTOR_DEG - 90.0
    return theta, phi


def make_erp(pattern: str, W: int, H: int, seed: int = 0) -> np.ndarray:
    """Build a procedural (H, W, 3) uint8 panorama; same args -> same bytes."""
    if pattern not in PATTERNS:
        raise ValueError(f"unknown pattern {pattern!r}; choose from {PATTERNS}")
    theta, phi = _pixel_angles(W, H)
    rng = np.random.default_rng(seed)
    if pattern == "direction":
        return encode_direction(theta, phi)
    if pattern == "checker":
        cells = (np.floor(theta / 30.0) + np.floor(phi / 30.0)).astype(np.int64)
        palette = rng.integers(30, 226, size=(2, 3))
        return palette[np.abs(cells) % 2].astype(np.uint8)
    # horizon: sky-to-ground vertical gradient plus a seeded sun disk
    sky = rng.integers(100, 200, size=3).astype(np.float64)
    ground = rng.integers(30, 110, size=3).astype(np.float64)
    f = (phi + 90.0) / 180.0
    img = ground[None, None, :] + (sky - ground)[None, None, :] * f[..., None]
    sun_theta = rng.uniform(-180.0, 180.0)
    sun_phi = rng.uniform(20.0, 60.0)
    d2 = np.minimum(np.abs(theta - sun_theta), 360.0 - np.abs(theta - sun_theta)) ** 2 + (
        phi - sun_phi
    ) ** 2
    img = np.where((d2 < 100.0)[..., None], 255.0, img)
    return np.rint(np.clip(img, 0, 255)).astype(np.uint8)
