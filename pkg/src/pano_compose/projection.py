"""ERP pixels <-> sphere directions <-> perspective-view pixels.

Conventions:
  * 0-based continuous pixel coordinates; the principal point is the exact
    image center ((w-1)/2, (h-1)/2).
  * Square pixels: f_x = f_y, and the horizontal FOV follows from the aspect
    ratio.
  * ERP sampling is bilinear at pixel centers, wrapping longitude across the
    +-180 seam and clamping latitude at the poles.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .geometry import (
    SphericalDirection,
    SphericalRect,
    pose_rotation,
    wrap_angle_deg,
)

DEFAULT_FOV_Y = 60.0
DEFAULT_VIEW_W = 1024
DEFAULT_VIEW_H = 768


@dataclass(frozen=True)
class CameraPose:
    """Yaw/pitch in degrees; roll is fixed at 0 throughout."""

    theta_deg: float
    phi_deg: float

    def __post_init__(self):
        if abs(self.phi_deg) > 90.0:
            raise ValueError(f"pitch out of range: {self.phi_deg}")
        object.__setattr__(self, "theta_deg", wrap_angle_deg(self.theta_deg))


@dataclass(frozen=True)
class CameraIntrinsics:
    fov_x_deg: float
    fov_y_deg: float
    w: int
    h: int
    f_x: float
    f_y: float
    i0: float
    j0: float


def intrinsics_from_fov(
    fov_y_deg: float = DEFAULT_FOV_Y, w: int = DEFAULT_VIEW_W, h: int = DEFAULT_VIEW_H
) -> CameraIntrinsics:
    """Intrinsics from a vertical FOV assuming square pixels."""
    if not 0.0 < fov_y_deg < 180.0:
        raise ValueError(f"vertical FOV out of (0, 180): {fov_y_deg}")
    if w < 2 or h < 2:
        raise ValueError("view must be at least 2x2 pixels")
    f_y = h / (2.0 * math.tan(math.radians(fov_y_deg) / 2.0))
    f_x = f_y
    fov_x_deg = math.degrees(2.0 * math.atan(w / (2.0 * f_x)))
    return CameraIntrinsics(
        fov_x_deg=fov_x_deg,
        fov_y_deg=fov_y_deg,
        w=int(w),
        h=int(h),
        f_x=f_x,
        f_y=f_y,
        i0=(w - 1) / 2.0,
        j0=(h - 1) / 2.0,
    )


def view_rect_of(pose: CameraPose, K: CameraIntrinsics) -> SphericalRect:
    """The spherical-rectangle footprint of a view."""
    return SphericalRect(
        center=SphericalDirection(pose.theta_deg, pose.phi_deg),
        alpha_deg=K.fov_x_deg,
        beta_deg=K.fov_y_deg,
    )


def _rays(i, j, K: CameraIntrinsics) -> np.ndarray:
    """Camera-frame rays K^-1 (i, j, 1), stacked along the last axis."""
    i = np.asarray(i, dtype=float)
    j = np.asarray(j, dtype=float)
    x = (i - K.i0) / K.f_x
    y = (j - K.j0) / K.f_y
    return np.stack([x, y, np.ones_like(x)], axis=-1)


def view_pixel_to_sphere(
    i: float, j: float, K: CameraIntrinsics, pose: CameraPose
) -> SphericalDirection:
    """Direction seen by view pixel (i, j)."""
    world = _rays(i, j, K) @ pose_rotation(pose.theta_deg, pose.phi_deg).T
    world = world / np.linalg.norm(world)
    theta = math.degrees(math.atan2(world[0], world[2]))
    phi = math.degrees(math.asin(max(-1.0, min(1.0, float(world[1])))))
    return SphericalDirection(theta, phi)


def view_pixels_to_sphere_grid(K: CameraIntrinsics, pose: CameraPose):
    """(theta, phi) degree arrays of shape (h, w) for every view pixel."""
    jj, ii = np.meshgrid(np.arange(K.h, dtype=float), np.arange(K.w, dtype=float), indexing="ij")
    world = _rays(ii, jj, K) @ pose_rotation(pose.theta_deg, pose.phi_deg).T
    world /= np.linalg.norm(world, axis=-1, keepdims=True)
    theta = np.degrees(np.arctan2(world[..., 0], world[..., 2]))
    phi = np.degrees(np.arcsin(np.clip(world[..., 1], -1.0, 1.0)))
    return theta, phi


def sphere_to_view_pixel(d: SphericalDirection, K: CameraIntrinsics, pose: CameraPose):
    """Forward projection; returns (i, j) or None when outside the frustum."""
    from .geometry import dir_to_vec

    cam = pose_rotation(pose.theta_deg, pose.phi_deg).T @ dir_to_vec(d)
    if cam[2] <= 0:
        return None
    i = cam[0] / cam[2] * K.f_x + K.i0
    j = cam[1] / cam[2] * K.f_y + K.j0
    return float(i), float(j)


def sphere_to_erp_pixel(d: SphericalDirection, W: int, H: int):
    """Continuous ERP coordinates: u = (theta/2pi + 1/2) W, v = (-phi/pi + 1/2) H."""
    u = (math.radians(d.theta_deg) / (2.0 * math.pi) + 0.5) * W
    v = (-math.radians(d.phi_deg) / math.pi + 0.5) * H
    return u, v


def erp_pixel_to_sphere(u: float, v: float, W: int, H: int) -> SphericalDirection:
    """Inverse of sphere_to_erp_pixel: theta = 2 pi u / W - pi, phi = pi/2 - pi v / H."""
    theta = math.degrees(2.0 * math.pi * u / W - math.pi)
    phi = math.degrees(-math.pi * v / H + math.pi / 2.0)
    return SphericalDirection(theta, phi)


@dataclass(frozen=True)
class ErpImage:
    """An equirectangular panorama; row-major, top-left origin, 8-bit RGB."""

    pixels: np.ndarray  # (H, W, 3) uint8

    def __post_init__(self):
        px = self.pixels
        if px.ndim != 3 or px.shape[2] != 3 or px.dtype != np.uint8:
            raise ValueError("ERP pixels must be (H, W, 3) uint8")
        H, W = px.shape[:2]
        if W < 2 or H < 2:
            raise ValueError("ERP must be at least 2x2")
        if W != 2 * H:
            warnings.warn(f"non-standard panorama aspect: {W}x{H} (expected W = 2H)")

    @property
    def W(self) -> int:
        return self.pixels.shape[1]

    @property
    def H(self) -> int:
        return self.pixels.shape[0]

    @classmethod
    def load(cls, path) -> "ErpImage":
        return cls(np.asarray(Image.open(path).convert("RGB"), dtype=np.uint8))

    def save(self, path):
        Image.fromarray(self.pixels).save(path)


@dataclass(frozen=True)
class ViewImage:
    """A rendered perspective view plus its provenance."""

    pixels: np.ndarray  # (h, w, 3) uint8
    scene_id: str
    pose: CameraPose
    intrinsics: CameraIntrinsics

    def save(self, path):
        Image.fromarray(self.pixels).save(path)


def _bilinear_sample(px: np.ndarray, x: np.ndarray, y: np.ndarray, col_offset: int = 0) -> np.ndarray:
    """Bilinear sample of (H, W, 3) uint8 at continuous pixel-center-based
    coordinates; x wraps modulo W, y clamps to [0, H-1].

    ``col_offset`` shifts the sampled columns by a whole number of pixels
    after the floor, so integer shifts never perturb the bilinear weights.
    """
    H, W = px.shape[:2]
    y = np.clip(y, 0.0, H - 1.0)
    x0f = np.floor(x)
    fx = (x - x0f)[..., None]
    x0 = (x0f.astype(np.int64) + col_offset) % W
    y0 = np.floor(y).astype(np.int64)
    fy = (y - y0)[..., None]
    x1 = (x0 + 1) % W
    y1 = np.minimum(y0 + 1, H - 1)
    p = px.astype(np.float64)
    top = p[y0, x0] * (1.0 - fx) + p[y0, x1] * fx
    bot = p[y1, x0] * (1.0 - fx) + p[y1, x1] * fx
    return top * (1.0 - fy) + bot * fy


def render_view(
    erp: ErpImage, pose: CameraPose, K: CameraIntrinsics, scene_id: str = ""
) -> ViewImage:
    """Render a perspective view by inverse projection and bilinear ERP
    sampling.

    Yaw is applied as an exact horizontal ERP-pixel offset (theta * W / 360)
    on top of the pitch-only projection, which is mathematically identical to
    rotating the rays and keeps grid-aligned yaws bit-exact.
    """
    W, H = erp.W, erp.H
    jj, ii = np.meshgrid(np.arange(K.h, dtype=float), np.arange(K.w, dtype=float), indexing="ij")
    cam = _rays(ii, jj, K)
    pitched = cam @ pose_rotation(0.0, pose.phi_deg).T
    pitched /= np.linalg.norm(pitched, axis=-1, keepdims=True)
    theta0 = np.arctan2(pitched[..., 0], pitched[..., 2])
    phi = np.arcsin(np.clip(pitched[..., 1], -1.0, 1.0))
    u = (theta0 / (2.0 * math.pi) + 0.5) * W
    v = (-phi / math.pi + 0.5) * H
    shift = pose.theta_deg * W / 360.0
    whole = math.floor(shift)
    u = u + (shift - whole)  # fractional remainder only; 0 for grid-aligned yaw
    # Pixel k covers [k, k+1); its center sits at continuous coordinate k+0.5.
    samples = _bilinear_sample(erp.pixels, u - 0.5, v - 0.5, col_offset=int(whole))
    out = np.rint(samples).astype(np.uint8)
    return ViewImage(pixels=out, scene_id=scene_id, pose=pose, intrinsics=K)
