"""Spherical-rectangle geometry on the unit sphere.

A spherical rectangle is the footprint of a pinhole-camera frustum: the set of
unit directions inside four half-spaces through the origin, bounded by four
great-circle arcs.  With both fields of view below 180 degrees the region is
geodesically convex, which every algorithm here relies on.

Angles cross the API in degrees and are converted to radians exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Chordal tolerance for deduplicating polygon vertices, and the default
# slack for boundary membership tests.
VERTEX_DEDUP_TOL = 1e-9
MEMBERSHIP_EPS = 1e-9


def wrap_angle_deg(theta: float) -> float:
    """Reduce an angle in degrees into [-180, 180)."""
    return (theta + 180.0) % 360.0 - 180.0


@dataclass(frozen=True)
class SphericalDirection:
    """A direction on the unit sphere: longitude theta, latitude phi (degrees)."""

    theta_deg: float
    phi_deg: float

    def __post_init__(self):
        if abs(self.phi_deg) > 90.0:
            raise ValueError(f"latitude out of range: {self.phi_deg}")
        object.__setattr__(self, "theta_deg", wrap_angle_deg(self.theta_deg))


@dataclass(frozen=True)
class SphericalRect:
    """Camera-frustum footprint: center direction plus horizontal/vertical FOV."""

    center: SphericalDirection
    alpha_deg: float  # horizontal FOV
    beta_deg: float   # vertical FOV

    def __post_init__(self):
        if not (0.0 < self.alpha_deg < 180.0 and 0.0 < self.beta_deg < 180.0):
            raise ValueError(
                f"FOV out of (0, 180): alpha={self.alpha_deg}, beta={self.beta_deg}"
            )


@dataclass(frozen=True)
class SphericalPolygon:
    """Convex spherical polygon; vertices are unit 3-vectors ordered CCW
    viewed from outside the sphere.  ``degenerate`` marks measure-zero
    contact (shared edge or touching point) reported as empty."""

    vertices: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    degenerate: bool = False

    @property
    def n(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def is_empty(self) -> bool:
        return self.n == 0


def dir_to_vec(d: SphericalDirection) -> np.ndarray:
    """Unit 3-vector for a direction: x = cos(phi) sin(theta), y = sin(phi),
    z = cos(phi) cos(theta)."""
    t = math.radians(d.theta_deg)
    p = math.radians(d.phi_deg)
    cp = math.cos(p)
    return np.array([cp * math.sin(t), math.sin(p), cp * math.cos(t)])


def vec_to_dir(v: np.ndarray) -> SphericalDirection:
    """Inverse of dir_to_vec using full-quadrant arctangent.

    At the poles (|y| = 1) longitude is defined as 0.
    """
    x, y, z = float(v[0]), float(v[1]), float(v[2])
    if abs(x) < 1e-15 and abs(z) < 1e-15:
        return SphericalDirection(0.0, math.copysign(90.0, y))
    theta = math.degrees(math.atan2(x, z))
    phi = math.degrees(math.asin(max(-1.0, min(1.0, y))))
    return SphericalDirection(theta, phi)


def _rot_x(a: float) -> np.ndarray:
    """Rotation about the x-axis mapping (0,0,1) to (0, sin a, cos a)."""
    c, s = math.cos(a), math.sin(a)
    return np.array([[1.0, 0.0, 0.0], [0.0, c, s], [0.0, -s, c]])


def _rot_y(a: float) -> np.ndarray:
    """Rotation about the y-axis mapping (0,0,1) to (sin a, 0, cos a)."""
    c, s = math.cos(a), math.sin(a)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def pose_rotation(theta_deg: float, phi_deg: float) -> np.ndarray:
    """Camera-to-world rotation Ry(theta) @ Rx(phi); maps (0,0,1) to the
    direction (theta, phi)."""
    return _rot_y(math.radians(theta_deg)) @ _rot_x(math.radians(phi_deg))


def rect_frame(r: SphericalRect) -> np.ndarray:
    """World-to-camera rotation for a rect (inverse of pose_rotation)."""
    return pose_rotation(r.center.theta_deg, r.center.phi_deg).T


def rect_contains(r: SphericalRect, v: np.ndarray, eps: float = MEMBERSHIP_EPS):
    """Membership test.  ``v`` may be a single 3-vector or an (n, 3) array;
    returns a bool or a bool array accordingly.

    The point is rotated into the camera frame and tested against
    |x| <= z tan(alpha/2) + eps and |y| <= z tan(beta/2) + eps.  With both
    FOVs below 180 these two conditions force z > 0.
    """
    ta = math.tan(math.radians(r.alpha_deg) / 2.0)
    tb = math.tan(math.radians(r.beta_deg) / 2.0)
    c = np.asarray(v) @ rect_frame(r).T
    x, y, z = c[..., 0], c[..., 1], c[..., 2]
    ok = (np.abs(x) <= z * ta + eps) & (np.abs(y) <= z * tb + eps) & (z > 0)
    return bool(ok) if np.ndim(ok) == 0 else ok


def rect_area(r: SphericalRect) -> float:
    """Closed-form area in steradians: 4 arccos(-sin(a/2) sin(b/2)) - 2 pi."""
    sa = math.sin(math.radians(r.alpha_deg) / 2.0)
    sb = math.sin(math.radians(r.beta_deg) / 2.0)
    return 4.0 * math.acos(-sa * sb) - 2.0 * math.pi


def rect_corners(r: SphericalRect) -> np.ndarray:
    """The four corner directions, (4, 3), CCW viewed from outside."""
    ta = math.tan(math.radians(r.alpha_deg) / 2.0)
    tb = math.tan(math.radians(r.beta_deg) / 2.0)
    cam = np.array(
        [[ta, tb, 1.0], [-ta, tb, 1.0], [-ta, -tb, 1.0], [ta, -tb, 1.0]]
    )
    cam /= np.linalg.norm(cam, axis=1, keepdims=True)
    return cam @ rect_frame(r)


def rect_plane_normals(r: SphericalRect) -> np.ndarray:
    """Inward unit normals of the four boundary great-circle planes, (4, 3).

    A point v is inside the rect iff n . v >= 0 for all four normals.
    """
    ta = math.tan(math.radians(r.alpha_deg) / 2.0)
    tb = math.tan(math.radians(r.beta_deg) / 2.0)
    cam = np.array(
        [[-1.0, 0.0, ta], [1.0, 0.0, ta], [0.0, -1.0, tb], [0.0, 1.0, tb]]
    )
    cam /= np.linalg.norm(cam, axis=1, keepdims=True)
    return cam @ rect_frame(r)


def _order_ccw(verts: np.ndarray) -> np.ndarray:
    """Sort convex-polygon vertices counterclockwise around their normalized
    centroid, viewed from outside the sphere."""
    centroid = verts.sum(axis=0)
    c = centroid / np.linalg.norm(centroid)
    # Build a right-handed tangent basis (e1, e2, c).
    ref = np.array([0.0, 0.0, 1.0]) if abs(c[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(ref, c)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(c, e1)
    ang = np.arctan2(verts @ e2, verts @ e1)
    return verts[np.argsort(ang, kind="stable")]


def _dedup(verts: list[np.ndarray], tol: float = VERTEX_DEDUP_TOL) -> np.ndarray:
    out: list[np.ndarray] = []
    for v in verts:
        if all(np.linalg.norm(v - u) > tol for u in out):
            out.append(v)
    return np.array(out) if out else np.zeros((0, 3))


def rect_intersection(a: SphericalRect, b: SphericalRect) -> SphericalPolygon:
    """Convex spherical polygon a ∩ b.

    Vertex candidates are the corners of each rect inside the other plus the
    great-circle boundary crossings (normalized ±cross products of one
    boundary-plane normal of each rect) that lie inside both.  Fewer than 3
    surviving vertices with nonempty contact is reported as a degenerate
    empty polygon.
    """
    cand: list[np.ndarray] = []
    for v in rect_corners(a):
        if rect_contains(b, v):
            cand.append(v)
    for v in rect_corners(b):
        if rect_contains(a, v):
            cand.append(v)
    for na in rect_plane_normals(a):
        for nb in rect_plane_normals(b):
            x = np.cross(na, nb)
            nrm = np.linalg.norm(x)
            if nrm < 1e-12:
                continue  # parallel boundary planes
            x = x / nrm
            for v in (x, -x):
                if rect_contains(a, v) and rect_contains(b, v):
                    cand.append(v)
    verts = _dedup(cand)
    if len(verts) >= 3:
        return SphericalPolygon(_order_ccw(verts))
    touching = len(verts) > 0 or rect_contains(b, dir_to_vec(a.center)) or rect_contains(
        a, dir_to_vec(b.center)
    )
    return SphericalPolygon(degenerate=touching)


def polygon_area_girard(p: SphericalPolygon) -> float:
    """Girard area: sum of interior angles minus (n-2) pi.  Empty -> 0.

    Raises ValueError for non-convex or self-intersecting input (detected by
    disagreeing orientation tests on consecutive vertex triples).
    """
    if p.is_empty:
        return 0.0
    v = p.vertices
    n = p.n
    if n < 3:
        raise ValueError("polygon must be empty or have >= 3 vertices")
    # Convexity / orientation check: all triple products share one sign.
    trips = [float(np.dot(v[i], np.cross(v[(i + 1) % n], v[(i + 2) % n]))) for i in range(n)]
    if any(t < -1e-12 for t in trips) and any(t > 1e-12 for t in trips):
        raise ValueError("polygon is not convex")
    total = 0.0
    for i in range(n):
        prev, cur, nxt = v[(i - 1) % n], v[i], v[(i + 1) % n]
        t1 = prev - np.dot(prev, cur) * cur
        t2 = nxt - np.dot(nxt, cur) * cur
        n1, n2 = np.linalg.norm(t1), np.linalg.norm(t2)
        if n1 < 1e-15 or n2 < 1e-15:
            raise ValueError("consecutive vertices coincide")
        cosw = float(np.dot(t1, t2) / (n1 * n2))
        total += math.acos(max(-1.0, min(1.0, cosw)))
    return total - (n - 2) * math.pi


def intersection_area(a: SphericalRect, b: SphericalRect) -> float:
    return polygon_area_girard(rect_intersection(a, b))


def sph_overlap(adj: SphericalRect, init: SphericalRect) -> float:
    """A(adj ∩ init) / A(init) in [0, 1]."""
    return intersection_area(adj, init) / rect_area(init)


def sph_iou(adj: SphericalRect, init: SphericalRect) -> float:
    """A∩ / (A(adj) + A(init) - A∩) in [0, 1]."""
    inter = intersection_area(adj, init)
    return inter / (rect_area(adj) + rect_area(init) - inter)


def mc_area_estimate(region, n: int, seed: int, chunk: int = 1_000_000) -> float:
    """Monte-Carlo area of a region in steradians: (hits / n) * 4 pi.

    ``region`` maps an (m, 3) array of unit vectors to a boolean array.
    Sampling is uniform on the sphere (normalized Gaussian triples) from a
    seeded generator, so identical seeds give identical estimates.
    """
    if n < 1:
        raise ValueError("sample count must be >= 1")
    rng = np.random.default_rng(seed)
    hits = 0
    remaining = n
    while remaining > 0:
        m = min(chunk, remaining)
        pts = rng.standard_normal((m, 3))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        hits += int(np.count_nonzero(region(pts)))
        remaining -= m
    return hits / n * 4.0 * math.pi
