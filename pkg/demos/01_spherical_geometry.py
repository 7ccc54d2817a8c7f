"""Spherical-rectangle geometry walkthrough.

Computes closed-form areas of camera frustum footprints on the unit sphere,
intersects two of them with the great-circle polygon clipper, and checks
everything against a Monte-Carlo estimate.
"""

import numpy as np

from pano_compose.geometry import (
    SphericalDirection,
    SphericalRect,
    intersection_area,
    mc_area_estimate,
    rect_area,
    rect_contains,
    sph_iou,
    sph_overlap,
)

# A 60x60 degree frustum pointed at the horizon.
a = SphericalRect(SphericalDirection(0.0, 0.0), 60.0, 60.0)
print(f"area of a 60x60 deg rect: {rect_area(a):.6f} sr "
      f"(sphere total is {4 * np.pi:.4f} sr)")

# The same frustum yawed 25 degrees to the right and pitched up 10.
b = SphericalRect(SphericalDirection(25.0, 10.0), 60.0, 60.0)
print(f"intersection area:        {intersection_area(a, b):.6f} sr")
print(f"overlap (share of a):     {sph_overlap(b, a):.4f}")
print(f"IoU:                      {sph_iou(a, b):.4f}")

# Monte-Carlo cross-check of the intersection: sample the sphere uniformly
# and count points inside both rects.
def in_both(pts):
    return rect_contains(a, pts) & rect_contains(b, pts)

est = mc_area_estimate(in_both, n=1_000_000, seed=0)
print(f"Monte-Carlo intersection: {est:.6f} sr "
      f"(rel err {abs(est - intersection_area(a, b)) / intersection_area(a, b):.2%})")

# Area grows monotonically with FOV, up to the near-hemisphere limit.
for fov in (30.0, 60.0, 90.0, 120.0, 170.0):
    r = SphericalRect(SphericalDirection(0.0, 0.0), fov, fov)
    print(f"  fov {fov:5.1f} deg -> {rect_area(r):.4f} sr")
