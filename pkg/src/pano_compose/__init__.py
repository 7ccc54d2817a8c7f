"""Spherical geometry, panorama view extraction, and composition
pseudo-labeling toolkit."""

from .candidates import CandidateView, GenerationConfig, generate_candidates, moore_neighbors, wrap_pose
from .geometry import (
    SphericalDirection,
    SphericalPolygon,
    SphericalRect,
    dir_to_vec,
    mc_area_estimate,
    polygon_area_girard,
    rect_area,
    rect_contains,
    rect_intersection,
    sph_iou,
    sph_overlap,
    vec_to_dir,
)
from .labeling import (
    CsvScorer,
    HeuristicScorer,
    Labels,
    SceneRecord,
    adaptive_threshold,
    adjustment_label,
    heuristic_score,
    label_scene,
    suggestion_label,
)
from .projection import (
    CameraIntrinsics,
    CameraPose,
    ErpImage,
    ViewImage,
    erp_pixel_to_sphere,
    intrinsics_from_fov,
    render_view,
    sphere_to_erp_pixel,
    view_pixel_to_sphere,
    view_rect_of,
)

__version__ = "0.1.0"
