"""Candidate-view pose generation: Moore-neighborhood rings around an initial
pose, filtered by the spherical content-preservation constraint."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

from .geometry import sph_overlap, wrap_angle_deg
from .projection import CameraIntrinsics, CameraPose, intrinsics_from_fov, view_rect_of

# Row-major scan of the 3x3 offset grid, center skipped.
_MOORE_OFFSETS = [
    (-1, -1), (0, -1), (1, -1),
    (-1, 0), (1, 0),
    (-1, 1), (0, 1), (1, 1),
]


@dataclass(frozen=True)
class GenerationConfig:
    step_theta_deg: float = 5.0
    step_phi_deg: float = 5.0
    m_max: int = 10
    lam: float = 0.5
    intrinsics: CameraIntrinsics = field(default_factory=intrinsics_from_fov)

    def __post_init__(self):
        if self.step_theta_deg <= 0 or self.step_phi_deg <= 0:
            raise ValueError("step sizes must be positive")
        if self.m_max < 1:
            raise ValueError("m_max must be >= 1")
        if not 0.0 <= self.lam < 1.0:
            raise ValueError("overlap threshold must be in [0, 1)")


@dataclass(frozen=True)
class CandidateView:
    pose: CameraPose
    m: int
    neighbor_index: int
    score: Optional[float] = None

    def with_score(self, score: float) -> "CandidateView":
        return replace(self, score=score)


def wrap_pose(theta_deg: float, phi_deg: float) -> Optional[CameraPose]:
    """Normalize yaw into [-180, 180); reject (return None) on pole crossing."""
    if abs(phi_deg) > 90.0:
        return None
    return CameraPose(wrap_angle_deg(theta_deg), phi_deg)


def moore_neighbors(pose: CameraPose, cfg: GenerationConfig, m: int) -> list[CameraPose]:
    """The up-to-8 ring-m neighbors of a pose; pole-crossing offsets dropped."""
    if m < 1:
        raise ValueError("ring index must be >= 1")
    out = []
    for dt, dp in _MOORE_OFFSETS:
        cand = wrap_pose(
            pose.theta_deg + dt * m * cfg.step_theta_deg,
            pose.phi_deg + dp * m * cfg.step_phi_deg,
        )
        if cand is not None:
            out.append(cand)
    return out


def generate_candidates(init: CameraPose, cfg: GenerationConfig) -> list[CandidateView]:
    """Ring-by-ring Moore neighbors of ``init`` that keep spherical overlap
    with the initial view strictly above the threshold.

    The initial pose itself is never emitted; order is deterministic
    (ring ascending, then offset-grid order), duplicates dropped.
    """
    init_rect = view_rect_of(init, cfg.intrinsics)
    init_area_keyed = (round(init.theta_deg, 9), round(init.phi_deg, 9))
    seen = {init_area_keyed}
    out: list[CandidateView] = []
    for m in range(1, cfg.m_max + 1):
        for idx, (dt, dp) in enumerate(_MOORE_OFFSETS):
            pose = wrap_pose(
                init.theta_deg + dt * m * cfg.step_theta_deg,
                init.phi_deg + dp * m * cfg.step_phi_deg,
            )
            if pose is None:
                continue
            key = (round(pose.theta_deg, 9), round(pose.phi_deg, 9))
            if key in seen:
                continue
            if sph_overlap(view_rect_of(pose, cfg.intrinsics), init_rect) > cfg.lam:
                seen.add(key)
                out.append(CandidateView(pose=pose, m=m, neighbor_index=idx))
    return out
