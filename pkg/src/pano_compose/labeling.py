"""Score-guided pseudo-label generation.

Given a scored initial view and scored candidate views, a scene gets:
  * an adaptive threshold tau = the k-th candidate score in descending order,
    k = max(1, round(n_frac * M));
  * a suggestion bit y_s = 1 iff the initial score falls strictly below tau;
  * an adjustment vector y_a = pose(best candidate) - pose(init) when y_s = 1,
    with the yaw difference taken as the shortest signed arc, else (0, 0).

Scorers are pluggable: anything callable as scorer(scene, pose) -> float.
Ties at the top score break toward the smallest adjustment magnitude, then
candidate order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from .candidates import CandidateView
from .projection import (
    CameraIntrinsics,
    CameraPose,
    ErpImage,
    ViewImage,
    intrinsics_from_fov,
    render_view,
)

DEFAULT_N_FRAC = 0.25

Scorer = Callable[["SceneRecord", CameraPose], float]


class LabelingError(RuntimeError):
    pass


@dataclass(frozen=True)
class Labels:
    y_s: int
    d_theta_deg: float
    d_phi_deg: float

    def __post_init__(self):
        if self.y_s not in (0, 1):
            raise ValueError("suggestion label must be 0 or 1")
        if self.y_s == 0 and (self.d_theta_deg, self.d_phi_deg) != (0.0, 0.0):
            raise ValueError("no-suggestion label requires a zero adjustment")
        if self.y_s == 1 and (self.d_theta_deg, self.d_phi_deg) == (0.0, 0.0):
            raise ValueError("suggestion label requires a nonzero adjustment")
        if not -180.0 < self.d_theta_deg <= 180.0:
            raise ValueError("yaw adjustment must lie in (-180, 180]")


@dataclass(frozen=True)
class SceneRecord:
    scene_id: str
    erp_path: str
    init_pose: CameraPose
    candidates: tuple[CandidateView, ...] = ()
    init_score: Optional[float] = None
    labels: Optional[Labels] = None
    extra: dict = field(default_factory=dict, compare=False)


def signed_arc_deg(from_deg: float, to_deg: float) -> float:
    """Shortest signed arc from one yaw to another, in (-180, 180]."""
    d = (to_deg - from_deg + 180.0) % 360.0 - 180.0
    return 180.0 if d == -180.0 else d


def adaptive_threshold(scores, n_frac: float) -> float:
    """The k-th score in descending order, k = max(1, round(n_frac * M))."""
    scores = list(scores)
    if not scores:
        raise ValueError("no candidate scores")
    if not 0.0 < n_frac <= 1.0:
        raise ValueError("n_frac must be in (0, 1]")
    k = max(1, int(math.floor(n_frac * len(scores) + 0.5)))
    ranked = sorted(scores, reverse=True)
    return ranked[k - 1]


def suggestion_label(s_init: float, tau: float) -> int:
    """1 if the initial view scores strictly below the threshold, else 0."""
    return 1 if s_init < tau else 0


def adjustment_label(
    candidates: list[CandidateView], init: CameraPose, y_s: int
) -> tuple[float, float]:
    """Adjustment toward the best-scoring candidate (ties: smallest move,
    then candidate order); (0, 0) when no suggestion."""
    if y_s == 0:
        return (0.0, 0.0)
    if not candidates:
        raise LabelingError("suggestion requires a nonempty candidate list")
    if any(c.score is None for c in candidates):
        raise LabelingError("all candidates must be scored")
    best = None
    best_key = None
    for c in candidates:
        dt = signed_arc_deg(init.theta_deg, c.pose.theta_deg)
        dp = c.pose.phi_deg - init.phi_deg
        key = (-c.score, math.hypot(dt, dp))
        if best_key is None or key < best_key:
            best, best_key = (dt, dp), key
    return best


def label_scene(scene: SceneRecord, scorer: Scorer, n_frac: float = DEFAULT_N_FRAC) -> SceneRecord:
    """Score the initial view and every candidate, then attach labels.

    Scores are cached in the returned record, so relabeling with another
    n_frac needs no rescoring.
    """
    if not scene.candidates:
        raise LabelingError(f"scene {scene.scene_id!r} has no candidate views")
    try:
        s_init = scene.init_score if scene.init_score is not None else scorer(scene, scene.init_pose)
        scored = tuple(
            c if c.score is not None else c.with_score(scorer(scene, c.pose))
            for c in scene.candidates
        )
    except LabelingError:
        raise
    except Exception as exc:
        raise LabelingError(f"scorer failed on scene {scene.scene_id!r}: {exc}") from exc
    tau = adaptive_threshold([c.score for c in scored], n_frac)
    y_s = suggestion_label(s_init, tau)
    d_theta, d_phi = adjustment_label(list(scored), scene.init_pose, y_s)
    return replace(
        scene,
        init_score=s_init,
        candidates=scored,
        labels=Labels(y_s=y_s, d_theta_deg=d_theta, d_phi_deg=d_phi),
    )


# --- scorers -----------------------------------------------------------


def heuristic_score(view) -> float:
    """A deterministic composition proxy for demo pipelines.

    With L the luminance in [0, 1] and (gx, gy) = np.gradient(L):
      * gradient energy E = hypot(gx, gy);
      * each pixel is weighted by exp(-(d / 0.2)^2) where d is its distance,
        in image-normalized coordinates, to the nearest rule-of-thirds
        intersection;
      * energy term = 100 * mean(E * weight);
      * tilt penalty: with row profiles of |gy| over the left and right image
        halves, take the energy-weighted mean rows j_left and j_right; the
        penalty is |j_left - j_right| / h (0 when a half has no energy).

    score = energy term - tilt penalty.  A uniform image scores 0.
    """
    px = view.pixels if isinstance(view, ViewImage) else np.asarray(view)
    lum = (
        0.299 * px[..., 0].astype(np.float64)
        + 0.587 * px[..., 1]
        + 0.114 * px[..., 2]
    ) / 255.0
    gy, gx = np.gradient(lum)
    energy = np.hypot(gx, gy)
    h, w = lum.shape
    ys = (np.arange(h) + 0.5) / h
    xs = (np.arange(w) + 0.5) / w
    dx = np.minimum(np.abs(xs - 1.0 / 3.0), np.abs(xs - 2.0 / 3.0))
    dy = np.minimum(np.abs(ys - 1.0 / 3.0), np.abs(ys - 2.0 / 3.0))
    d2 = dy[:, None] ** 2 + dx[None, :] ** 2
    weight = np.exp(-d2 / 0.04)
    energy_term = 100.0 * float(np.mean(energy * weight))

    def _mean_row(profile: np.ndarray) -> float:
        total = profile.sum()
        return float((profile * np.arange(h)).sum() / total) if total > 0 else 0.0

    gy_abs = np.abs(gy)
    j_left = _mean_row(gy_abs[:, : w // 2].sum(axis=1))
    j_right = _mean_row(gy_abs[:, w // 2 :].sum(axis=1))
    return energy_term - abs(j_left - j_right) / h


class HeuristicScorer:
    """Renders each view from the scene's panorama and applies
    heuristic_score.  Panoramas are cached per path."""

    def __init__(self, intrinsics: Optional[CameraIntrinsics] = None):
        self.intrinsics = intrinsics or intrinsics_from_fov()
        self._cache: dict[str, ErpImage] = {}

    def _erp(self, path: str) -> ErpImage:
        if path not in self._cache:
            self._cache[path] = ErpImage.load(path)
        return self._cache[path]

    def __call__(self, scene: SceneRecord, pose: CameraPose) -> float:
        view = render_view(self._erp(scene.erp_path), pose, self.intrinsics, scene.scene_id)
        return heuristic_score(view)


class CsvScorer:
    """Lookup scorer backed by a CSV of ``scene_id,theta_deg,phi_deg,score``
    rows; poses match within 1e-6 degrees."""

    def __init__(self, path):
        self._table: dict[tuple[str, float, float], float] = {}
        with open(Path(path), newline="") as fh:
            reader = csv.DictReader(fh)
            required = {"scene_id", "theta_deg", "phi_deg", "score"}
            if reader.fieldnames is None or not required.issubset(reader.fieldnames):
                raise ValueError(f"score CSV must have columns {sorted(required)}")
            for row in reader:
                key = self._key(row["scene_id"], float(row["theta_deg"]), float(row["phi_deg"]))
                self._table[key] = float(row["score"])

    @staticmethod
    def _key(scene_id: str, theta: float, phi: float):
        return (scene_id, round(theta, 6), round(phi, 6))

    def __call__(self, scene: SceneRecord, pose: CameraPose) -> float:
        # Probe the adjacent rounding bins too, so poses within 1e-6 of a
        # table entry match even across a rounding boundary.
        for dt in (0.0, -1e-6, 1e-6):
            for dp in (0.0, -1e-6, 1e-6):
                key = self._key(scene.scene_id, pose.theta_deg + dt, pose.phi_deg + dp)
                if key in self._table:
                    return self._table[key]
        raise LabelingError(
            f"no CSV score for scene {scene.scene_id!r} at "
            f"({pose.theta_deg:.6f}, {pose.phi_deg:.6f})"
        )
