"""Evaluation of suggestion and adjustment predictions.

MAE is reported in radians over the raw (d_theta, d_phi) components; every
report carries the unit tag.  Spherical IoU is averaged over the true-positive
subset or over TP plus false positives, where a false positive's ground-truth
pose is the initial pose itself (its adjustment label is zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .geometry import sph_iou
from .labeling import signed_arc_deg
from .projection import CameraIntrinsics, CameraPose, view_rect_of

DECISION_THRESHOLD = 0.5


@dataclass(frozen=True)
class EvalRecord:
    scene_id: str
    gt_y_s: int
    gt_adjust: tuple[float, float]  # degrees
    pred_suggest_prob: float
    pred_adjust: tuple[float, float]  # degrees
    threshold: float = DECISION_THRESHOLD

    def __post_init__(self):
        if not 0.0 <= self.pred_suggest_prob <= 1.0:
            raise ValueError("suggestion probability must be in [0, 1]")

    @property
    def pred_suggest(self) -> int:
        return 1 if self.pred_suggest_prob >= self.threshold else 0


def roc_auc(probs, labels) -> float:
    """Exact Mann-Whitney AUC: P(score+ > score-) + 0.5 P(tie)."""
    probs = np.asarray(probs, dtype=float)
    labels = np.asarray(labels, dtype=int)
    n_pos = int(np.count_nonzero(labels == 1))
    n_neg = int(np.count_nonzero(labels == 0))
    if n_pos == 0 or n_neg == 0:
        raise ValueError("AUC needs both classes present")
    ranks = rankdata(probs, method="average")
    u = ranks[labels == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def cs_metric(preds, gts) -> float:
    """Mean cosine similarity; zero-norm predictions score cosine 0."""
    preds = np.asarray(preds, dtype=float)
    gts = np.asarray(gts, dtype=float)
    if preds.shape[0] == 0:
        raise ValueError("empty input")
    pn = np.linalg.norm(preds, axis=1)
    tn = np.linalg.norm(gts, axis=1)
    if np.any(tn < 1e-12):
        raise ValueError("ground-truth adjustments must be nonzero")
    cos = np.where(pn < 1e-12, 0.0, np.sum(preds * gts, axis=1) / np.maximum(pn * tn, 1e-300))
    return float(np.mean(cos))


def mae_metric(preds, gts) -> float:
    """Mean absolute error over samples and both components, in radians
    (inputs in degrees)."""
    preds = np.asarray(preds, dtype=float)
    gts = np.asarray(gts, dtype=float)
    if preds.shape[0] == 0:
        raise ValueError("empty input")
    return float(np.mean(np.abs(preds - gts)) * math.pi / 180.0)


def confusion_partition(records: list[EvalRecord]) -> dict[str, list[int]]:
    """Disjoint, exhaustive 2x2 partition of record indices on
    (pred_suggest, gt y_s)."""
    out = {"tp": [], "fp": [], "tn": [], "fn": []}
    for idx, r in enumerate(records):
        if r.pred_suggest == 1:
            out["tp" if r.gt_y_s == 1 else "fp"].append(idx)
        else:
            out["fn" if r.gt_y_s == 1 else "tn"].append(idx)
    return out


def _shifted_pose(init: CameraPose, adjust: tuple[float, float]) -> CameraPose:
    phi = min(90.0, max(-90.0, init.phi_deg + adjust[1]))
    return CameraPose(init.theta_deg + adjust[0], phi)


def sph_iou_metric(
    records: list[EvalRecord],
    init_poses: dict[str, CameraPose],
    K: CameraIntrinsics,
    subset: str = "tp",
) -> float:
    """Mean spherical IoU between predicted and ground-truth adjusted frusta
    over the ``tp`` or ``tp_fp`` subset."""
    if subset not in ("tp", "tp_fp"):
        raise ValueError("subset must be 'tp' or 'tp_fp'")
    parts = confusion_partition(records)
    indices = parts["tp"] + (parts["fp"] if subset == "tp_fp" else [])
    if not indices:
        counts = {k: len(v) for k, v in parts.items()}
        raise ValueError(f"empty {subset} subset; confusion counts: {counts}")
    total = 0.0
    for idx in sorted(indices):
        r = records[idx]
        init = init_poses[r.scene_id]
        pred_rect = view_rect_of(_shifted_pose(init, r.pred_adjust), K)
        gt_rect = view_rect_of(_shifted_pose(init, r.gt_adjust), K)
        total += sph_iou(pred_rect, gt_rect)
    return total / len(indices)


def signed_adjust_error(pred: tuple[float, float], gt: tuple[float, float]) -> tuple[float, float]:
    """Component-wise prediction error with yaw wrapped to the short arc."""
    return (signed_arc_deg(gt[0], pred[0]), pred[1] - gt[1])
