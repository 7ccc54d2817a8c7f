"""End-to-end pseudo-labeling pipeline on synthetic scenes.

Generates panoramas, places initial camera poses, expands Moore-ring
candidate views, scores them with the built-in composition heuristic, and
attaches suggestion / adjustment labels.  Finishes by evaluating an oracle
predictor against the labels it just produced.
"""

import json
from pathlib import Path

import numpy as np

from pano_compose.candidates import GenerationConfig, generate_candidates
from pano_compose.labeling import HeuristicScorer, SceneRecord, label_scene
from pano_compose.manifest import read_manifest, write_manifest
from pano_compose.metrics import (
    EvalRecord,
    confusion_partition,
    cs_metric,
    mae_metric,
    roc_auc,
    sph_iou_metric,
)
from pano_compose.projection import CameraPose, ErpImage, intrinsics_from_fov
from pano_compose.synth import make_erp

out_dir = Path(__file__).parent / "out"
out_dir.mkdir(exist_ok=True)

rng = np.random.default_rng(3)
erp_path = out_dir / "scene_pano.png"
ErpImage(make_erp("horizon", 512, 256, seed=3)).save(erp_path)

K = intrinsics_from_fov(60.0, 128, 96)
cfg = GenerationConfig(lam=0.5, m_max=3, intrinsics=K)
scorer = HeuristicScorer(K)

scenes = []
for i in range(8):
    init = CameraPose(float(rng.uniform(-180, 180)), float(rng.uniform(-30, 30)))
    cands = generate_candidates(init, cfg)
    scene = SceneRecord(f"scene_{i:02d}", str(erp_path), init, tuple(cands))
    scenes.append(label_scene(scene, scorer, n_frac=0.25))
    lab = scenes[-1].labels
    print(f"{scene.scene_id}: init ({init.theta_deg:7.2f}, {init.phi_deg:6.2f}) "
          f"score {scenes[-1].init_score:.4f} -> y_s={lab.y_s} "
          f"adjust ({lab.d_theta_deg:+.1f}, {lab.d_phi_deg:+.1f}) deg "
          f"[{len(cands)} candidates]")

manifest = out_dir / "labeled.jsonl"
write_manifest(manifest, scenes, config={"n_frac": 0.25, "scorer": "heuristic"})
print(f"\nmanifest -> {manifest}")

# an oracle that predicts the labels exactly should hit every ceiling
_, loaded = read_manifest(manifest)
records = [
    EvalRecord(s.scene_id, s.labels.y_s, (s.labels.d_theta_deg, s.labels.d_phi_deg),
               1.0 if s.labels.y_s else 0.0, (s.labels.d_theta_deg, s.labels.d_phi_deg))
    for s in loaded
]
labels = [r.gt_y_s for r in records]
probs = [r.pred_suggest_prob for r in records]
pos = [i for i, r in enumerate(records) if r.gt_y_s == 1]
report = {
    "auc": roc_auc(probs, labels) if len(set(labels)) == 2 else None,
    "cs": cs_metric([records[i].pred_adjust for i in pos],
                    [records[i].gt_adjust for i in pos]) if pos else None,
    "mae_rad": mae_metric([records[i].pred_adjust for i in pos],
                          [records[i].gt_adjust for i in pos]) if pos else None,
    "confusion": {k: len(v) for k, v in confusion_partition(records).items()},
}
if pos:
    report["sphiou_tp"] = sph_iou_metric(records, {s.scene_id: s.init_pose for s in loaded}, K)
print("oracle evaluation:", json.dumps(report, indent=2, sort_keys=True))
