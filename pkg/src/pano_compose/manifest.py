"""JSONL scene manifests.

Line 1 is a header object carrying format version and config provenance;
each following line is one scene.  Unknown scene fields survive a
parse/serialize round trip untouched.  Writes are atomic (temp file plus
rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .candidates import CandidateView
from .labeling import Labels, SceneRecord
from .projection import CameraPose

MANIFEST_VERSION = 1

_KNOWN_SCENE_KEYS = {"scene_id", "erp_path", "init_pose", "init_score", "candidates", "labels"}


def scene_to_dict(scene: SceneRecord) -> dict:
    d = dict(scene.extra)
    d["scene_id"] = scene.scene_id
    d["erp_path"] = scene.erp_path
    d["init_pose"] = {"theta_deg": scene.init_pose.theta_deg, "phi_deg": scene.init_pose.phi_deg}
    if scene.init_score is not None:
        d["init_score"] = scene.init_score
    if scene.candidates:
        d["candidates"] = [
            {
                "theta_deg": c.pose.theta_deg,
                "phi_deg": c.pose.phi_deg,
                "m": c.m,
                "neighbor_index": c.neighbor_index,
                **({"score": c.score} if c.score is not None else {}),
            }
            for c in scene.candidates
        ]
    if scene.labels is not None:
        d["labels"] = {
            "y_s": scene.labels.y_s,
            "d_theta_deg": scene.labels.d_theta_deg,
            "d_phi_deg": scene.labels.d_phi_deg,
        }
    return d


def scene_from_dict(d: dict) -> SceneRecord:
    pose = CameraPose(d["init_pose"]["theta_deg"], d["init_pose"]["phi_deg"])
    candidates = tuple(
        CandidateView(
            pose=CameraPose(c["theta_deg"], c["phi_deg"]),
            m=int(c.get("m", 0)),
            neighbor_index=int(c.get("neighbor_index", -1)),
            score=c.get("score"),
        )
        for c in d.get("candidates", [])
    )
    labels = None
    if "labels" in d and d["labels"] is not None:
        lab = d["labels"]
        labels = Labels(int(lab["y_s"]), float(lab["d_theta_deg"]), float(lab["d_phi_deg"]))
    extra = {k: v for k, v in d.items() if k not in _KNOWN_SCENE_KEYS}
    return SceneRecord(
        scene_id=d["scene_id"],
        erp_path=d["erp_path"],
        init_pose=pose,
        candidates=candidates,
        init_score=d.get("init_score"),
        labels=labels,
        extra=extra,
    )


def read_manifest(path) -> tuple[dict, list[SceneRecord]]:
    with open(path) as fh:
        lines = [line for line in fh if line.strip()]
    if not lines:
        raise ValueError(f"empty manifest: {path}")
    header = json.loads(lines[0])
    if "manifest_version" not in header:
        raise ValueError(f"manifest {path} is missing its header line")
    scenes = [scene_from_dict(json.loads(line)) for line in lines[1:]]
    return header, scenes


def write_manifest(path, scenes: list[SceneRecord], config: dict | None = None, header: dict | None = None):
    """Atomically write a manifest; provenance config is stored in the header."""
    head = dict(header or {})
    head["manifest_version"] = MANIFEST_VERSION
    if config is not None:
        head["config"] = config
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(json.dumps(head, sort_keys=True) + "\n")
            for scene in sorted(scenes, key=lambda s: s.scene_id):
                fh.write(json.dumps(scene_to_dict(scene), sort_keys=True) + "\n")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def append_jsonl(path, record: dict):
    """Append one JSON object as a line (used for rating logs)."""
    with open(path, "a") as fh:
        fh.write(json.dumps(record, sort_keys=True) + "\n")
