"""HTTP API backing the browser viewer.

Reads are served straight from the in-memory manifest; writes (initial-pose
updates, A/B ratings) are serialized behind a lock and persisted atomically
before the response is sent.
"""

from __future__ import annotations

import io
import threading
from dataclasses import replace
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse, Response
from PIL import Image
from pydantic import BaseModel

from .manifest import append_jsonl, read_manifest, scene_to_dict, write_manifest
from .projection import (
    DEFAULT_FOV_Y,
    DEFAULT_VIEW_H,
    DEFAULT_VIEW_W,
    CameraPose,
    ErpImage,
    intrinsics_from_fov,
    render_view,
)


class InitPoseBody(BaseModel):
    theta_deg: float
    phi_deg: float


class RatingBody(BaseModel):
    scene_id: str
    left_ref: str
    right_ref: str
    choice: str  # left | right | same


def create_app(manifest_path, data_dir=".") -> FastAPI:
    manifest_path = Path(manifest_path)
    data_dir = Path(data_dir)
    header, scene_list = read_manifest(manifest_path)
    scenes = {s.scene_id: s for s in scene_list}
    erp_cache: dict[str, ErpImage] = {}
    lock = threading.Lock()
    ratings_path = data_dir / "ratings.jsonl"

    app = FastAPI(title="pano-compose viewer API")

    def _scene(scene_id: str):
        if scene_id not in scenes:
            raise HTTPException(404, f"unknown scene {scene_id!r}")
        return scenes[scene_id]

    def _erp(scene) -> ErpImage:
        if scene.erp_path not in erp_cache:
            path = Path(scene.erp_path)
            if not path.is_absolute():
                path = data_dir / path
            if not path.exists():
                raise HTTPException(404, f"panorama file missing: {scene.erp_path}")
            erp_cache[scene.erp_path] = ErpImage.load(path)
        return erp_cache[scene.erp_path]

    @app.get("/api/scenes")
    def list_scenes():
        return {"scenes": sorted(scenes)}

    @app.get("/api/scenes/{scene_id}")
    def get_scene(scene_id: str):
        return scene_to_dict(_scene(scene_id))

    @app.get("/api/scenes/{scene_id}/erp.jpg")
    def get_erp(scene_id: str):
        erp = _erp(_scene(scene_id))
        buf = io.BytesIO()
        Image.fromarray(erp.pixels).save(buf, format="JPEG", quality=90)
        return Response(buf.getvalue(), media_type="image/jpeg")

    @app.get("/api/scenes/{scene_id}/view")
    def get_view(
        scene_id: str,
        theta: float = 0.0,
        phi: float = 0.0,
        fovy: float = DEFAULT_FOV_Y,
        w: int = DEFAULT_VIEW_W,
        h: int = DEFAULT_VIEW_H,
    ):
        scene = _scene(scene_id)
        try:
            K = intrinsics_from_fov(fovy, w, h)
            pose = CameraPose(theta, phi)
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from exc
        view = render_view(_erp(scene), pose, K, scene_id)
        buf = io.BytesIO()
        Image.fromarray(view.pixels).save(buf, format="PNG")
        return Response(
            buf.getvalue(),
            media_type="image/png",
            headers={"X-Pose-Theta": repr(pose.theta_deg), "X-Pose-Phi": repr(pose.phi_deg)},
        )

    @app.get("/api/scenes/{scene_id}/candidates")
    def get_candidates(scene_id: str):
        scene = _scene(scene_id)
        return {
            "scene_id": scene_id,
            "candidates": scene_to_dict(scene).get("candidates", []),
        }

    @app.get("/api/scenes/{scene_id}/labels")
    def get_labels(scene_id: str):
        scene = _scene(scene_id)
        d = scene_to_dict(scene)
        return {
            "scene_id": scene_id,
            "labels": d.get("labels"),
            "init_score": d.get("init_score"),
            "init_pose": d["init_pose"],
        }

    @app.post("/api/scenes/{scene_id}/init")
    def set_init_pose(scene_id: str, body: InitPoseBody):
        try:
            pose = CameraPose(body.theta_deg, body.phi_deg)
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from exc
        with lock:
            scene = _scene(scene_id)
            scenes[scene_id] = replace(scene, init_pose=pose)
            write_manifest(manifest_path, list(scenes.values()), header=header)
        return {
            "scene_id": scene_id,
            "init_pose": {"theta_deg": pose.theta_deg, "phi_deg": pose.phi_deg},
        }

    @app.post("/api/ratings")
    def post_rating(body: RatingBody):
        if body.choice not in ("left", "right", "same"):
            raise HTTPException(422, "choice must be left, right, or same")
        _scene(body.scene_id)
        record = body.model_dump()
        with lock:
            append_jsonl(ratings_path, record)
        return {"status": "ok", **record}

    return app
