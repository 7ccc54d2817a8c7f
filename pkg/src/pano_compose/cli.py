"""pano-compose command line: synth | extract | candidates | label | eval |
gradcheck | serve.

Angles are exchanged in degrees; evaluation reports tag MAE with its unit
(radians).  Every error path exits nonzero with a single-line reason on
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import gradcheck as gradcheck_mod
from .candidates import GenerationConfig, generate_candidates
from .labeling import (
    DEFAULT_N_FRAC,
    CsvScorer,
    HeuristicScorer,
    LabelingError,
    label_scene,
)
from .manifest import read_manifest, write_manifest
from .metrics import (
    DECISION_THRESHOLD,
    EvalRecord,
    confusion_partition,
    cs_metric,
    mae_metric,
    roc_auc,
    sph_iou_metric,
)
from .projection import (
    DEFAULT_FOV_Y,
    DEFAULT_VIEW_H,
    DEFAULT_VIEW_W,
    CameraPose,
    ErpImage,
    intrinsics_from_fov,
    render_view,
    view_rect_of,
)
from .synth import PATTERNS, make_erp


class CliError(RuntimeError):
    pass


def _add_view_args(p: argparse.ArgumentParser):
    p.add_argument("--fov-y", type=float, default=DEFAULT_FOV_Y, help="vertical FOV in degrees")
    p.add_argument("--view-w", type=int, default=DEFAULT_VIEW_W, help="view width in pixels")
    p.add_argument("--view-h", type=int, default=DEFAULT_VIEW_H, help="view height in pixels")


def cmd_synth(args) -> int:
    erp = make_erp(args.pattern, args.width, args.height, seed=args.seed)
    ErpImage(erp).save(args.out)
    print(f"wrote {args.pattern} panorama {args.width}x{args.height} to {args.out}")
    return 0


def cmd_extract(args) -> int:
    erp = ErpImage.load(args.erp)
    K = intrinsics_from_fov(args.fov_y, args.view_w, args.view_h)
    pose = CameraPose(args.theta, args.phi)
    view = render_view(erp, pose, K)
    view.save(args.out)
    rect = view_rect_of(pose, K)
    print(
        json.dumps(
            {
                "theta_deg": rect.center.theta_deg,
                "phi_deg": rect.center.phi_deg,
                "alpha_deg": rect.alpha_deg,
                "beta_deg": rect.beta_deg,
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_candidates(args) -> int:
    _, scenes = read_manifest(args.manifest_in)
    K = intrinsics_from_fov(args.fov_y, args.view_w, args.view_h)
    cfg = GenerationConfig(
        step_theta_deg=args.step_deg,
        step_phi_deg=args.step_deg,
        m_max=args.m_max,
        lam=getattr(args, "lambda"),
        intrinsics=K,
    )
    out = []
    failures = []
    for scene in scenes:
        if not Path(scene.erp_path).exists():
            failures.append(scene.scene_id)
            print(f"error: scene {scene.scene_id}: missing ERP {scene.erp_path}", file=sys.stderr)
            continue
        out.append(replace(scene, candidates=tuple(generate_candidates(scene.init_pose, cfg))))
    if scenes and not out:
        raise CliError("all scenes failed candidate generation")
    config = {
        "step_theta_deg": cfg.step_theta_deg,
        "step_phi_deg": cfg.step_phi_deg,
        "m_max": cfg.m_max,
        "lambda": cfg.lam,
        "fov_y_deg": args.fov_y,
        "view_w": args.view_w,
        "view_h": args.view_h,
    }
    write_manifest(args.manifest_out, out, config=config)
    print(f"candidates for {len(out)} scenes -> {args.manifest_out}" + (f" ({len(failures)} failed)" if failures else ""))
    return 0


def _make_scorer(spec: str, K):
    if spec == "heuristic":
        return HeuristicScorer(K)
    if spec.startswith("csv:"):
        return CsvScorer(spec[4:])
    raise CliError(f"unknown scorer {spec!r}; use 'heuristic' or 'csv:<path>'")


def cmd_label(args) -> int:
    header, scenes = read_manifest(args.manifest_in)
    K = intrinsics_from_fov(args.fov_y, args.view_w, args.view_h)
    scorer = _make_scorer(args.scorer, K)
    labeled = []
    failures = 0
    for scene in scenes:
        try:
            labeled.append(label_scene(scene, scorer, n_frac=args.top_n))
        except LabelingError as exc:
            failures += 1
            print(f"error: {exc}", file=sys.stderr)
    if scenes and not labeled:
        raise CliError("labeling failed for every scene")
    config = dict(header.get("config", {}))
    config.update({"n_frac": args.top_n, "scorer": args.scorer})
    write_manifest(args.manifest_out, labeled, config=config)

    n_suggest = sum(1 for s in labeled if s.labels and s.labels.y_s == 1)
    print(f"labeled {len(labeled)} scenes (n_frac={args.top_n}): y_s=1: {n_suggest}, y_s=0: {len(labeled) - n_suggest}")
    hist = Counter()
    for s in labeled:
        if s.labels and s.labels.y_s == 1:
            dt, dp = s.labels.d_theta_deg, s.labels.d_phi_deg
            direction = (int(np.sign(dt)), int(np.sign(dp)))
            ring = round(max(abs(dt), abs(dp)) / max(args.step_deg, 1e-9))
            hist[(direction, ring)] += 1
    for (direction, ring), count in sorted(hist.items()):
        print(f"  adjustment direction {direction} ring {ring}: {count}")
    if failures:
        print(f"{failures} scenes failed", file=sys.stderr)
    return 0


def _read_predictions(path) -> dict[str, dict]:
    preds = {}
    with open(path) as fh:
        for line in fh:
            if not line.strip():
                continue
            rec = json.loads(line)
            preds[rec["scene_id"]] = rec
    return preds


def cmd_eval(args) -> int:
    _, scenes = read_manifest(args.manifest)
    preds = _read_predictions(args.pred)
    gt = {s.scene_id: s for s in scenes if s.labels is not None}
    missing = sorted(set(gt) - set(preds))
    if missing:
        raise CliError(f"predictions missing for scene_ids: {','.join(missing)}")
    K = intrinsics_from_fov(args.fov_y, args.view_w, args.view_h)
    records = []
    init_poses = {}
    for scene_id in sorted(gt):
        s = gt[scene_id]
        p = preds[scene_id]
        records.append(
            EvalRecord(
                scene_id=scene_id,
                gt_y_s=s.labels.y_s,
                gt_adjust=(s.labels.d_theta_deg, s.labels.d_phi_deg),
                pred_suggest_prob=float(p["suggest_prob"]),
                pred_adjust=(float(p["d_theta_deg"]), float(p["d_phi_deg"])),
                threshold=args.threshold,
            )
        )
        init_poses[scene_id] = s.init_pose
    labels = [r.gt_y_s for r in records]
    probs = [r.pred_suggest_prob for r in records]
    adjust_idx = [i for i, r in enumerate(records) if r.gt_y_s == 1]
    parts = confusion_partition(records)
    report = {
        "n_scenes": len(records),
        "decision_threshold": args.threshold,
        "auc": roc_auc(probs, labels) if len(set(labels)) == 2 else None,
        "cs": cs_metric(
            [records[i].pred_adjust for i in adjust_idx],
            [records[i].gt_adjust for i in adjust_idx],
        )
        if adjust_idx
        else None,
        "mae_rad": mae_metric(
            [records[i].pred_adjust for i in adjust_idx],
            [records[i].gt_adjust for i in adjust_idx],
        )
        if adjust_idx
        else None,
        "mae_unit": "rad",
        "sphiou_tp": sph_iou_metric(records, init_poses, K, "tp") if parts["tp"] else None,
        "sphiou_tp_fp": sph_iou_metric(records, init_poses, K, "tp_fp")
        if parts["tp"] or parts["fp"]
        else None,
        "confusion": {k: len(v) for k, v in parts.items()},
    }
    text = json.dumps(report, indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(text)
    return 0


def cmd_gradcheck(args) -> int:
    results = gradcheck_mod.run_all(seed=args.seed, trials=args.trials)
    worst_fail = False
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status:4s} {r.name:<28s} max rel err {r.max_rel_err:.3e} (tol {r.tol:.1e})")
        worst_fail |= not r.passed
    return 1 if worst_fail else 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    app = create_app(args.manifest, args.data_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except OSError as exc:
        raise CliError(f"cannot bind port {args.port}: {exc}") from exc
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pano-compose")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a procedural test panorama")
    p.add_argument("--width", type=int, default=2048)
    p.add_argument("--height", type=int, default=1024)
    p.add_argument("--pattern", choices=PATTERNS, default="direction")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("extract", help="render one perspective view from a panorama")
    p.add_argument("--erp", required=True)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--phi", type=float, default=0.0)
    _add_view_args(p)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("candidates", help="populate candidate views in a manifest")
    p.add_argument("--manifest-in", required=True)
    p.add_argument("--manifest-out", required=True)
    p.add_argument("--step-deg", type=float, default=5.0)
    p.add_argument("--m-max", type=int, default=10)
    p.add_argument("--lambda", type=float, default=0.5)
    _add_view_args(p)
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("label", help="attach pseudo-labels to a manifest")
    p.add_argument("--manifest-in", required=True)
    p.add_argument("--manifest-out", required=True)
    p.add_argument("--scorer", default="heuristic", help="'heuristic' or 'csv:<path>'")
    p.add_argument("--top-n", type=float, default=DEFAULT_N_FRAC, help="threshold rank fraction")
    p.add_argument("--step-deg", type=float, default=5.0, help="step size for the summary histogram")
    _add_view_args(p)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("eval", help="score predictions against a labeled manifest")
    p.add_argument("--pred", required=True, help="JSONL with scene_id, suggest_prob, d_theta_deg, d_phi_deg")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--threshold", type=float, default=DECISION_THRESHOLD)
    _add_view_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("gradcheck", help="run the model-math gradient and invariant checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("serve", help="serve the viewer HTTP API")
    p.add_argument("--manifest", required=True)
    p.add_argument("--data-dir", default=".")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8710)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, LabelingError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
