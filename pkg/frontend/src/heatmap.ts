/**
 * Candidate heatmap overlay: maps candidate poses onto equirectangular
 * panorama pixels and scores onto colors.  Overlay values are taken verbatim
 * from the manifest -- no rescoring happens client side.
 */

import { Pose, wrapTheta } from "./pose.js";

export interface Candidate {
  theta_deg: number;
  phi_deg: number;
  m: number;
  neighbor_index: number;
  score?: number;
}

export interface OverlayPoint {
  x: number;
  y: number;
  score: number;
  color: string;
  candidate: Candidate;
}

/** Equirectangular pixel of a direction: u = (θ/360 + 1/2)·W, v = (1/2 − φ/180)·H. */
export function erpPixel(pose: Pose, width: number, height: number): { x: number; y: number } {
  return {
    x: (wrapTheta(pose.thetaDeg) / 360 + 0.5) * width,
    y: (0.5 - pose.phiDeg / 180) * height,
  };
}

/** Linear score → color ramp (blue = low, red = high) over the given range. */
export function scoreColor(score: number, min: number, max: number): string {
  const t = max > min ? Math.min(1, Math.max(0, (score - min) / (max - min))) : 0.5;
  const r = Math.round(255 * t);
  const b = Math.round(255 * (1 - t));
  return `rgb(${r}, 64, ${b})`;
}

/**
 * Build overlay points for every scored candidate.  Returns null when any
 * candidate lacks a score (unlabeled scene → overlay disabled).
 */
export function buildOverlay(
  candidates: Candidate[],
  width: number,
  height: number,
): OverlayPoint[] | null {
  if (candidates.length === 0 || candidates.some((c) => c.score === undefined)) {
    return null;
  }
  const scores = candidates.map((c) => c.score as number);
  const min = Math.min(...scores);
  const max = Math.max(...scores);
  return candidates.map((c) => {
    const { x, y } = erpPixel({ thetaDeg: c.theta_deg, phiDeg: c.phi_deg }, width, height);
    return { x, y, score: c.score as number, color: scoreColor(c.score as number, min, max), candidate: c };
  });
}

/**
 * The arrow drawn from the initial pose to the labeled best candidate, or
 * null when no adjustment is suggested (y_s = 0).
 */
export function adjustmentArrow(
  initPose: Pose,
  labels: { y_s: number; d_theta_deg: number; d_phi_deg: number } | null,
  width: number,
  height: number,
): { from: { x: number; y: number }; to: { x: number; y: number } } | null {
  if (!labels || labels.y_s === 0) return null;
  const target: Pose = {
    thetaDeg: wrapTheta(initPose.thetaDeg + labels.d_theta_deg),
    phiDeg: initPose.phiDeg + labels.d_phi_deg,
  };
  return { from: erpPixel(initPose, width, height), to: erpPixel(target, width, height) };
}
