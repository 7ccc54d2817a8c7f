/**
 * Camera pose math for the viewer.
 *
 * The viewer performs no composition math of its own: yaw wraps and pitch
 * clamps exactly like the server's pose handling, so the pose readout always
 * matches what the server echoes back.
 */

export interface Pose {
  thetaDeg: number;
  phiDeg: number;
}

/** Wrap a yaw into the canonical [-180, 180) interval. */
export function wrapTheta(thetaDeg: number): number {
  const wrapped = ((thetaDeg + 180) % 360 + 360) % 360 - 180;
  // -0 would render as "-0.0" in the readout
  return wrapped === 0 ? 0 : wrapped;
}

/** Clamp a pitch to the valid [-90, 90] range. */
export function clampPhi(phiDeg: number): number {
  return Math.min(90, Math.max(-90, phiDeg));
}

export function canonicalPose(thetaDeg: number, phiDeg: number): Pose {
  return { thetaDeg: wrapTheta(thetaDeg), phiDeg: clampPhi(phiDeg) };
}

/**
 * Apply a drag delta (in degrees) to a pose.  Dragging right pans the camera
 * left, hence the sign on yaw; a full 360 drag returns to the start.
 */
export function applyDrag(pose: Pose, dThetaDeg: number, dPhiDeg: number): Pose {
  return canonicalPose(pose.thetaDeg + dThetaDeg, pose.phiDeg + dPhiDeg);
}

/** Degrees-per-pixel drag sensitivity for a view of the given width/FOV. */
export function dragScale(fovXDeg: number, viewWidthPx: number): number {
  return fovXDeg / viewWidthPx;
}

/** True when two poses agree within the given tolerance (default 0.1 deg). */
export function posesAgree(a: Pose, b: Pose, tolDeg = 0.1): boolean {
  const dTheta = Math.abs(wrapTheta(a.thetaDeg - b.thetaDeg));
  return dTheta <= tolDeg && Math.abs(a.phiDeg - b.phiDeg) <= tolDeg;
}

export function formatPose(pose: Pose): string {
  return `θ ${pose.thetaDeg.toFixed(1)}°, φ ${pose.phiDeg.toFixed(1)}°`;
}
