/**
 * Typed client for the pano-compose serve API.  All viewer mutations go
 * through these endpoints; the UI keeps no state across reloads except what
 * the server persists.
 */

import { Pose } from "./pose.js";
import { Candidate } from "./heatmap.js";
import { RatingRow } from "./rating.js";

export interface SceneLabels {
  y_s: number;
  d_theta_deg: number;
  d_phi_deg: number;
}

export interface Scene {
  scene_id: string;
  erp_path: string;
  init_pose: { theta_deg: number; phi_deg: number };
  init_score?: number;
  candidates?: Candidate[];
  labels?: SceneLabels;
}

export interface ViewResponse {
  blobUrl: string;
  /** pose the server actually rendered, from the response headers */
  echoedPose: Pose;
}

export class ApiClient {
  constructor(private readonly baseUrl = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const res = await fetch(this.baseUrl + path);
    if (!res.ok) throw new Error(`GET ${path}: ${res.status} ${await res.text()}`);
    return (await res.json()) as T;
  }

  async listScenes(): Promise<string[]> {
    return (await this.getJson<{ scenes: string[] }>("/api/scenes")).scenes;
  }

  async getScene(sceneId: string): Promise<Scene> {
    return this.getJson<Scene>(`/api/scenes/${encodeURIComponent(sceneId)}`);
  }

  erpUrl(sceneId: string): string {
    return `${this.baseUrl}/api/scenes/${encodeURIComponent(sceneId)}/erp.jpg`;
  }

  async fetchView(
    sceneId: string,
    pose: Pose,
    fovY: number,
    w: number,
    h: number,
  ): Promise<ViewResponse> {
    const params = new URLSearchParams({
      theta: String(pose.thetaDeg),
      phi: String(pose.phiDeg),
      fovy: String(fovY),
      w: String(w),
      h: String(h),
    });
    const path = `/api/scenes/${encodeURIComponent(sceneId)}/view?${params}`;
    const res = await fetch(this.baseUrl + path);
    if (!res.ok) throw new Error(`GET view: ${res.status} ${await res.text()}`);
    const blob = await res.blob();
    return {
      blobUrl: URL.createObjectURL(blob),
      echoedPose: {
        thetaDeg: Number(res.headers.get("X-Pose-Theta")),
        phiDeg: Number(res.headers.get("X-Pose-Phi")),
      },
    };
  }

  async recordInitPose(sceneId: string, pose: Pose): Promise<Pose> {
    const res = await fetch(
      `${this.baseUrl}/api/scenes/${encodeURIComponent(sceneId)}/init`,
      {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ theta_deg: pose.thetaDeg, phi_deg: pose.phiDeg }),
      },
    );
    if (!res.ok) throw new Error(`record init pose: ${res.status} ${await res.text()}`);
    const body = (await res.json()) as { init_pose: { theta_deg: number; phi_deg: number } };
    return { thetaDeg: body.init_pose.theta_deg, phiDeg: body.init_pose.phi_deg };
  }

  async postRating(row: RatingRow): Promise<void> {
    const res = await fetch(`${this.baseUrl}/api/ratings`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(row),
    });
    if (!res.ok) throw new Error(`post rating: ${res.status} ${await res.text()}`);
  }
}
