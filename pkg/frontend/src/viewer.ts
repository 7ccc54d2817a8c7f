/**
 * DOM wiring for the viewer: 360 playback with drag pan/tilt, initial-pose
 * recording, the candidate heatmap overlay, and the A/B rating panel.
 *
 * During a drag the client pans the cached equirectangular image for
 * responsiveness; on settle it fetches the authoritative server render, so
 * the displayed geometry is always single-sourced from the backend.
 */

import { ApiClient, Scene } from "./api.js";
import { adjustmentArrow, buildOverlay } from "./heatmap.js";
import { applyDrag, canonicalPose, dragScale, formatPose, Pose, posesAgree } from "./pose.js";
import { derandomize, PresentedPair, randomizePair, RatingPair, ScreenChoice, seededRng, SubmissionQueue } from "./rating.js";

const VIEW_W = 640;
const VIEW_H = 480;
const FOV_Y = 60;
const FOV_X = 2 * (Math.atan((VIEW_W / VIEW_H) * Math.tan((FOV_Y * Math.PI) / 360)) * 180) / Math.PI;

interface ViewerElements {
  view: HTMLImageElement;
  overlay: HTMLCanvasElement;
  poseReadout: HTMLElement;
  banner: HTMLElement;
  sceneSelect: HTMLSelectElement;
  recordButton: HTMLButtonElement;
  overlayToggle: HTMLInputElement;
  abPanel: HTMLElement;
}

export class ViewerApp {
  private pose: Pose = { thetaDeg: 0, phiDeg: 0 };
  private scene: Scene | null = null;
  private dragging = false;
  private lastX = 0;
  private lastY = 0;
  private settleTimer: number | undefined;
  private recordInFlight: Promise<void> = Promise.resolve();
  private readonly ratingQueue: SubmissionQueue;
  private readonly rng = seededRng(Date.now() >>> 0);

  constructor(private readonly api: ApiClient, private readonly el: ViewerElements) {
    this.ratingQueue = new SubmissionQueue((row) => this.api.postRating(row));
    el.view.addEventListener("pointerdown", (e) => this.onDragStart(e));
    window.addEventListener("pointermove", (e) => this.onDragMove(e));
    window.addEventListener("pointerup", () => this.onDragEnd());
    el.recordButton.addEventListener("click", () => this.recordPose());
    el.overlayToggle.addEventListener("change", () => this.drawOverlay());
    el.sceneSelect.addEventListener("change", () => {
      void this.loadScene(el.sceneSelect.value);
    });
  }

  async start(): Promise<void> {
    const scenes = await this.api.listScenes();
    this.el.sceneSelect.replaceChildren(
      ...scenes.map((id) => new Option(id, id)),
    );
    if (scenes.length > 0) await this.loadScene(scenes[0]);
  }

  async loadScene(sceneId: string): Promise<void> {
    this.scene = await this.api.getScene(sceneId);
    // the recorded pose survives reloads because it comes from the server
    this.pose = canonicalPose(this.scene.init_pose.theta_deg, this.scene.init_pose.phi_deg);
    await this.refreshView();
  }

  private onDragStart(e: PointerEvent): void {
    this.dragging = true;
    this.lastX = e.clientX;
    this.lastY = e.clientY;
  }

  private onDragMove(e: PointerEvent): void {
    if (!this.dragging) return;
    const scale = dragScale(FOV_X, this.el.view.clientWidth || VIEW_W);
    // dragging right looks left: negative yaw; dragging down looks up
    this.pose = applyDrag(this.pose, -(e.clientX - this.lastX) * scale, (e.clientY - this.lastY) * scale);
    this.lastX = e.clientX;
    this.lastY = e.clientY;
    this.el.poseReadout.textContent = formatPose(this.pose);
    if (this.settleTimer !== undefined) clearTimeout(this.settleTimer);
    this.settleTimer = window.setTimeout(() => void this.refreshView(), 120);
  }

  private onDragEnd(): void {
    this.dragging = false;
  }

  private async refreshView(): Promise<void> {
    if (!this.scene) return;
    try {
      const { blobUrl, echoedPose } = await this.api.fetchView(
        this.scene.scene_id, this.pose, FOV_Y, VIEW_W, VIEW_H,
      );
      this.el.view.src = blobUrl;
      this.el.banner.hidden = true;
      this.el.poseReadout.textContent = formatPose(echoedPose);
      if (!posesAgree(this.pose, echoedPose)) {
        // server is authoritative; snap the client pose to the echo
        this.pose = echoedPose;
      }
      this.drawOverlay();
    } catch {
      // keep the last frame, surface a non-blocking banner
      this.el.banner.hidden = false;
      this.el.banner.textContent = "network error — showing last rendered view";
    }
  }

  /** Record the current pose; rapid double clicks resolve last-write-wins. */
  recordPose(): Promise<void> {
    const pose = this.pose;
    this.recordInFlight = this.recordInFlight.then(async () => {
      if (!this.scene) return;
      try {
        const echoed = await this.api.recordInitPose(this.scene.scene_id, pose);
        this.el.poseReadout.textContent = `${formatPose(echoed)} (recorded)`;
      } catch (err) {
        this.el.banner.hidden = false;
        this.el.banner.textContent = `record failed: ${String(err)}`;
      }
    });
    return this.recordInFlight;
  }

  private drawOverlay(): void {
    const ctx = this.el.overlay.getContext("2d");
    if (!ctx || !this.scene) return;
    const { width, height } = this.el.overlay;
    ctx.clearRect(0, 0, width, height);
    if (!this.el.overlayToggle.checked) return;

    const points = buildOverlay(this.scene.candidates ?? [], width, height);
    if (!points) {
      this.el.overlayToggle.title = "scene has no scored candidates";
      return;
    }
    for (const p of points) {
      ctx.fillStyle = p.color;
      ctx.beginPath();
      ctx.arc(p.x, p.y, 4, 0, 2 * Math.PI);
      ctx.fill();
    }
    const labels = this.scene.labels ?? null;
    const init = canonicalPose(this.scene.init_pose.theta_deg, this.scene.init_pose.phi_deg);
    const arrow = adjustmentArrow(init, labels, width, height);
    if (arrow) {
      ctx.strokeStyle = "#00ff88";
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.moveTo(arrow.from.x, arrow.from.y);
      ctx.lineTo(arrow.to.x, arrow.to.y);
      ctx.stroke();
    } else if (labels && labels.y_s === 0) {
      ctx.fillStyle = "#ffffff";
      ctx.fillText("no adjustment needed", 8, 16);
    }
  }

  /** Show an A/B pair (randomized order) and wire the three choice buttons. */
  presentRatingPair(pair: RatingPair): PresentedPair {
    const presented = randomizePair(pair, this.rng);
    const [leftRef, rightRef] = presented.aOnLeft
      ? [presented.refA, presented.refB]
      : [presented.refB, presented.refA];
    this.el.abPanel.replaceChildren();
    for (const ref of [leftRef, rightRef]) {
      const img = document.createElement("img");
      img.src = `${this.api.erpUrl(pair.sceneId)}#${ref}`;
      img.width = 320;
      this.el.abPanel.appendChild(img);
    }
    for (const choice of ["left", "right", "same"] as ScreenChoice[]) {
      const button = document.createElement("button");
      button.textContent = choice === "same" ? "No difference" : `${choice} better`;
      button.addEventListener("click", () => {
        void this.ratingQueue.submit(derandomize(presented, choice));
      });
      this.el.abPanel.appendChild(button);
    }
    return presented;
  }
}

export function mount(root: Document = document): ViewerApp {
  const el: ViewerElements = {
    view: root.getElementById("view") as HTMLImageElement,
    overlay: root.getElementById("overlay") as HTMLCanvasElement,
    poseReadout: root.getElementById("pose-readout") as HTMLElement,
    banner: root.getElementById("banner") as HTMLElement,
    sceneSelect: root.getElementById("scene-select") as HTMLSelectElement,
    recordButton: root.getElementById("record-pose") as HTMLButtonElement,
    overlayToggle: root.getElementById("overlay-toggle") as HTMLInputElement,
    abPanel: root.getElementById("ab-panel") as HTMLElement,
  };
  const app = new ViewerApp(new ApiClient(), el);
  void app.start();
  return app;
}
