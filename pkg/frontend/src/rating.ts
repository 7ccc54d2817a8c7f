/**
 * Side-by-side A/B rating logic.
 *
 * Presentation order is randomized per pair (seeded, so tests are
 * deterministic) but submissions are de-randomized: the stored row always
 * says which *reference* won, never which screen position.
 */

export interface RatingPair {
  sceneId: string;
  refA: string;
  refB: string;
}

export interface PresentedPair extends RatingPair {
  /** true when refA is shown on the left */
  aOnLeft: boolean;
}

export type ScreenChoice = "left" | "right" | "same";

export interface RatingRow {
  scene_id: string;
  left_ref: string;
  right_ref: string;
  choice: ScreenChoice;
}

/** Small deterministic PRNG (mulberry32) so shuffle order is testable. */
export function seededRng(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function randomizePair(pair: RatingPair, rng: () => number): PresentedPair {
  return { ...pair, aOnLeft: rng() < 0.5 };
}

/**
 * De-randomize a screen-position choice into the canonical row: left_ref is
 * always refA, right_ref is always refB, and the choice names the winner in
 * that fixed frame.
 */
export function derandomize(presented: PresentedPair, choice: ScreenChoice): RatingRow {
  let canonical: ScreenChoice = choice;
  if (choice !== "same" && !presented.aOnLeft) {
    canonical = choice === "left" ? "right" : "left";
  }
  return {
    scene_id: presented.sceneId,
    left_ref: presented.refA,
    right_ref: presented.refB,
    choice: canonical,
  };
}

/** FIFO retry queue for rating submissions that failed to send. */
export class SubmissionQueue {
  private pending: RatingRow[] = [];

  constructor(private readonly post: (row: RatingRow) => Promise<void>) {}

  get size(): number {
    return this.pending.length;
  }

  async submit(row: RatingRow): Promise<boolean> {
    this.pending.push(row);
    return this.flush();
  }

  /** Retry everything in order; stops at the first failure. */
  async flush(): Promise<boolean> {
    while (this.pending.length > 0) {
      try {
        await this.post(this.pending[0]);
      } catch {
        return false;
      }
      this.pending.shift();
    }
    return true;
  }
}
