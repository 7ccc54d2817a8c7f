"""Model-math kernels: quality scoring, ranking loss, gated adjustment loss.

Shows the softmax quality-weighting pipeline on toy embeddings, the pairwise
ranking hinge, and the suggestion-gated adjustment loss, then runs the full
analytic-vs-finite-difference gradient check suite.
"""

import numpy as np

import pano_compose.model_math as mm
from pano_compose.gradcheck import run_all

rng = np.random.default_rng(0)

# five anchor prompts ("quality 1" .. "quality 5") as unit embeddings
prompts = rng.normal(size=(5, 16))
prompts /= np.linalg.norm(prompts, axis=1, keepdims=True)

# an image embedding drifting from the worst anchor toward the best
for t in (0.0, 0.5, 1.0):
    img = (1 - t) * prompts[0] + t * prompts[4]
    img /= np.linalg.norm(img)
    w = mm.quality_weights(img, prompts, sigma=0.07)
    print(f"t={t:.1f}  weights {np.round(w, 3)}  quality {mm.weighted_score(w):.3f}")

# ranking hinge: penalizes pairs ordered against their targets
pred = np.array([3.1, 2.9, 1.0, 4.0])
target = np.array([2.0, 3.0, 1.0, 4.0])
value, grad = mm.loss_rank(pred, target)
print(f"\nranking loss {value:.3f}, gradient {np.round(grad, 2)}")

# gated adjustment loss: rows with y_s = 0 contribute no adjustment gradient
batch = mm.AdjustmentBatch(
    suggest_logits=rng.normal(size=(4, 2)),
    y_s=np.array([1, 0, 1, 0]),
    pred_adjust=np.array([[1.0, 0.5], [0.2, 0.1], [-0.5, 1.0], [0.3, -0.3]]),
    y_a=np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0], [0.0, 0.0]]),
)
value, grad_logits, grad_adjust = mm.loss_cpam_total(batch)
print(f"\ngated total loss {value:.4f}")
print("adjustment gradient rows (y_s=0 rows are exactly zero):")
print(np.round(grad_adjust, 4))

print("\ngradient checks:")
for r in run_all(seed=0, trials=50):
    print(f"  {'PASS' if r.passed else 'FAIL'} {r.name:<28s} "
          f"max rel err {r.max_rel_err:.2e}")
