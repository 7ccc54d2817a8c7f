"""Numerically verified kernels for quality-weighted scoring, ranking losses,
mixture-of-experts gating, and the gated multi-task adjustment loss.

Every loss returns (value, analytic gradient w.r.t. the predictions); the
gradients are checked against central finite differences in the test suite.
All functions are pure and operate on plain numpy arrays.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

QUALITY_ANCHORS = np.array([1.0, 2.0, 3.0, 4.0, 5.0])
DEFAULT_SIGMA = 0.07
DEFAULT_ALPHA = 0.1
NORM_EPS = 1e-12


def softmax(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    e = np.exp(z - z.max(axis=-1, keepdims=True))
    return e / e.sum(axis=-1, keepdims=True)


def residual_adapt(x: np.ndarray, adapter: np.ndarray) -> np.ndarray:
    """Unit-normalized residual adaptation: (x + A x) / ||x + A x||."""
    y = np.asarray(x, dtype=float) + np.asarray(adapter, dtype=float) @ x
    nrm = np.linalg.norm(y)
    if nrm < NORM_EPS:
        raise ValueError("residual adaptation produced a zero vector")
    return y / nrm


def quality_weights(img: np.ndarray, prompts: np.ndarray, sigma: float = DEFAULT_SIGMA) -> np.ndarray:
    """Softmax over the five prompt similarities at temperature sigma."""
    if sigma <= 0:
        raise ValueError("temperature must be positive")
    prompts = np.asarray(prompts, dtype=float)
    if prompts.shape[0] != 5:
        raise ValueError("expected exactly 5 prompt embeddings")
    return softmax(prompts @ np.asarray(img, dtype=float) / sigma)


def weighted_score(w: np.ndarray) -> float:
    """q = sum_i W_i C_i with anchors C = 1..5; lies in [1, 5]."""
    return float(np.asarray(w, dtype=float) @ QUALITY_ANCHORS)


def weighted_text_features(w: np.ndarray, prompts: np.ndarray) -> np.ndarray:
    """F_t = sum_i W_i T'_i."""
    return np.asarray(w, dtype=float) @ np.asarray(prompts, dtype=float)


def loss_mse(pred, target):
    """Mean squared error; grad = 2 (pred - target) / N."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    if pred.size == 0:
        raise ValueError("empty input")
    diff = pred - target
    n = pred.shape[0]
    return float(np.mean(diff**2)), 2.0 * diff / n


def loss_rank(pred, target):
    """Pairwise hinge ranking loss over unordered pairs i < j, averaged over
    N(N-1)/2; tied targets (sign 0) contribute nothing, and the subgradient
    at the hinge kink is 0."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    n = pred.shape[0]
    if n < 2:
        raise ValueError("ranking loss needs at least two samples")
    i, j = np.triu_indices(n, k=1)
    sign = np.sign(target[i] - target[j])
    margin = -sign * ((pred[i] - pred[j]) - (target[i] - target[j]))
    npairs = n * (n - 1) / 2.0
    value = float(np.sum(np.maximum(margin, 0.0)) / npairs)
    active = margin > 0.0
    grad = np.zeros(n)
    np.add.at(grad, i[active], -sign[active] / npairs)
    np.add.at(grad, j[active], sign[active] / npairs)
    return value, grad


def loss_ccqa_total(l1: float, l2: float, l3: float, alpha: float = DEFAULT_ALPHA) -> float:
    """Total assessment loss: l1 + l2 + alpha * l3."""
    return l1 + l2 + alpha * l3


@dataclass(frozen=True)
class GateConfig:
    """Linear gates and experts used to exercise the mixing kernels.

    gate_params: (n_tasks, M, D); expert_params: (M, D, D).
    """

    gate_params: np.ndarray
    expert_params: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gate_params, dtype=float)
        e = np.asarray(self.expert_params, dtype=float)
        if g.ndim != 3 or e.ndim != 3 or g.shape[1] != e.shape[0]:
            raise ValueError("inconsistent gate/expert parameter shapes")
        if g.shape[2] != e.shape[1] or e.shape[1] != e.shape[2]:
            raise ValueError("inconsistent feature dimensions")
        object.__setattr__(self, "gate_params", g)
        object.__setattr__(self, "expert_params", e)

    @property
    def n_experts(self) -> int:
        return self.gate_params.shape[1]


def gate_weights(x: np.ndarray, cfg: GateConfig, task: int) -> np.ndarray:
    """softmax(FFN_task(x)): positive M-vector summing to 1."""
    return softmax(cfg.gate_params[task] @ np.asarray(x, dtype=float))


def expert_outputs(x: np.ndarray, cfg: GateConfig) -> np.ndarray:
    """Stack of the M linear experts applied to x, (M, D)."""
    return np.einsum("mde,e->md", cfg.expert_params, np.asarray(x, dtype=float))


def moe_mix(gates: np.ndarray, outputs: np.ndarray) -> np.ndarray:
    """Convex combination of expert outputs: f = sum_i gates_i E_i(x)."""
    gates = np.asarray(gates, dtype=float)
    outputs = np.asarray(outputs, dtype=float)
    if gates.shape[0] != outputs.shape[0]:
        raise ValueError("gate/expert count mismatch")
    return gates @ outputs


def loss_suggest(logits, y_s):
    """Mean softmax cross-entropy on 2-class logits;
    grad = (softmax - onehot) / N."""
    logits = np.asarray(logits, dtype=float)
    y = np.asarray(y_s, dtype=int)
    n = logits.shape[0]
    if n == 0:
        raise ValueError("empty input")
    p = softmax(logits)
    picked = np.clip(p[np.arange(n), y], NORM_EPS, None)
    value = float(-np.mean(np.log(picked)))
    onehot = np.zeros_like(p)
    onehot[np.arange(n), y] = 1.0
    return value, (p - onehot) / n


def loss_cs(pred, target):
    """1 - mean cosine similarity between prediction and target 2-vectors."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    n = pred.shape[0]
    if n == 0:
        raise ValueError("empty input")
    pn = np.linalg.norm(pred, axis=1)
    tn = np.linalg.norm(target, axis=1)
    if np.any(pn < NORM_EPS) or np.any(tn < NORM_EPS):
        raise ValueError("cosine loss rejects zero-norm vectors")
    dots = np.sum(pred * target, axis=1)
    cos = dots / (pn * tn)
    value = 1.0 - float(np.mean(cos))
    # d cos/d pred = t / (|p||t|) - cos * p / |p|^2
    grad = -(target / (pn * tn)[:, None] - (cos / pn**2)[:, None] * pred) / n
    return value, grad


def loss_norm(pred, target):
    """Mean squared difference of Euclidean norms."""
    pred = np.asarray(pred, dtype=float)
    target = np.asarray(target, dtype=float)
    n = pred.shape[0]
    if n == 0:
        raise ValueError("empty input")
    pn = np.linalg.norm(pred, axis=1)
    tn = np.linalg.norm(target, axis=1)
    diff = pn - tn
    value = float(np.mean(diff**2))
    grad = (2.0 * diff / n)[:, None] * pred / np.maximum(pn, NORM_EPS)[:, None]
    return value, grad


@dataclass(frozen=True)
class AdjustmentBatch:
    suggest_logits: np.ndarray  # (N, 2)
    y_s: np.ndarray             # (N,) in {0, 1}
    pred_adjust: np.ndarray     # (N, 2)
    y_a: np.ndarray             # (N, 2); zero rows where y_s = 0

    def __post_init__(self):
        logits = np.asarray(self.suggest_logits, dtype=float)
        ys = np.asarray(self.y_s, dtype=int)
        pa = np.asarray(self.pred_adjust, dtype=float)
        ya = np.asarray(self.y_a, dtype=float)
        n = logits.shape[0]
        if not (ys.shape[0] == pa.shape[0] == ya.shape[0] == n):
            raise ValueError("batch fields must have equal length")
        if np.any(ya[ys == 0] != 0.0):
            raise ValueError("y_s = 0 rows must carry a zero adjustment")
        for name, value in (("suggest_logits", logits), ("y_s", ys), ("pred_adjust", pa), ("y_a", ya)):
            object.__setattr__(self, name, value)


def loss_cpam_total(batch: AdjustmentBatch):
    """Gated multi-task loss: cross-entropy over all samples plus
    (cosine + norm) over the y_s = 1 subset only.

    Returns (value, grad w.r.t. logits, grad w.r.t. pred_adjust).  Samples
    with y_s = 0 get a bitwise-zero adjustment gradient; with no positive
    samples the adjustment term vanishes entirely.
    """
    value, grad_logits = loss_suggest(batch.suggest_logits, batch.y_s)
    grad_adjust = np.zeros_like(batch.pred_adjust)
    mask = batch.y_s == 1
    if np.any(mask):
        v_cs, g_cs = loss_cs(batch.pred_adjust[mask], batch.y_a[mask])
        v_nm, g_nm = loss_norm(batch.pred_adjust[mask], batch.y_a[mask])
        value += v_cs + v_nm
        grad_adjust[mask] = g_cs + g_nm
    return value, grad_logits, grad_adjust
