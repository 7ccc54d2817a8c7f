"""Finite-difference verification of the model-math kernels.

Each check perturbs random double-precision inputs and compares the analytic
gradients to central finite differences (h = 1e-6), then asserts the exact
invariants (gating produces bitwise-zero masked gradients, uniform weights
score 3, single-expert mixing is the identity).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import model_math as mm

FD_H = 1e-6
REL_TOL = 1e-5


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_rel_err: float
    tol: float
    passed: bool


def _central_diff(f, x: np.ndarray, h: float = FD_H) -> np.ndarray:
    g = np.zeros_like(x, dtype=float)
    flat = g.reshape(-1)
    xf = x.reshape(-1)
    for k in range(xf.size):
        orig = xf[k]
        xf[k] = orig + h
        hi = f(x)
        xf[k] = orig - h
        lo = f(x)
        xf[k] = orig
        flat[k] = (hi - lo) / (2.0 * h)
    return g


def _rel_err(analytic: np.ndarray, numeric: np.ndarray) -> float:
    denom = max(float(np.max(np.abs(numeric))), 1e-8)
    return float(np.max(np.abs(analytic - numeric)) / denom)


def check_loss_mse(rng: np.random.Generator, trials: int) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 12))
        pred = rng.normal(size=n) * 3.0
        target = rng.normal(size=n) * 3.0
        _, grad = mm.loss_mse(pred, target)
        fd = _central_diff(lambda p: mm.loss_mse(p, target)[0], pred.copy())
        worst = max(worst, _rel_err(grad, fd))
    return CheckResult("loss_mse", worst, REL_TOL, worst < REL_TOL)


def check_loss_rank(rng: np.random.Generator, trials: int) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 10))
        # Keep hinge arguments away from the kink so the subgradient is clean.
        pred = rng.normal(size=n) * 2.0
        target = rng.normal(size=n) * 2.0
        i, j = np.triu_indices(n, k=1)
        sign = np.sign(target[i] - target[j])
        margin = -sign * ((pred[i] - pred[j]) - (target[i] - target[j]))
        if np.any(np.abs(margin) < 10 * FD_H):
            continue
        _, grad = mm.loss_rank(pred, target)
        fd = _central_diff(lambda p: mm.loss_rank(p, target)[0], pred.copy())
        worst = max(worst, _rel_err(grad, fd))
    return CheckResult("loss_rank", worst, REL_TOL, worst < REL_TOL)


def check_loss_suggest(rng: np.random.Generator, trials: int) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 10))
        logits = rng.normal(size=(n, 2)) * 2.0
        y = rng.integers(0, 2, size=n)
        _, grad = mm.loss_suggest(logits, y)
        fd = _central_diff(lambda l: mm.loss_suggest(l, y)[0], logits.copy())
        worst = max(worst, _rel_err(grad, fd))
    return CheckResult("loss_suggest", worst, REL_TOL, worst < REL_TOL)


def check_loss_cs(rng: np.random.Generator, trials: int) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 10))
        pred = rng.normal(size=(n, 2))
        pred += np.sign(pred) * 0.2  # keep norms away from zero
        target = rng.normal(size=(n, 2))
        target += np.sign(target) * 0.2
        _, grad = mm.loss_cs(pred, target)
        fd = _central_diff(lambda p: mm.loss_cs(p, target)[0], pred.copy())
        worst = max(worst, _rel_err(grad, fd))
    return CheckResult("loss_cs", worst, REL_TOL, worst < REL_TOL)


def check_loss_norm(rng: np.random.Generator, trials: int) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 10))
        pred = rng.normal(size=(n, 2))
        pred += np.sign(pred) * 0.2
        target = rng.normal(size=(n, 2))
        _, grad = mm.loss_norm(pred, target)
        fd = _central_diff(lambda p: mm.loss_norm(p, target)[0], pred.copy())
        worst = max(worst, _rel_err(grad, fd))
    return CheckResult("loss_norm", worst, REL_TOL, worst < REL_TOL)


def check_cpam_gating(rng: np.random.Generator, trials: int) -> CheckResult:
    """Masked samples must contribute bitwise-zero adjustment gradient; the
    unmasked gradient must match finite differences."""
    worst = 0.0
    exact = True
    for _ in range(trials):
        n = int(rng.integers(2, 8))
        y_s = rng.integers(0, 2, size=n)
        y_a = rng.normal(size=(n, 2)) * 5.0
        y_a += np.sign(y_a) * 0.5
        y_a[y_s == 0] = 0.0
        batch = mm.AdjustmentBatch(
            suggest_logits=rng.normal(size=(n, 2)),
            y_s=y_s,
            pred_adjust=rng.normal(size=(n, 2)) + np.sign(rng.normal(size=(n, 2))) * 0.3,
            y_a=y_a,
        )
        _, _, grad_adjust = mm.loss_cpam_total(batch)
        masked = grad_adjust[y_s == 0]
        if masked.size and np.any(masked != 0.0):
            exact = False
        if np.any(y_s == 1):
            def f(pa, batch=batch):
                b = mm.AdjustmentBatch(batch.suggest_logits, batch.y_s, pa, batch.y_a)
                return mm.loss_cpam_total(b)[0]

            fd = _central_diff(f, batch.pred_adjust.copy())
            worst = max(worst, _rel_err(grad_adjust, fd))
    return CheckResult("loss_cpam_gating", worst, REL_TOL, exact and worst < REL_TOL)


def check_exact_identities(rng: np.random.Generator, trials: int) -> CheckResult:
    """q(uniform) = 3 exactly; M = 1 gating mixes to the expert output."""
    ok = mm.weighted_score(np.full(5, 0.2)) == 3.0
    for _ in range(trials):
        d = int(rng.integers(2, 6))
        x = rng.normal(size=d)
        cfg = mm.GateConfig(
            gate_params=rng.normal(size=(2, 1, d)),
            expert_params=rng.normal(size=(1, d, d)),
        )
        g = mm.gate_weights(x, cfg, task=0)
        ok = ok and g.shape == (1,) and g[0] == 1.0
        outs = mm.expert_outputs(x, cfg)
        ok = ok and np.array_equal(mm.moe_mix(g, outs), outs[0])
    return CheckResult("exact_identities", 0.0, REL_TOL, bool(ok))


ALL_CHECKS = [
    check_loss_mse,
    check_loss_rank,
    check_loss_suggest,
    check_loss_cs,
    check_loss_norm,
    check_cpam_gating,
    check_exact_identities,
]


def run_all(seed: int = 0, trials: int = 100) -> list[CheckResult]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    results = []
    for idx, check in enumerate(ALL_CHECKS):
        rng = np.random.default_rng(seed * 1000 + idx)
        results.append(check(rng, trials))
    return results
