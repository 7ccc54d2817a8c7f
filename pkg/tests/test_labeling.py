import math

import numpy as np
import pytest

from pano_compose.candidates import CandidateView, GenerationConfig, generate_candidates
from pano_compose.labeling import (
    CsvScorer,
    LabelingError,
    Labels,
    SceneRecord,
    adaptive_threshold,
    adjustment_label,
    heuristic_score,
    label_scene,
    signed_arc_deg,
    suggestion_label,
)
from pano_compose.projection import CameraPose, ErpImage, intrinsics_from_fov, render_view
from pano_compose.synth import make_erp

CFG = GenerationConfig(lam=0.0, m_max=3, intrinsics=intrinsics_from_fov(60, 256, 192))


def make_scene(init=(0.0, 0.0), cfg=CFG, scene_id="s0"):
    pose = CameraPose(*init)
    return SceneRecord(
        scene_id=scene_id,
        erp_path="unused.png",
        init_pose=pose,
        candidates=tuple(generate_candidates(pose, cfg)),
    )


def brute_force_labels(s_init, cand_scores, cand_poses, init, n_frac):
    """Independent enumeration of the threshold / suggestion / adjustment rules."""
    ranked = sorted(cand_scores, reverse=True)
    k = max(1, int(math.floor(n_frac * len(cand_scores) + 0.5)))
    tau = ranked[k - 1]
    y_s = 1 if s_init < tau else 0
    if y_s == 0:
        return tau, 0, (0.0, 0.0)
    best_idx = None
    for idx, score in enumerate(cand_scores):
        if best_idx is None:
            best_idx = idx
            continue
        cur = cand_scores[best_idx]
        if score > cur:
            best_idx = idx
        elif score == cur:
            def mag(i):
                dt = signed_arc_deg(init.theta_deg, cand_poses[i].theta_deg)
                dp = cand_poses[i].phi_deg - init.phi_deg
                return math.hypot(dt, dp)

            if mag(idx) < mag(best_idx):
                best_idx = idx
    dt = signed_arc_deg(init.theta_deg, cand_poses[best_idx].theta_deg)
    dp = cand_poses[best_idx].phi_deg - init.phi_deg
    return tau, 1, (dt, dp)


class TestAdaptiveThreshold:
    def test_quarter_of_four(self):
        assert adaptive_threshold([9, 8, 7, 6], 0.25) == 9

    def test_constant_scores(self):
        assert adaptive_threshold([5, 5, 5], 0.7) == 5

    def test_shuffled_hundred(self):
        rng = np.random.default_rng(0)
        scores = list(rng.permutation(np.arange(1, 101)))
        assert adaptive_threshold(scores, 0.25) == 76

    def test_empty_errors(self):
        with pytest.raises(ValueError):
            adaptive_threshold([], 0.25)

    def test_tau_member_of_multiset(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            scores = rng.normal(size=int(rng.integers(1, 30))).tolist()
            assert adaptive_threshold(scores, rng.uniform(0.01, 1.0)) in scores


class TestSuggestionLabel:
    def test_below(self):
        assert suggestion_label(8, 9) == 1

    def test_equal_is_zero(self):
        assert suggestion_label(9, 9) == 0

    def test_above(self):
        assert suggestion_label(10, 9) == 0


class TestAdjustmentLabel:
    def test_no_suggestion(self):
        assert adjustment_label([], CameraPose(0, 0), 0) == (0.0, 0.0)

    def test_plain_difference(self):
        cands = [
            CandidateView(CameraPose(5, -10), 1, 0, score=2.0),
            CandidateView(CameraPose(-5, 0), 1, 1, score=1.0),
        ]
        assert adjustment_label(cands, CameraPose(0, 0), 1) == (5.0, -10.0)

    def test_wrap_shortest_arc(self):
        cands = [CandidateView(CameraPose(-175, 0), 1, 0, score=1.0)]
        assert adjustment_label(cands, CameraPose(175, 0), 1) == (10.0, 0.0)

    def test_tie_breaks_to_smaller_move(self):
        cands = [
            CandidateView(CameraPose(10, 10), 2, 0, score=3.0),
            CandidateView(CameraPose(5, 0), 1, 1, score=3.0),
        ]
        assert adjustment_label(cands, CameraPose(0, 0), 1) == (5.0, 0.0)

    def test_requires_candidates(self):
        with pytest.raises(LabelingError):
            adjustment_label([], CameraPose(0, 0), 1)


class TestLabelsInvariants:
    def test_zero_suggestion_requires_zero_adjust(self):
        with pytest.raises(ValueError):
            Labels(0, 5.0, 0.0)

    def test_suggestion_requires_nonzero_adjust(self):
        with pytest.raises(ValueError):
            Labels(1, 0.0, 0.0)


class TestLabelScene:
    def test_planted_target(self):
        scene = make_scene()
        target = CameraPose(10, -10)  # ring-2 diagonal neighbor, inside the grid

        def scorer(s, pose):
            dt = signed_arc_deg(pose.theta_deg, target.theta_deg)
            dp = target.phi_deg - pose.phi_deg
            return -math.hypot(dt, dp)

        labeled = label_scene(scene, scorer, n_frac=0.25)
        assert labeled.labels.y_s == 1
        assert (labeled.labels.d_theta_deg, labeled.labels.d_phi_deg) == (10.0, -10.0)

    def test_constant_scorer(self):
        labeled = label_scene(make_scene(), lambda s, p: 1.5, n_frac=0.25)
        assert labeled.labels == Labels(0, 0.0, 0.0)
        assert labeled.init_score == 1.5

    def test_scores_cached(self):
        labeled = label_scene(make_scene(), lambda s, p: p.theta_deg + 2 * p.phi_deg)
        assert all(c.score is not None for c in labeled.candidates)

    def test_scorer_failure_aborts_with_scene_id(self):
        def bad(s, p):
            raise RuntimeError("boom")

        with pytest.raises(LabelingError, match="s0"):
            label_scene(make_scene(), bad)

    def test_matches_brute_force_random(self):
        rng = np.random.default_rng(2)
        scene = make_scene(init=(20.0, 10.0))
        poses = [c.pose for c in scene.candidates]
        for _ in range(300):
            scores = rng.normal(size=len(poses))
            s_init = rng.normal()
            table = {(p.theta_deg, p.phi_deg): sc for p, sc in zip(poses, scores)}
            table[(20.0, 10.0)] = s_init
            n_frac = rng.uniform(0.05, 1.0)
            labeled = label_scene(
                scene, lambda s, p: table[(p.theta_deg, p.phi_deg)], n_frac=n_frac
            )
            tau, y_s, y_a = brute_force_labels(s_init, list(scores), poses, scene.init_pose, n_frac)
            assert labeled.labels.y_s == y_s
            assert (labeled.labels.d_theta_deg, labeled.labels.d_phi_deg) == y_a

    def test_shift_and_scale_invariance(self):
        rng = np.random.default_rng(3)
        scene = make_scene()
        poses = [c.pose for c in scene.candidates]
        scores = rng.normal(size=len(poses))
        s_init = rng.normal()

        def run(shift, scale):
            table = {(p.theta_deg, p.phi_deg): sc * scale + shift for p, sc in zip(poses, scores)}
            table[(0.0, 0.0)] = s_init * scale + shift
            return label_scene(scene, lambda s, p: table[(p.theta_deg, p.phi_deg)]).labels

        base = run(0.0, 1.0)
        assert run(17.3, 1.0) == base
        assert run(0.0, 4.2) == base
        assert run(-3.1, 0.5) == base


class TestHeuristicScore:
    def test_purity(self):
        rng = np.random.default_rng(4)
        img = rng.integers(0, 256, size=(64, 96, 3)).astype(np.uint8)
        assert heuristic_score(img) == heuristic_score(img.copy())

    def test_uniform_gray_zero(self):
        assert heuristic_score(np.full((64, 96, 3), 128, dtype=np.uint8)) == 0.0

    @pytest.mark.parametrize(
        "pattern,seed,pose,expected",
        [
            ("checker", 1, (0, 0), 0.0725361337520602),
            ("horizon", 2, (40, 10), 0.020424500262609786),
            ("direction", 0, (-30, -20), 0.3990889907519006),
        ],
    )
    def test_golden_values(self, pattern, seed, pose, expected):
        K = intrinsics_from_fov(60, 256, 192)
        erp = ErpImage(make_erp(pattern, 1024, 512, seed))
        view = render_view(erp, CameraPose(*pose), K)
        assert heuristic_score(view) == expected


class TestCsvScorer:
    def test_lookup_and_tolerance(self, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text(
            "scene_id,theta_deg,phi_deg,score\n"
            "s0,10.0,5.0,3.25\n"
            "s0,0.0,0.0,1.0\n"
        )
        scorer = CsvScorer(path)
        scene = SceneRecord("s0", "x.png", CameraPose(0, 0))
        assert scorer(scene, CameraPose(10.0, 5.0)) == 3.25
        assert scorer(scene, CameraPose(10.0 + 4e-7, 5.0 - 4e-7)) == 3.25

    def test_missing_pose_errors(self, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text("scene_id,theta_deg,phi_deg,score\ns0,0,0,1\n")
        scorer = CsvScorer(path)
        with pytest.raises(LabelingError, match="no CSV score"):
            scorer(SceneRecord("s0", "x.png", CameraPose(0, 0)), CameraPose(7, 7))

    def test_bad_header(self, tmp_path):
        path = tmp_path / "scores.csv"
        path.write_text("a,b\n1,2\n")
        with pytest.raises(ValueError):
            CsvScorer(path)
