import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pano_compose.candidates import GenerationConfig, generate_candidates, moore_neighbors, wrap_pose
from pano_compose.geometry import sph_overlap
from pano_compose.projection import CameraPose, intrinsics_from_fov, view_rect_of

SMALL_K = intrinsics_from_fov(60.0, 1024, 768)


def cfg(**kw):
    kw.setdefault("intrinsics", SMALL_K)
    return GenerationConfig(**kw)


class TestWrapPose:
    def test_modular_reduction(self):
        p = wrap_pose(185.0, 0.0)
        assert p is not None and p.theta_deg == -175.0

    def test_pole_rejection(self):
        assert wrap_pose(0.0, 95.0) is None
        assert wrap_pose(0.0, -90.5) is None

    def test_boundary_kept(self):
        p = wrap_pose(-180.0, -90.0)
        assert p is not None and (p.theta_deg, p.phi_deg) == (-180.0, -90.0)


class TestMooreNeighbors:
    def test_ring_one_set(self):
        got = {(n.theta_deg, n.phi_deg) for n in moore_neighbors(CameraPose(0, 0), cfg(), 1)}
        expected = {(5, 0), (-5, 0), (0, 5), (0, -5), (5, 5), (5, -5), (-5, 5), (-5, -5)}
        assert got == expected

    def test_yaw_wrap(self):
        got = {(n.theta_deg, n.phi_deg) for n in moore_neighbors(CameraPose(178, 0), cfg(), 1)}
        assert (-177.0, 0.0) in got

    def test_pole_rejection_count(self):
        got = moore_neighbors(CameraPose(0, 88), cfg(), 2)
        assert len(got) == 5
        assert all(n.phi_deg <= 90 for n in got)

    def test_invalid_ring(self):
        with pytest.raises(ValueError):
            moore_neighbors(CameraPose(0, 0), cfg(), 0)


class TestGenerateCandidates:
    def test_unfiltered_equatorial_count(self):
        cands = generate_candidates(CameraPose(0, 0), cfg(lam=0.0, m_max=10))
        assert len(cands) == 80

    def test_lambda_near_one_empty(self):
        assert generate_candidates(CameraPose(0, 0), cfg(lam=1.0 - 1e-9)) == []

    def test_strict_overlap_recheck(self):
        init = CameraPose(10, 20)
        c = cfg(lam=0.5)
        init_rect = view_rect_of(init, c.intrinsics)
        cands = generate_candidates(init, c)
        assert cands
        for cand in cands:
            assert sph_overlap(view_rect_of(cand.pose, c.intrinsics), init_rect) > c.lam

    def test_initial_pose_excluded_and_unique(self):
        cands = generate_candidates(CameraPose(-40, 5), cfg(lam=0.0))
        poses = [(c.pose.theta_deg, c.pose.phi_deg) for c in cands]
        assert (-40.0, 5.0) not in poses
        assert len(poses) == len(set(poses))

    def test_deterministic_order(self):
        a = generate_candidates(CameraPose(7, -8), cfg())
        b = generate_candidates(CameraPose(7, -8), cfg())
        assert a == b
        rings = [c.m for c in a]
        assert rings == sorted(rings)

    def test_count_bound(self):
        cands = generate_candidates(CameraPose(0, 80), cfg(lam=0.0, m_max=10))
        assert len(cands) <= 80

    def test_ring_monotonicity_equatorial_yaw(self):
        c = cfg(lam=0.0)
        init_rect = view_rect_of(CameraPose(0, 0), c.intrinsics)
        overlaps = [
            sph_overlap(view_rect_of(CameraPose(m * 5.0, 0), c.intrinsics), init_rect)
            for m in range(1, 11)
        ]
        assert all(x >= y - 1e-12 for x, y in zip(overlaps, overlaps[1:]))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            cfg(lam=1.0)
        with pytest.raises(ValueError):
            cfg(m_max=0)
        with pytest.raises(ValueError):
            cfg(step_theta_deg=0.0)

    @settings(max_examples=25, deadline=None)
    @given(
        theta=st.floats(-180, 179.9),
        phi=st.floats(-85, 85),
        lam=st.floats(0.0, 0.9),
        m_max=st.integers(1, 6),
    )
    def test_constraint_always_holds(self, theta, phi, lam, m_max):
        c = cfg(lam=lam, m_max=m_max)
        init = CameraPose(theta, phi)
        init_rect = view_rect_of(init, c.intrinsics)
        cands = generate_candidates(init, c)
        assert len(cands) <= 8 * m_max
        for cand in cands:
            assert sph_overlap(view_rect_of(cand.pose, c.intrinsics), init_rect) > lam
