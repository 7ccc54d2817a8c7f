import math

import numpy as np
import pytest

from pano_compose.geometry import (
    SphericalDirection,
    SphericalPolygon,
    SphericalRect,
    dir_to_vec,
    mc_area_estimate,
    polygon_area_girard,
    rect_area,
    rect_contains,
    rect_corners,
    rect_intersection,
    sph_iou,
    sph_overlap,
    vec_to_dir,
)


def rect(theta, phi, alpha, beta):
    return SphericalRect(SphericalDirection(theta, phi), alpha, beta)


def random_rect(rng, fov_lo=10.0, fov_hi=170.0, phi_max=89.0):
    return rect(
        rng.uniform(-180, 180),
        rng.uniform(-phi_max, phi_max),
        rng.uniform(fov_lo, fov_hi),
        rng.uniform(fov_lo, fov_hi),
    )


def rect_predicate(*rects):
    def pred(pts):
        ok = np.ones(len(pts), dtype=bool)
        for r in rects:
            ok &= rect_contains(r, pts)
        return ok

    return pred


class TestDirections:
    def test_dir_to_vec_axes(self):
        np.testing.assert_allclose(dir_to_vec(SphericalDirection(0, 0)), [0, 0, 1], atol=1e-15)
        np.testing.assert_allclose(dir_to_vec(SphericalDirection(90, 0)), [1, 0, 0], atol=1e-15)
        np.testing.assert_allclose(dir_to_vec(SphericalDirection(0, 90)), [0, 1, 0], atol=1e-15)

    def test_vec_to_dir_axes(self):
        d = vec_to_dir(np.array([0.0, 0.0, 1.0]))
        assert (d.theta_deg, d.phi_deg) == (0.0, 0.0)
        d = vec_to_dir(np.array([0.0, 0.0, -1.0]))
        assert (d.theta_deg, d.phi_deg) == (-180.0, 0.0)

    def test_pole_convention(self):
        assert vec_to_dir(np.array([0.0, 1.0, 0.0])).theta_deg == 0.0
        assert vec_to_dir(np.array([0.0, -1.0, 0.0])).phi_deg == -90.0

    def test_round_trip_random(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            d = SphericalDirection(rng.uniform(-180, 180), rng.uniform(-90, 90))
            back = vec_to_dir(dir_to_vec(d))
            assert abs(back.theta_deg - d.theta_deg) < 1e-10
            assert abs(back.phi_deg - d.phi_deg) < 1e-10

    def test_theta_normalized(self):
        assert SphericalDirection(185.0, 0.0).theta_deg == -175.0

    def test_phi_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            SphericalDirection(0.0, 95.0)


class TestRectContains:
    def test_center_and_antipode(self):
        r = rect(40, 20, 70, 50)
        c = dir_to_vec(r.center)
        assert rect_contains(r, c)
        assert not rect_contains(r, -c)

    def test_equatorial_boundary(self):
        r = rect(0, 0, 60, 60)
        assert rect_contains(r, dir_to_vec(SphericalDirection(29.99, 0)), eps=0.0)
        assert not rect_contains(r, dir_to_vec(SphericalDirection(30.01, 0)), eps=0.0)

    def test_vectorized_matches_scalar(self):
        rng = np.random.default_rng(1)
        r = random_rect(rng)
        pts = rng.standard_normal((50, 3))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        batch = rect_contains(r, pts)
        assert batch.tolist() == [rect_contains(r, p) for p in pts]


class TestRectArea:
    def test_closed_form_90(self):
        assert rect_area(rect(0, 0, 90, 90)) == pytest.approx(2 * math.pi / 3, abs=1e-12)

    def test_closed_form_60(self):
        expected = 4 * math.acos(-0.25) - 2 * math.pi
        assert rect_area(rect(10, -20, 60, 60)) == pytest.approx(expected, abs=1e-12)
        # frozen from the Monte-Carlo oracle (4e6 samples -> 1.0086 +- 0.002)
        assert expected == pytest.approx(1.01072, abs=1e-5)

    def test_small_angle_limit(self):
        a = math.radians(0.1)
        assert rect_area(rect(0, 0, 0.1, 0.1)) == pytest.approx(a * a, rel=1e-4)

    def test_area_independent_of_center(self):
        assert rect_area(rect(123, 45, 80, 40)) == rect_area(rect(0, 0, 80, 40))

    def test_monotone_in_alpha(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            beta = rng.uniform(10, 170)
            alphas = np.sort(rng.uniform(10, 170, size=5))
            areas = [rect_area(rect(0, 0, a, beta)) for a in alphas]
            assert all(x < y for x, y in zip(areas, areas[1:]))

    def test_invalid_fov(self):
        with pytest.raises(ValueError):
            rect(0, 0, 180, 60)


class TestMonteCarlo:
    def test_full_sphere_exact(self):
        est = mc_area_estimate(lambda p: np.ones(len(p), dtype=bool), 1000, seed=3)
        assert est == 4 * math.pi

    def test_hemisphere(self):
        est = mc_area_estimate(lambda p: p[:, 2] > 0, 10**6, seed=4)
        assert est == pytest.approx(2 * math.pi, rel=0.01)

    def test_rect_vs_closed_form(self):
        r = rect(0, 0, 90, 90)
        est = mc_area_estimate(rect_predicate(r), 10**6, seed=5)
        assert est == pytest.approx(rect_area(r), rel=0.02)

    def test_seed_determinism(self):
        pred = rect_predicate(rect(30, 10, 50, 50))
        a = mc_area_estimate(pred, 10**5, seed=6)
        b = mc_area_estimate(pred, 10**5, seed=6)
        assert a == b


class TestIntersection:
    def test_self_intersection(self):
        r = rect(15, -30, 75.14, 60)
        p = rect_intersection(r, r)
        assert p.n == 4
        assert polygon_area_girard(p) == pytest.approx(rect_area(r), abs=1e-9)

    def test_disjoint(self):
        a = rect(0, 0, 40, 40)
        b = rect(-180, 0, 40, 40)
        p = rect_intersection(a, b)
        assert p.is_empty and not p.degenerate

    def test_shared_edge_degenerate(self):
        a = rect(0, 0, 60, 60)
        b = rect(60, 0, 60, 60)  # boundaries meet along theta = 30
        p = rect_intersection(a, b)
        assert p.is_empty and p.degenerate
        assert polygon_area_girard(p) == 0.0

    def test_partial_overlap_vs_monte_carlo(self):
        a = rect(0, 0, 75.14, 60)
        b = rect(5, 0, 75.14, 60)
        girard = polygon_area_girard(rect_intersection(a, b))
        mc = mc_area_estimate(rect_predicate(a, b), 10**6, seed=7)
        assert girard == pytest.approx(mc, rel=0.02)

    def test_containment(self):
        outer = rect(0, 0, 120, 120)
        inner = rect(3, -2, 30, 25)
        area = polygon_area_girard(rect_intersection(outer, inner))
        assert area == pytest.approx(rect_area(inner), abs=1e-9)

    def test_intersection_area_bounded(self):
        rng = np.random.default_rng(8)
        for _ in range(50):
            a, b = random_rect(rng), random_rect(rng)
            inter = polygon_area_girard(rect_intersection(a, b))
            assert inter <= min(rect_area(a), rect_area(b)) + 1e-9


class TestGirard:
    def test_empty(self):
        assert polygon_area_girard(SphericalPolygon()) == 0.0

    def test_octant(self):
        p = SphericalPolygon(np.eye(3))
        assert polygon_area_girard(p) == pytest.approx(math.pi / 2, abs=1e-12)

    def test_self_consistency_random(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            r = random_rect(rng)
            assert polygon_area_girard(rect_intersection(r, r)) == pytest.approx(
                rect_area(r), abs=1e-9
            )

    def test_nonconvex_rejected(self):
        square = rect_corners(rect(0, 0, 90, 90))
        bad = square[[0, 2, 1, 3]]  # self-intersecting order
        with pytest.raises(ValueError):
            polygon_area_girard(SphericalPolygon(bad))


class TestOverlapAndIoU:
    def test_self(self):
        r = rect(20, 5, 75.14, 60)
        assert sph_overlap(r, r) == pytest.approx(1.0, abs=1e-9)
        assert sph_iou(r, r) == pytest.approx(1.0, abs=1e-9)

    def test_disjoint_zero(self):
        a = rect(0, 0, 40, 40)
        b = rect(-180, 0, 40, 40)
        assert sph_overlap(a, b) == 0.0
        assert sph_iou(a, b) == 0.0

    def test_shift_vs_monte_carlo(self):
        init = rect(0, 0, 75.14, 60)
        adj = rect(25, 0, 75.14, 60)
        ov = sph_overlap(adj, init)
        assert 0.0 < ov < 1.0
        mc_inter = mc_area_estimate(rect_predicate(init, adj), 10**6, seed=10)
        assert ov == pytest.approx(mc_inter / rect_area(init), rel=0.02)

    def test_iou_symmetry_exact(self):
        rng = np.random.default_rng(11)
        for _ in range(100):
            a, b = random_rect(rng), random_rect(rng)
            assert abs(sph_iou(a, b) - sph_iou(b, a)) <= 1e-12

    def test_overlap_ratio_identity(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            a, b = random_rect(rng), random_rect(rng)
            lhs = sph_overlap(a, b) * rect_area(b)
            rhs = sph_overlap(b, a) * rect_area(a)
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_iou_below_both_overlaps(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            a, b = random_rect(rng), random_rect(rng)
            assert sph_iou(a, b) <= min(sph_overlap(a, b), sph_overlap(b, a)) + 1e-12
