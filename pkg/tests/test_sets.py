import math

import numpy as np
import pytest

from zopt.sets import Ball, Box, WholeSpace, gradient_map, set_from_spec


class TestProjection:
    def test_box_interior_point_fixed(self):
        box = Box(-0.5, 0.5, dim=2)
        x = np.array([0.1, -0.3])
        assert np.array_equal(box.project(x), x)

    def test_box_clamps_by_hand(self):
        box = Box(-0.5, 0.5, dim=2)
        np.testing.assert_array_equal(
            box.project(np.array([1.0, -2.0])), np.array([0.5, -0.5])
        )

    def test_whole_space_is_identity(self):
        ws = WholeSpace(3)
        x = np.array([4.0, -7.0, 0.0])
        assert np.array_equal(ws.project(x), x)

    def test_ball_radial_rescaling(self):
        ball = Ball(np.zeros(2), 1.0)
        p = ball.project(np.array([3.0, 4.0]))
        np.testing.assert_allclose(p, [0.6, 0.8], rtol=1e-12)
        inside = np.array([0.3, -0.1])
        assert np.array_equal(ball.project(inside), inside)

    def test_projection_idempotent(self):
        gen = np.random.default_rng(0)
        for fs in (Box(-0.5, 0.5, dim=6), Ball(gen.standard_normal(6), 2.0)):
            pts = gen.standard_normal((200, 6)) * 3
            once = np.array([fs.project(p) for p in pts])
            twice = np.array([fs.project(p) for p in once])
            assert np.array_equal(once, twice)

    def test_projection_nonexpansive(self):
        gen = np.random.default_rng(1)
        for fs in (Box(-1.0, 2.0, dim=5), Ball(np.zeros(5), 1.5)):
            for _ in range(1000):
                x = gen.standard_normal(5) * 4
                y = gen.standard_normal(5) * 4
                dist_proj = np.linalg.norm(fs.project(x) - fs.project(y))
                assert dist_proj <= np.linalg.norm(x - y) * (1 + 1e-12)

    def test_projection_lands_feasible(self):
        gen = np.random.default_rng(2)
        for fs in (Box(-0.5, 0.5, dim=4), Ball(np.ones(4), 0.7)):
            for _ in range(500):
                assert fs.contains(fs.project(gen.standard_normal(4) * 10))

    def test_batched_projection_matches_rowwise(self):
        gen = np.random.default_rng(3)
        pts = gen.standard_normal((40, 3)) * 5
        for fs in (Box(-0.5, 0.5, dim=3), Ball(np.zeros(3), 1.0), WholeSpace(3)):
            batched = fs.project(pts)
            rows = np.array([fs.project(p) for p in pts])
            assert np.array_equal(batched, rows)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError, match="dimension"):
            Box(-1, 1, dim=3).project(np.zeros(4))


class TestDiameter:
    def test_unit_box_diameter_is_sqrt_n(self):
        for n in (2, 5, 9):
            box = Box(-0.5, 0.5, dim=n)
            assert box.diameter() == pytest.approx(math.sqrt(n), rel=1e-12)

    def test_ball_diameter(self):
        assert Ball(np.zeros(3), 3.0).diameter() == 6.0

    def test_whole_space_diameter_infinite(self):
        assert math.isinf(WholeSpace(2).diameter())


class TestMembership:
    def test_boundary_points_are_members(self):
        box = Box(-0.5, 0.5, dim=2)
        assert box.contains(np.array([0.5, -0.5]))
        assert box.contains(np.array([0.5 + 1e-13, 0.0]))
        assert not box.contains(np.array([0.5 + 1e-9, 0.0]))

    def test_validation(self):
        with pytest.raises(ValueError, match="lower < upper"):
            Box(np.array([0.0, 1.0]), np.array([1.0, 1.0]))
        with pytest.raises(ValueError, match="radius"):
            Ball(np.zeros(2), 0.0)
        with pytest.raises(ValueError, match="dim"):
            Box(-1, 1, dim=None)

    def test_sample_is_feasible(self):
        gen = np.random.default_rng(4)
        for fs in (Box(-0.5, 0.5, dim=5), Ball(np.ones(5), 2.0)):
            for _ in range(200):
                assert fs.contains(fs.sample(gen))


class TestGradientMap:
    def test_whole_space_returns_g(self):
        ws = WholeSpace(3)
        x = np.array([1.0, 2.0, 3.0])
        g = np.array([-0.5, 4.0, 0.25])
        np.testing.assert_array_equal(gradient_map(ws, x, g, 0.1), g)

    def test_inactive_clip_returns_g(self):
        # x - h g = 0.4 - 0.1 * 2 = 0.2 stays interior
        box = Box(-0.5, 0.5, dim=1)
        out = gradient_map(box, np.array([0.4]), np.array([2.0]), 0.1)
        assert out[0] == pytest.approx(2.0, rel=1e-12)

    def test_active_clip_by_hand(self):
        # x - h g = 0.4 + 0.3 = 0.7 clips to 0.5: (0.4 - 0.5) / 0.1 = -1
        box = Box(-0.5, 0.5, dim=1)
        out = gradient_map(box, np.array([0.4]), np.array([-3.0]), 0.1)
        assert out[0] == pytest.approx(-1.0, rel=1e-12)

    def test_interior_step_machine_precision(self):
        gen = np.random.default_rng(5)
        box = Box(-10.0, 10.0, dim=4)
        for _ in range(100):
            x = gen.uniform(-1, 1, size=4)
            g = gen.standard_normal(4)
            out = gradient_map(box, x, g, 0.01)
            np.testing.assert_allclose(out, g, rtol=0, atol=1e-12)

    def test_requires_feasible_point(self):
        box = Box(-0.5, 0.5, dim=2)
        with pytest.raises(ValueError, match="feasible"):
            gradient_map(box, np.array([2.0, 0.0]), np.zeros(2), 0.1)

    def test_requires_positive_step(self):
        with pytest.raises(ValueError, match="h"):
            gradient_map(WholeSpace(2), np.zeros(2), np.zeros(2), 0.0)


class TestSpecRoundTrip:
    def test_box_spec(self):
        fs = set_from_spec({"kind": "box", "lower": "-0.5", "upper": "0.5"}, dim=3)
        assert isinstance(fs, Box)
        assert fs.dim == 3
        rebuilt = set_from_spec(fs.spec(), dim=3)
        assert np.array_equal(rebuilt.lower, fs.lower)
        assert np.array_equal(rebuilt.upper, fs.upper)

    def test_vector_bounds(self):
        fs = set_from_spec({"kind": "box", "lower": "-1,-2", "upper": "1,0"}, dim=2)
        np.testing.assert_array_equal(fs.lower, [-1.0, -2.0])

    def test_ball_spec(self):
        fs = set_from_spec({"kind": "ball", "center": "0", "radius": "2.5"}, dim=4)
        assert isinstance(fs, Ball)
        assert fs.radius == 2.5
        rebuilt = set_from_spec(fs.spec(), dim=4)
        assert rebuilt.radius == fs.radius

    def test_whole_space_spec(self):
        assert isinstance(set_from_spec({"kind": "whole_space"}, dim=2), WholeSpace)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown set kind"):
            set_from_spec({"kind": "simplex"}, dim=2)
