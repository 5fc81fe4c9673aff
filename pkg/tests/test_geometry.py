"""Polyline projection, sampling and ego-frame transforms against brute-force oracles."""
import math

import numpy as np
import pytest

from lanesim.geometry import Polyline, PolylineError, ego_frame, wrap_angle


def brute_force_project(points, p):
    """Per-segment minimum-distance scan, independent of Polyline internals."""
    best = None
    cum = 0.0
    for a, b in zip(points[:-1], points[1:]):
        seg = b - a
        seg_len = math.hypot(*seg)
        t = float(np.clip(np.dot(p - a, seg) / seg_len**2, 0.0, 1.0))
        foot = a + t * seg
        dist = math.hypot(*(p - foot))
        if best is None or dist < best[0] - 1e-15:
            cross = seg[0] * (p - foot)[1] - seg[1] * (p - foot)[0]
            best = (dist, cum + t * seg_len, math.copysign(dist, cross) if dist > 0 else 0.0)
        cum += seg_len
    return best[1], best[2]


def random_polyline(rng, n_points=8):
    steps = rng.uniform(0.2, 1.0, size=(n_points - 1, 2)) * rng.choice([-1, 1], size=(n_points - 1, 2))
    return Polyline(np.vstack([[0.0, 0.0], np.cumsum(steps, axis=0)]))


def test_rejects_single_point():
    with pytest.raises(PolylineError):
        Polyline(np.array([[0.0, 0.0]]))


def test_rejects_coincident_points():
    with pytest.raises(PolylineError, match="coincident"):
        Polyline(np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]))


def test_project_on_line_is_zero_offset():
    line = Polyline(np.array([[0.0, 0.0], [2.0, 0.0]]))
    s, d, idx = line.project((0.7, 0.0))
    assert d == 0.0
    assert s == pytest.approx(0.7, abs=1e-12)
    assert idx == 0


def test_project_left_offset_positive():
    line = Polyline(np.array([[0.0, 0.0], [2.0, 0.0]]))
    s, d, _ = line.project((0.3, 0.05))
    assert d == pytest.approx(0.05, abs=1e-12)
    assert s == pytest.approx(0.3, abs=1e-12)
    _, d_right, _ = line.project((0.3, -0.05))
    assert d_right == pytest.approx(-0.05, abs=1e-12)


def test_project_matches_brute_force_oracle():
    rng = np.random.default_rng(7)
    for _ in range(300):
        line = random_polyline(rng)
        p = rng.uniform(-2.0, 4.0, size=2)
        s, d, _ = line.project(p)
        s_ref, d_ref = brute_force_project(line.points, p)
        assert s == pytest.approx(s_ref, abs=1e-9)
        assert d == pytest.approx(d_ref, abs=1e-9)


def test_projection_tie_breaks_to_smaller_segment():
    # outside the apex of a right-angle corner: both segments equally near
    line = Polyline(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0]]))
    _, _, idx = line.project((1.1, -0.1))
    assert idx == 0


def test_sample_ahead_straight():
    line = Polyline(np.array([[0.0, 0.0], [1.0, 0.0]]))
    pts = line.sample_ahead(0.0, 3, 0.1, wrap=False)
    np.testing.assert_allclose(pts, [[0.1, 0.0], [0.2, 0.0], [0.3, 0.0]], atol=1e-15)


def test_sample_ahead_saturates_at_end():
    line = Polyline(np.array([[0.0, 0.0], [1.0, 0.0]]))
    pts = line.sample_ahead(0.95, 3, 0.1, wrap=False)
    np.testing.assert_allclose(pts, [[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]], atol=1e-15)


def test_sample_ahead_wraps_on_loops():
    # unit square loop, perimeter 4
    square = Polyline(np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0], [0.0, 0.0]]))
    pts = square.sample_ahead(3.9, 3, 0.2, wrap=True)
    # modular-arithmetic oracle: stations 4.1, 4.3, 4.5 -> 0.1, 0.3, 0.5
    expected = [square.point_at((3.9 + 0.2 * (k + 1)) % 4.0) for k in range(3)]
    np.testing.assert_allclose(pts, expected, atol=1e-12)
    np.testing.assert_allclose(pts, [[0.1, 0.0], [0.3, 0.0], [0.5, 0.0]], atol=1e-12)


def test_sampled_points_lie_on_polyline():
    rng = np.random.default_rng(3)
    for _ in range(50):
        line = random_polyline(rng)
        s0 = rng.uniform(0, line.total_length)
        for p in line.sample_ahead(s0, 4, 0.13, wrap=False):
            assert line.distance_to(p) < 1e-9


def test_wrap_angle_range_and_identity():
    for a in np.linspace(-10, 10, 201):
        w = wrap_angle(a)
        assert -math.pi < w <= math.pi
        assert math.isclose(math.sin(w), math.sin(a), abs_tol=1e-12)
        assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-12)
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi


def test_ego_frame_quarter_turn():
    out = ego_frame((1.0, 2.0, math.pi / 2), (1.0, 3.0), "point")
    np.testing.assert_allclose(out, [1.0, 0.0], atol=1e-12)


def test_ego_frame_own_origin():
    out = ego_frame((1.0, 2.0, 0.7), (1.0, 2.0), "point")
    np.testing.assert_allclose(out, [0.0, 0.0], atol=1e-15)


def test_ego_frame_rigid_equivariance():
    rng = np.random.default_rng(11)
    for _ in range(200):
        pose = rng.uniform(-3, 3, size=3)
        p = rng.uniform(-3, 3, size=2)
        theta = rng.uniform(-math.pi, math.pi)
        t = rng.uniform(-5, 5, size=2)
        rot = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
        pose_g = (*(rot @ pose[:2] + t), pose[2] + theta)
        p_g = rot @ p + t
        np.testing.assert_allclose(
            ego_frame(pose_g, p_g, "point"),
            ego_frame((pose[0], pose[1], pose[2]), p, "point"),
            atol=1e-9,
        )
