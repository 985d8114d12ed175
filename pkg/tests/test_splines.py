import numpy as np
import pytest

from knotplan.geometry import RopeConfig, straight_rope
from knotplan.splines import (
    DEFAULT_NOISE_SIGMA,
    MotionSpline,
    eval_spline,
    mirror_geom,
    reverse_geom,
    sample_noisy,
    spline_waypoints,
)

SP = MotionSpline(0.25, (0.05, 0.1, 0.06), (-0.1, 0.02))


def test_vec_roundtrip():
    v = SP.to_vec()
    assert v.shape == (6,)
    assert MotionSpline.from_vec(v) == SP


def test_json_roundtrip():
    assert MotionSpline.from_json_obj(SP.to_json_obj()) == SP


def test_eval_endpoints():
    cfg = straight_rope()
    p0 = eval_spline(SP, cfg, 0.0)
    np.testing.assert_allclose(p0, cfg.point_at_u(0.25), atol=1e-12)
    p1 = eval_spline(SP, cfg, 1.0)
    np.testing.assert_allclose(p1, [-0.1, 0.02, 0.004], atol=1e-12)


def test_eval_degenerate_straight_line():
    cfg = straight_rope()
    p0 = cfg.point_at_u(0.5)
    p2 = np.array([0.1, 0.05, 0.004])
    mid = 0.5 * (p0 + p2)
    sp = MotionSpline(0.5, tuple(mid), (0.1, 0.05))
    np.testing.assert_allclose(eval_spline(sp, cfg, 0.5), mid, atol=1e-12)


def test_waypoints_exclude_start_include_end():
    cfg = straight_rope()
    wps = spline_waypoints(SP, cfg, 40)
    assert wps.shape == (40, 3)
    np.testing.assert_allclose(wps[-1], [-0.1, 0.02, 0.004], atol=1e-12)
    assert not np.allclose(wps[0], eval_spline(SP, cfg, 0.0))


def test_mirror_involution():
    cfg = straight_rope(heading=0.3)
    c2, s2 = mirror_geom(*mirror_geom(cfg, SP))
    np.testing.assert_allclose(c2.points, cfg.points, atol=1e-12)
    assert s2 == SP


def test_mirror_fixed_point_on_symmetric_config():
    cfg = straight_rope()  # lies along y = 0
    np.testing.assert_allclose(mirror_geom(cfg).points, cfg.points, atol=1e-12)


def test_reverse_involution():
    cfg = straight_rope(heading=0.3)
    c2, s2 = reverse_geom(*reverse_geom(cfg, SP))
    np.testing.assert_allclose(c2.points, cfg.points, atol=1e-12)
    assert s2.grasp_u == pytest.approx(SP.grasp_u)
    assert s2.mid == SP.mid and s2.release == SP.release


def test_reverse_grasp_u():
    assert reverse_geom(spline=MotionSpline(0.25, SP.mid, SP.release)).grasp_u == 0.75


def test_mirror_commutes_with_eval():
    cfg = straight_rope(heading=0.2)
    mc, ms = mirror_geom(cfg, SP)
    t = np.linspace(0, 1, 17)
    direct = eval_spline(ms, mc, t)
    flipped = eval_spline(SP, cfg, t)
    flipped[:, 1] = -flipped[:, 1]
    np.testing.assert_allclose(direct, flipped, atol=1e-12)


def test_reverse_commutes_with_eval():
    cfg = straight_rope(heading=0.2)
    rc, rs = reverse_geom(cfg, SP)
    t = np.linspace(0, 1, 17)
    np.testing.assert_allclose(eval_spline(rs, rc, t), eval_spline(SP, cfg, t), atol=1e-9)


def test_sample_noisy_zero_sigma():
    rng = np.random.default_rng(0)
    assert sample_noisy(SP, rng, np.zeros(6)) == SP


def test_sample_noisy_mean():
    rng = np.random.default_rng(1)
    draws = np.stack([sample_noisy(SP, rng).to_vec() for _ in range(10_000)])
    mean = draws.mean(axis=0)
    se = DEFAULT_NOISE_SIGMA / np.sqrt(10_000)
    # grasp_u and mid z are clamped, skip exactness there
    for k in (1, 2, 4, 5):
        assert abs(mean[k] - SP.to_vec()[k]) < 3 * se[k]


def test_sample_noisy_clamps():
    rng = np.random.default_rng(2)
    for _ in range(200):
        s = sample_noisy(MotionSpline(0.99, (0, 0, 0.001), (0, 0)), rng, np.ones(6))
        assert 0.0 <= s.grasp_u <= 1.0
        assert s.mid[2] >= 0.0
