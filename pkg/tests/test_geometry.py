import numpy as np
import pytest

from knotplan.errors import TopologyError
from knotplan.geometry import RopeConfig, straight_rope


def test_straight_rope_shape():
    cfg = straight_rope(n=64, rest_len=0.01)
    assert cfg.num_points == 64
    assert cfg.total_length() == pytest.approx(0.63)
    cfg.validate(rest_len=0.01)


def test_points_read_only():
    cfg = straight_rope()
    with pytest.raises(ValueError):
        cfg.points[0, 0] = 1.0


def test_validate_rejects_short_rope():
    pts = np.zeros((8, 3))
    pts[:, 0] = np.arange(8) * 0.01
    pts[:, 2] = 0.004
    with pytest.raises(TopologyError):
        RopeConfig(pts).validate(rest_len=0.01)


def test_validate_rejects_bad_spacing():
    cfg = straight_rope()
    pts = cfg.points.copy()
    pts[10] = pts[9]  # zero gap
    with pytest.raises(TopologyError):
        RopeConfig(pts).validate(rest_len=0.01)


def test_validate_rejects_deep_penetration():
    cfg = straight_rope()
    pts = cfg.points.copy()
    pts[5, 2] = -0.01
    with pytest.raises(TopologyError):
        RopeConfig(pts).validate(rest_len=0.01)


def test_point_at_u_endpoints():
    cfg = straight_rope()
    np.testing.assert_allclose(cfg.point_at_u(0.0), cfg.points[0])
    np.testing.assert_allclose(cfg.point_at_u(1.0), cfg.points[-1])


def test_point_at_u_midpoint():
    cfg = straight_rope()
    np.testing.assert_allclose(cfg.point_at_u(0.5), [0, 0, 0.004], atol=1e-12)


def test_point_at_u_clamps():
    cfg = straight_rope()
    np.testing.assert_allclose(cfg.point_at_u(-0.5), cfg.points[0])
    np.testing.assert_allclose(cfg.point_at_u(1.5), cfg.points[-1])


def test_nearest_node():
    cfg = straight_rope(n=64)
    assert cfg.nearest_node_to_u(0.0) == 0
    assert cfg.nearest_node_to_u(1.0) == 63
    assert cfg.nearest_node_to_u(0.5) in (31, 32)


def test_json_roundtrip():
    cfg = straight_rope(heading=0.4)
    clone = RopeConfig.from_json_obj(cfg.to_json_obj())
    np.testing.assert_allclose(clone.points, cfg.points)
    assert clone.rope_radius == cfg.rope_radius


def test_rejects_bad_shape():
    with pytest.raises(TopologyError):
        RopeConfig(np.zeros((5, 2)))
