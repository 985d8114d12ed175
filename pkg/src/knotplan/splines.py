"""6-parameter motion splines: grasp on the rope, lift through a midpoint, release on the table.

A motion is a quadratic Bézier through three control points: the grasp point
(resolved on the rope at arc-length fraction ``grasp_u``), a free midpoint,
and a release point resting on the table. Mirror and Reverse act on configs
and splines so one recorded motion covers four symmetric variants.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import TABLE_Z, RopeConfig

# per-parameter demo noise: (grasp_u, mid x, mid y, mid z, release x, release y)
DEFAULT_NOISE_SIGMA = np.array([0.015, 0.008, 0.008, 0.006, 0.008, 0.008])


@dataclass(frozen=True)
class MotionSpline:
    grasp_u: float
    mid: tuple[float, float, float]
    release: tuple[float, float]

    def __post_init__(self):
        object.__setattr__(self, "grasp_u", float(self.grasp_u))
        object.__setattr__(self, "mid", tuple(float(v) for v in self.mid))
        object.__setattr__(self, "release", tuple(float(v) for v in self.release))
        if len(self.mid) != 3 or len(self.release) != 2:
            raise ValueError("mid must be 3D and release 2D")

    def to_vec(self) -> np.ndarray:
        return np.array([self.grasp_u, *self.mid, *self.release], dtype=np.float64)

    @staticmethod
    def from_vec(v) -> "MotionSpline":
        v = np.asarray(v, dtype=np.float64)
        if v.shape != (6,):
            raise ValueError(f"spline vector must have 6 entries, got {v.shape}")
        return MotionSpline(v[0], (v[1], v[2], v[3]), (v[4], v[5]))

    def to_json_obj(self) -> dict:
        return {"u": self.grasp_u, "mid": list(self.mid), "release": list(self.release)}

    @staticmethod
    def from_json_obj(obj: dict) -> "MotionSpline":
        return MotionSpline(obj["u"], tuple(obj["mid"]), tuple(obj["release"]))


def control_points(
    spline: MotionSpline, start_config: RopeConfig, table_z: float = TABLE_Z
) -> np.ndarray:
    """The three Bézier control points as a (3, 3) array.

    The release point sits at rest height (table plane plus rope radius), so
    the gripper sets the rope down instead of pressing it into the table.
    """
    p0 = start_config.point_at_u(spline.grasp_u)
    p1 = np.array(spline.mid)
    p2 = np.array([spline.release[0], spline.release[1], table_z + start_config.rope_radius])
    return np.stack([p0, p1, p2])


def eval_spline(
    spline: MotionSpline,
    start_config: RopeConfig,
    t,
    table_z: float = TABLE_Z,
) -> np.ndarray:
    """Quadratic Bézier point(s) at parameter t ∈ [0, 1]; t may be an array."""
    cp = control_points(spline, start_config, table_z)
    t = np.asarray(t, dtype=np.float64)
    w0 = (1.0 - t) ** 2
    w1 = 2.0 * (1.0 - t) * t
    w2 = t**2
    return np.multiply.outer(w0, cp[0]) + np.multiply.outer(w1, cp[1]) + np.multiply.outer(w2, cp[2])


def spline_waypoints(
    spline: MotionSpline, start_config: RopeConfig, m: int, table_z: float = TABLE_Z
) -> np.ndarray:
    """(m, 3) gripper waypoints at uniform parameter spacing, t=0 excluded, t=1 included."""
    t = np.linspace(0.0, 1.0, m + 1)[1:]
    return eval_spline(spline, start_config, t, table_z)


def mirror_geom(
    config: RopeConfig | None = None,
    spline: MotionSpline | None = None,
    y0: float = 0.0,
):
    """Reflect about the horizontal workspace axis y = y0; grasp_u unchanged."""
    out_config = None
    if config is not None:
        pts = config.points.copy()
        pts[:, 1] = 2.0 * y0 - pts[:, 1]
        out_config = RopeConfig(pts, config.rope_radius)
    out_spline = None
    if spline is not None:
        mx, my, mz = spline.mid
        rx, ry = spline.release
        out_spline = MotionSpline(spline.grasp_u, (mx, 2.0 * y0 - my, mz), (rx, 2.0 * y0 - ry))
    return _pair(out_config, out_spline)


def reverse_geom(
    config: RopeConfig | None = None,
    spline: MotionSpline | None = None,
):
    """Swap head and tail: point order reversed, grasp_u ↦ 1 − grasp_u, coordinates kept."""
    out_config = None
    if config is not None:
        out_config = RopeConfig(config.points[::-1].copy(), config.rope_radius)
    out_spline = None
    if spline is not None:
        out_spline = MotionSpline(1.0 - spline.grasp_u, spline.mid, spline.release)
    return _pair(out_config, out_spline)


def _pair(config, spline):
    if config is not None and spline is not None:
        return config, spline
    return config if spline is None else spline


def sample_noisy(
    spline: MotionSpline,
    rng: np.random.Generator,
    sigma=DEFAULT_NOISE_SIGMA,
    table_z: float = TABLE_Z,
) -> MotionSpline:
    """Gaussian perturbation per parameter; grasp_u clamped to [0,1], mid z kept above the table."""
    sigma = np.asarray(sigma, dtype=np.float64)
    v = spline.to_vec() + rng.normal(0.0, 1.0, 6) * sigma
    v[0] = min(max(v[0], 0.0), 1.0)
    v[3] = max(v[3], table_z)
    return MotionSpline.from_vec(v)
