"""Rope configurations as ordered 3D polylines, head at index 0."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import TopologyError

TABLE_Z = 0.0


@dataclass(frozen=True)
class RopeConfig:
    """An ordered sequence of rope node positions plus the rope's radius.

    ``points`` is an (N, 3) float64 array in meters. Index 0 is the head of
    the rope; the tail is the last row. The array is copied and made
    read-only so configs can be shared across threads and used as
    deterministic inputs.
    """

    points: np.ndarray
    rope_radius: float = 0.004

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise TopologyError(f"points must be (N, 3), got {pts.shape}")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def num_points(self) -> int:
        return self.points.shape[0]

    def validate(self, rest_len: float, table_z: float = TABLE_Z) -> None:
        """Check node count, spacing within ±20% of rest length, no deep table penetration."""
        n = self.num_points
        if n < 16:
            raise TopologyError(f"rope needs at least 16 points, got {n}")
        gaps = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
        lo, hi = 0.8 * rest_len, 1.2 * rest_len
        if gaps.min() < lo or gaps.max() > hi:
            raise TopologyError(
                f"node spacing [{gaps.min():.4f}, {gaps.max():.4f}] outside "
                f"±20% of rest length {rest_len:.4f}"
            )
        floor = table_z - 0.1 * self.rope_radius
        if self.points[:, 2].min() < floor:
            raise TopologyError(
                f"z={self.points[:, 2].min():.4f} penetrates table at {table_z:.4f}"
            )

    def arc_lengths(self) -> np.ndarray:
        """Cumulative arc length per node; first entry 0, last = total length."""
        gaps = np.linalg.norm(np.diff(self.points, axis=0), axis=1)
        return np.concatenate([[0.0], np.cumsum(gaps)])

    def total_length(self) -> float:
        return float(self.arc_lengths()[-1])

    def point_at_u(self, u: float) -> np.ndarray:
        """Interpolated 3D point at arc-length fraction u ∈ [0, 1] from the head."""
        u = min(max(float(u), 0.0), 1.0)
        s = self.arc_lengths()
        target = u * s[-1]
        i = int(np.searchsorted(s, target, side="right")) - 1
        i = min(max(i, 0), self.num_points - 2)
        gap = s[i + 1] - s[i]
        frac = 0.0 if gap <= 0 else (target - s[i]) / gap
        return (1.0 - frac) * self.points[i] + frac * self.points[i + 1]

    def nearest_node_to_u(self, u: float) -> int:
        """Index of the node closest (by arc length) to fraction u."""
        s = self.arc_lengths()
        return int(np.argmin(np.abs(s - min(max(float(u), 0.0), 1.0) * s[-1])))

    def to_json_obj(self) -> dict:
        return {
            "points": [[float(v) for v in p] for p in self.points],
            "radius": float(self.rope_radius),
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "RopeConfig":
        return RopeConfig(np.array(obj["points"], dtype=np.float64), float(obj["radius"]))


def straight_rope(
    n: int = 64,
    rest_len: float = 0.01,
    rope_radius: float = 0.004,
    center: tuple[float, float] = (0.0, 0.0),
    table_z: float = TABLE_Z,
    heading: float = 0.0,
) -> RopeConfig:
    """Straight rope resting on the table, head at the -x end before rotation by heading."""
    length = (n - 1) * rest_len
    xs = np.linspace(-length / 2.0, length / 2.0, n)
    pts = np.zeros((n, 3))
    c, s = np.cos(heading), np.sin(heading)
    pts[:, 0] = center[0] + c * xs
    pts[:, 1] = center[1] + s * xs
    pts[:, 2] = table_z + rope_radius
    return RopeConfig(pts, rope_radius)
