"""Fixed-size geometric features for one (config, action) query.

Three point streams describe the scene: the strand the move passes over,
the strand it passes under (for loop moves both are the acted segment),
and the whole rope as context. Each stream is resampled to K points by arc
length, centered on the config centroid, and scaled by rope length, which
makes the encoding invariant to workspace translation and uniform scale.
The action's discrete residue (kind plus normalized segment indices) rides
along as a small tag vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..diagram import Diagram, extract_topology
from ..geometry import TABLE_Z, RopeConfig
from ..splines import MotionSpline
from ..topology import CrossAction, R1Action, R2Action, TopoAction

K_POINTS = 32
TAG_DIM = 6
STREAM_DIM = 3 * K_POINTS


def resample_polyline(pts: np.ndarray, k: int = K_POINTS) -> np.ndarray:
    """(k, 3) points at uniform arc spacing along the polyline."""
    pts = np.asarray(pts, dtype=np.float64)
    if pts.shape[0] == 1:
        return np.repeat(pts, k, axis=0)
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
    arc = np.concatenate([[0.0], np.cumsum(seg)])
    if arc[-1] <= 0.0:
        return np.repeat(pts[:1], k, axis=0)
    t = np.linspace(0.0, arc[-1], k)
    return np.column_stack([np.interp(t, arc, pts[:, i]) for i in range(3)])


@dataclass(frozen=True)
class FeatureInput:
    """Normalized streams plus the action tag and the frame that undoes them."""

    over: np.ndarray  # (K, 3)
    under: np.ndarray  # (K, 3)
    context: np.ndarray  # (K, 3)
    tag: np.ndarray  # (TAG_DIM,)
    centroid: np.ndarray  # (3,)
    scale: float

    def stream_matrix(self) -> np.ndarray:
        """(3, 3K) row per stream, ready for the network."""
        return np.stack([self.over.ravel(), self.under.ravel(), self.context.ravel()])

    def normalize_spline(self, spline: MotionSpline) -> np.ndarray:
        """Spline parameters in feature coordinates (6,)."""
        c = self.centroid
        s = self.scale
        mx, my, mz = spline.mid
        rx, ry = spline.release
        return np.array(
            [
                spline.grasp_u,
                (mx - c[0]) / s,
                (my - c[1]) / s,
                (mz - c[2]) / s,
                (rx - c[0]) / s,
                (ry - c[1]) / s,
            ]
        )

    def denormalize_vec(self, v: np.ndarray, table_z: float = TABLE_Z) -> MotionSpline:
        """Back to workspace coordinates; clamps grasp_u and keeps the midpoint above the table."""
        c = self.centroid
        s = self.scale
        u = float(np.clip(v[0], 0.0, 1.0))
        mid = (v[1] * s + c[0], v[2] * s + c[1], max(v[3] * s + c[2], table_z + 0.002))
        release = (v[4] * s + c[0], v[5] * s + c[1])
        return MotionSpline(u, mid, release)


def _action_segments(action: TopoAction) -> tuple[int, int]:
    if isinstance(action, R1Action):
        return action.index, action.index
    if isinstance(action, (R2Action, CrossAction)):
        return action.over_index, action.under_index
    raise TypeError(f"not an action: {action!r}")


def encode(
    config: RopeConfig,
    action: TopoAction,
    diagram: Diagram | None = None,
) -> FeatureInput:
    """Feature streams for applying ``action`` to ``config``.

    ``diagram`` may be passed to reuse an extraction; it must come from the
    same config.
    """
    if diagram is None:
        diagram = extract_topology(config)
    over_seg, under_seg = _action_segments(action)
    k = len(diagram.crossings)

    centroid = config.points.mean(axis=0)
    scale = config.total_length()

    def stream(seg_index: int) -> np.ndarray:
        return (resample_polyline(diagram.segment_points(seg_index)) - centroid) / scale

    over = stream(over_seg)
    under = over if under_seg == over_seg else stream(under_seg)
    context = (resample_polyline(config.points) - centroid) / scale

    nseg = max(2 * k, 1)
    tag = np.array(
        [
            1.0 if isinstance(action, R1Action) else 0.0,
            1.0 if isinstance(action, R2Action) else 0.0,
            1.0 if isinstance(action, CrossAction) else 0.0,
            over_seg / nseg,
            under_seg / nseg,
            k / 10.0,
        ]
    )
    return FeatureInput(over, under, context, tag, centroid, scale)
