"""Grouping of symbolic moves into four learnable families.

Every move maps to one family: 1 for loop moves, 2 for tongue moves, 3 for
end-over crossings (the swept end passes over), 4 for the remaining
crossings (the swept end tucks under). One policy network is trained per
family; mirror and reverse symmetries reduce each move's binary parameters
to a single canonical combination first, so the network never sees the
redundant variants.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..geometry import RopeConfig
from ..splines import MotionSpline, mirror_geom, reverse_geom
from ..topology import (
    CrossAction,
    R1Action,
    R2Action,
    TopoAction,
    mirror_topo,
    reverse_topo,
)

PRIMITIVE_SETS = (1, 2, 3, 4)


def primitive_set_of(action: TopoAction, crossings: int) -> int:
    """Family id of a move applied to a state with the given crossing count."""
    if isinstance(action, R1Action):
        return 1
    if isinstance(action, R2Action):
        return 2
    if isinstance(action, CrossAction):
        ends = (0, 2 * crossings)
        return 3 if action.over_index in ends else 4
    raise TypeError(f"not an action: {action!r}")


def _needs_mirror_reverse(action: TopoAction) -> tuple[bool, bool]:
    """Which symmetry flips bring the binary parameters to +1."""
    if isinstance(action, R1Action):
        return {
            (1, 1): (False, False),
            (-1, -1): (True, False),
            (-1, 1): (False, True),
            (1, -1): (True, True),
        }[(action.left, action.sign)]
    if isinstance(action, R2Action):
        return {
            (1, 1): (False, False),
            (-1, 1): (True, False),
            (-1, -1): (False, True),
            (1, -1): (True, True),
        }[(action.left, action.over_first)]
    if isinstance(action, CrossAction):
        return (action.sign == -1, False)
    raise TypeError(f"not an action: {action!r}")


@dataclass(frozen=True)
class CanonicalIO:
    """A (config, action) pair expressed in the canonical symmetry frame.

    ``transform_spline`` maps motions between the two frames; mirror and
    reverse are involutions and commute, so one map serves both directions.
    """

    config: RopeConfig
    action: TopoAction
    mirrored: bool
    reversed_: bool

    def transform_spline(self, spline: MotionSpline) -> MotionSpline:
        if self.mirrored:
            spline = mirror_geom(spline=spline)
        if self.reversed_:
            spline = reverse_geom(spline=spline)
        return spline


def canonicalize_io(config: RopeConfig, action: TopoAction, crossings: int) -> CanonicalIO:
    """Flip config and action so the action's binary parameters all read +1.

    ``crossings`` is the crossing count of the state the action applies to,
    needed because reversing renumbers segment indices.
    """
    mirrored, reversed_ = _needs_mirror_reverse(action)
    out_cfg = config
    out_act = action
    if mirrored:
        out_cfg = mirror_geom(out_cfg)
        out_act = mirror_topo(out_act)
    if reversed_:
        out_cfg = reverse_geom(out_cfg)
        out_act = reverse_topo(out_act, crossings=crossings)
    return CanonicalIO(out_cfg, out_act, mirrored, reversed_)
