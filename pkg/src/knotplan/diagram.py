"""Read a rope configuration's topology off its horizontal projection.

Crossings are transversal self-intersections of the projected polyline; the
strand with the greater interpolated height passes over. Each crossing gets
the sign of (l_over × l_under)·ẑ with both directions normalized in the
plane. Readings too close to call (shallow angle, small height separation,
crossing near a rope tip, parallel overlap) raise DegeneracyError instead
of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError, TopologyError
from .geometry import RopeConfig
from .topology import OVER, UNDER, CrossingEncounter, TopologicalState, canonicalize

ANGLE_MARGIN_DEG = 5.0
TIP_MARGIN = 0.02  # meters of arc length excluded at each rope end


def crossing_sign(l_over, l_under, min_sin: float = 1e-9) -> int:
    """Sign of the planar cross product of the over and under directions."""
    lo = np.asarray(l_over, dtype=np.float64)
    lu = np.asarray(l_under, dtype=np.float64)
    lo2 = lo[:2] / max(np.linalg.norm(lo[:2]), 1e-300)
    lu2 = lu[:2] / max(np.linalg.norm(lu[:2]), 1e-300)
    cz = lo2[0] * lu2[1] - lo2[1] * lu2[0]
    if abs(cz) < min_sin:
        raise DegeneracyError("near-parallel crossing directions", reason="angle")
    return 1 if cz > 0 else -1


@dataclass(frozen=True)
class CrossingGeom:
    """One projected self-intersection: where it is and which strand is on top."""

    crossing_id: int
    position: tuple[float, float]
    over_arc: float
    under_arc: float
    over_z: float
    under_z: float
    sign: int

    def to_json_obj(self) -> dict:
        return {
            "id": self.crossing_id,
            "position": list(self.position),
            "over_arc": self.over_arc,
            "under_arc": self.under_arc,
            "over_z": self.over_z,
            "under_z": self.under_z,
            "sign": self.sign,
        }


@dataclass(frozen=True)
class Diagram:
    """A config's extracted state plus the geometry behind every encounter."""

    state: TopologicalState
    crossings: tuple[CrossingGeom, ...]
    encounter_arcs: tuple[float, ...]  # arc position of each encounter, in order
    config: RopeConfig

    @property
    def num_segments(self) -> int:
        return len(self.encounter_arcs) + 1

    def segment_span(self, seg_index: int) -> tuple[float, float]:
        """Arc-length range [start, end] covered by a diagram segment."""
        if not 0 <= seg_index < self.num_segments:
            raise TopologyError(f"segment index {seg_index} out of range")
        total = self.config.total_length()
        bounds = (0.0,) + self.encounter_arcs + (total,)
        return bounds[seg_index], bounds[seg_index + 1]

    def segment_points(self, seg_index: int) -> np.ndarray:
        """The sub-polyline of one segment: exact split points plus interior nodes."""
        lo, hi = self.segment_span(seg_index)
        arcs = self.config.arc_lengths()
        total = arcs[-1]
        pts = [self.config.point_at_u(lo / total)]
        inside = np.where((arcs > lo + 1e-12) & (arcs < hi - 1e-12))[0]
        for i in inside:
            pts.append(self.config.points[i])
        pts.append(self.config.point_at_u(hi / total))
        return np.array(pts)

    def to_json_obj(self) -> dict:
        return {
            "state": self.state.to_json_obj(),
            "crossings": [c.to_json_obj() for c in self.crossings],
            "encounter_arcs": list(self.encounter_arcs),
        }


def _intersections(points: np.ndarray):
    """All transversal intersections between non-adjacent projected segments.

    Returns a list of (seg_i, seg_j, t, u) with parameters in [0, 1); uses a
    half-open convention so an intersection at a shared node is counted once.
    Vectorized over all candidate pairs.
    """
    n = points.shape[0]
    p = points[:, :2]
    d = np.diff(p, axis=0)
    nseg = n - 1
    ii, jj = np.triu_indices(nseg, k=2)
    # solve p[i] + t*d[i] = p[j] + u*d[j]
    denom = d[ii, 0] * d[jj, 1] - d[ii, 1] * d[jj, 0]
    rx = p[jj, 0] - p[ii, 0]
    ry = p[jj, 1] - p[ii, 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = (rx * d[jj, 1] - ry * d[jj, 0]) / denom
        u = (rx * d[ii, 1] - ry * d[ii, 0]) / denom
    ok = (np.abs(denom) > 1e-15) & (t >= 0.0) & (t < 1.0) & (u >= 0.0) & (u < 1.0)
    return [(int(ii[k]), int(jj[k]), float(t[k]), float(u[k])) for k in np.where(ok)[0]]


def _point_seg_dist_vec(px, py, ax, ay, bx, by):
    """Distance from points (px, py) to segments (a, b), all element-wise arrays."""
    vx = bx - ax
    vy = by - ay
    vv = np.maximum(vx * vx + vy * vy, 1e-300)
    t = np.clip(((px - ax) * vx + (py - ay) * vy) / vv, 0.0, 1.0)
    dx = px - (ax + t * vx)
    dy = py - (ay + t * vy)
    return np.hypot(dx, dy)


def _near_parallel_overlap(points: np.ndarray, radius: float, min_sin: float):
    """Find a non-adjacent segment pair that runs parallel within one radius, if any.

    For near-parallel non-intersecting segments the pair distance is attained
    at an endpoint, so four point-to-segment distances suffice.
    """
    p = points[:, :2]
    d = np.diff(p, axis=0)
    lens = np.maximum(np.linalg.norm(d, axis=1), 1e-300)
    nseg = d.shape[0]
    ii, jj = np.triu_indices(nseg, k=2)
    sin = np.abs(d[ii, 0] * d[jj, 1] - d[ii, 1] * d[jj, 0]) / (lens[ii] * lens[jj])
    near = np.where(sin < min_sin)[0]
    if near.size == 0:
        return None
    i = ii[near]
    j = jj[near]
    dist = np.minimum.reduce(
        [
            _point_seg_dist_vec(p[i, 0], p[i, 1], p[j, 0], p[j, 1], p[j + 1, 0], p[j + 1, 1]),
            _point_seg_dist_vec(p[i + 1, 0], p[i + 1, 1], p[j, 0], p[j, 1], p[j + 1, 0], p[j + 1, 1]),
            _point_seg_dist_vec(p[j, 0], p[j, 1], p[i, 0], p[i, 1], p[i + 1, 0], p[i + 1, 1]),
            _point_seg_dist_vec(p[j + 1, 0], p[j + 1, 1], p[i, 0], p[i, 1], p[i + 1, 0], p[i + 1, 1]),
        ]
    )
    bad = np.where(dist < radius)[0]
    if bad.size == 0:
        return None
    k = int(bad[0])
    return int(i[k]), int(j[k])


def _analyze(config: RopeConfig, tip_margin: float, angle_margin_deg: float):
    """Shared worker for extract_topology and is_degenerate."""
    points = config.points
    min_sin = math.sin(math.radians(angle_margin_deg))
    height_margin = 0.5 * config.rope_radius

    overlap = _near_parallel_overlap(points, config.rope_radius, min_sin)
    if overlap is not None:
        return None, f"tangency: segments {overlap[0]} and {overlap[1]} overlap in projection"

    arcs = config.arc_lengths()
    total = arcs[-1]
    d3 = np.diff(points, axis=0)
    hits = _intersections(points)

    raw = []
    for i, j, t, u in hits:
        arc_i = arcs[i] + t * (arcs[i + 1] - arcs[i])
        arc_j = arcs[j] + u * (arcs[j + 1] - arcs[j])
        for arc in (arc_i, arc_j):
            if arc < tip_margin or arc > total - tip_margin:
                return None, f"tip: crossing at arc {arc:.3f} within {tip_margin:.3f} of an end"
        z_i = points[i, 2] + t * d3[i, 2]
        z_j = points[j, 2] + u * d3[j, 2]
        if abs(z_i - z_j) < height_margin:
            return None, f"height: strands separated by {abs(z_i - z_j):.4f} at a crossing"
        if z_i > z_j:
            over_seg, under_seg, over_arc, under_arc, over_z, under_z = i, j, arc_i, arc_j, z_i, z_j
        else:
            over_seg, under_seg, over_arc, under_arc, over_z, under_z = j, i, arc_j, arc_i, z_j, z_i
        try:
            sign = crossing_sign(d3[over_seg], d3[under_seg], min_sin)
        except DegeneracyError:
            return None, "angle: crossing shallower than the angle margin"
        x = points[i, 0] + t * d3[i, 0]
        y = points[i, 1] + t * d3[i, 1]
        raw.append((over_arc, under_arc, over_z, under_z, sign, (float(x), float(y))))

    return (raw, arcs, total), ""


def is_degenerate(config: RopeConfig, tip_margin: float = TIP_MARGIN) -> tuple[bool, str]:
    """Whether extraction would refuse this config, and the first reason found."""
    result, reason = _analyze(config, tip_margin, ANGLE_MARGIN_DEG)
    return (result is None), reason


def extract_topology(config: RopeConfig, tip_margin: float = TIP_MARGIN) -> Diagram:
    """Project, find crossings, order encounters by arc length, canonicalize ids."""
    result, reason = _analyze(config, tip_margin, ANGLE_MARGIN_DEG)
    if result is None:
        kind = reason.split(":", 1)[0]
        raise DegeneracyError(reason, reason=kind)
    raw, _arcs, _total = result

    # one entry per encounter: (arc position, provisional id, vertical, sign)
    encounters = []
    for cid, (over_arc, under_arc, over_z, under_z, sign, xy) in enumerate(raw, start=1):
        encounters.append((over_arc, cid, OVER, sign))
        encounters.append((under_arc, cid, UNDER, sign))
    encounters.sort(key=lambda e: e[0])

    state = canonicalize(
        TopologicalState(
            tuple(CrossingEncounter(cid, v, s) for _, cid, v, s in encounters)
        )
    )
    # canonical id for provisional id = order of first appearance in the sorted list
    first_seen: dict[int, int] = {}
    for _, cid, _, _ in encounters:
        if cid not in first_seen:
            first_seen[cid] = len(first_seen) + 1
    crossings = tuple(
        sorted(
            (
                CrossingGeom(first_seen[cid], xy, over_arc, under_arc, over_z, under_z, sign)
                for cid, (over_arc, under_arc, over_z, under_z, sign, xy) in enumerate(raw, start=1)
            ),
            key=lambda c: c.crossing_id,
        )
    )
    return Diagram(
        state=state,
        crossings=crossings,
        encounter_arcs=tuple(e[0] for e in encounters),
        config=config,
    )


def extract_state(config: RopeConfig, tip_margin: float = TIP_MARGIN) -> TopologicalState:
    return extract_topology(config, tip_margin).state


def extract_with_jitter(
    config: RopeConfig, rng: np.random.Generator, tip_margin: float = TIP_MARGIN
) -> Diagram:
    """Extraction with one retry after a small random jitter; for planner use."""
    try:
        return extract_topology(config, tip_margin)
    except DegeneracyError:
        amp = 0.2 * config.rope_radius
        jittered = RopeConfig(
            config.points + rng.uniform(-amp, amp, config.points.shape),
            config.rope_radius,
        )
        return extract_topology(jittered, tip_margin)


def brute_force_state(config: RopeConfig, tip_margin: float = TIP_MARGIN) -> TopologicalState:
    """Independent oracle: scalar orientation-test intersection scan, no shared code.

    Walks every non-adjacent segment pair with the classic ccw test, then
    recovers parameters by direct elimination. Raises DegeneracyError under
    the same margins as extract_topology.
    """
    pts = [(float(x), float(y), float(z)) for x, y, z in config.points]
    n = len(pts)
    min_sin = math.sin(math.radians(ANGLE_MARGIN_DEG))
    height_margin = 0.5 * config.rope_radius

    # cumulative arc lengths, scalar
    arcs = [0.0]
    for k in range(1, n):
        dx = pts[k][0] - pts[k - 1][0]
        dy = pts[k][1] - pts[k - 1][1]
        dz = pts[k][2] - pts[k - 1][2]
        arcs.append(arcs[-1] + math.sqrt(dx * dx + dy * dy + dz * dz))
    total = arcs[-1]

    def ccw(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    found = []
    for i in range(n - 1):
        a, b = pts[i], pts[i + 1]
        for j in range(i + 2, n - 1):
            c, e = pts[j], pts[j + 1]
            d1 = ccw(c, e, a)
            d2 = ccw(c, e, b)
            d3 = ccw(a, b, c)
            d4 = ccw(a, b, e)

            # parallel-overlap check first
            vix, viy = b[0] - a[0], b[1] - a[1]
            vjx, vjy = e[0] - c[0], e[1] - c[1]
            li = math.hypot(vix, viy)
            lj = math.hypot(vjx, vjy)
            if li > 1e-12 and lj > 1e-12:
                sin_angle = abs(vix * vjy - viy * vjx) / (li * lj)
                if sin_angle < min_sin:
                    if _scalar_seg_dist(a, b, c, e) < config.rope_radius:
                        raise DegeneracyError("tangency (oracle)", reason="tangency")
                    continue

            denom = d1 - d2
            if denom == 0.0:
                continue
            t = d1 / denom
            denom2 = d3 - d4
            if denom2 == 0.0:
                continue
            u = d3 / denom2
            if not (0.0 <= t < 1.0 and 0.0 <= u < 1.0):
                continue

            arc_i = arcs[i] + t * (arcs[i + 1] - arcs[i])
            arc_j = arcs[j] + u * (arcs[j + 1] - arcs[j])
            if min(arc_i, arc_j) < tip_margin or max(arc_i, arc_j) > total - tip_margin:
                raise DegeneracyError("tip (oracle)", reason="tip")
            z_i = a[2] + t * (b[2] - a[2])
            z_j = c[2] + u * (e[2] - c[2])
            if abs(z_i - z_j) < height_margin:
                raise DegeneracyError("height (oracle)", reason="height")
            if z_i > z_j:
                over_dir = (vix / li, viy / li)
                under_dir = (vjx / lj, vjy / lj)
                over_arc, under_arc = arc_i, arc_j
            else:
                over_dir = (vjx / lj, vjy / lj)
                under_dir = (vix / li, viy / li)
                over_arc, under_arc = arc_j, arc_i
            cz = over_dir[0] * under_dir[1] - over_dir[1] * under_dir[0]
            if abs(cz) < min_sin:
                raise DegeneracyError("angle (oracle)", reason="angle")
            sign = 1 if cz > 0 else -1
            found.append((over_arc, under_arc, sign))

    flat = []
    for cid, (over_arc, under_arc, sign) in enumerate(found, start=1):
        flat.append((over_arc, cid, OVER, sign))
        flat.append((under_arc, cid, UNDER, sign))
    # insertion sort by arc position, deliberately not reusing list.sort
    for k in range(1, len(flat)):
        item = flat[k]
        m = k - 1
        while m >= 0 and flat[m][0] > item[0]:
            flat[m + 1] = flat[m]
            m -= 1
        flat[m + 1] = item
    return canonicalize(
        TopologicalState(tuple(CrossingEncounter(cid, v, s) for _, cid, v, s in flat))
    )


def _scalar_seg_dist(a, b, c, e) -> float:
    def pt_seg(p, s0, s1):
        vx, vy = s1[0] - s0[0], s1[1] - s0[1]
        wx, wy = p[0] - s0[0], p[1] - s0[1]
        vv = vx * vx + vy * vy
        t = 0.0 if vv == 0 else min(max((wx * vx + wy * vy) / vv, 0.0), 1.0)
        dx = p[0] - (s0[0] + t * vx)
        dy = p[1] - (s0[1] + t * vy)
        return math.hypot(dx, dy)

    return min(
        pt_seg(a, c, e), pt_seg(b, c, e), pt_seg(c, a, b), pt_seg(e, a, b)
    )
