"""Deterministic position-based rope dynamics on a table plane.

The rope is a chain of point masses joined by distance constraints, solved
with a Gauss-Seidel projection loop per substep. Table contact uses a
Coulomb-style position friction, self-collision pushes capsule pairs apart
so strands cannot tunnel through each other, and a grasped node is pinned
rigidly to the gripper. Everything is float64 and free of random numbers,
so a (config, motion, params) triple always reproduces the same trajectory.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .errors import DynamicsError, SettleTimeoutError
from .geometry import TABLE_Z, RopeConfig
from .splines import MotionSpline, spline_waypoints

BROAD_MARGIN = 0.012


@dataclass(frozen=True)
class SimParams:
    """Integrator and material constants.

    stretch_stiffness and bend_stiffness are dimensionless projection
    fractions in (0, 1]; dt/substeps must stay small enough that a strand
    cannot advance more than the rope radius per substep, which is what
    keeps existing crossings from tunneling.
    """

    n: int = 64
    rest_len: float = 0.01
    stretch_stiffness: float = 1.0
    bend_stiffness: float = 0.1
    damping: float = 4.0
    gravity: float = 9.81
    friction: float = 0.4
    dt: float = 0.002
    substeps: int = 4
    collision_iters: int = 8
    seed: int = 0
    table_z: float = TABLE_Z
    rope_radius: float = 0.004
    max_grip_step: float = 0.004
    settle_vel_eps: float = 0.005
    settle_max_steps: int = 4000

    def to_json_obj(self) -> dict:
        return {
            "n": self.n,
            "rest_len": self.rest_len,
            "stretch_stiffness": self.stretch_stiffness,
            "bend_stiffness": self.bend_stiffness,
            "damping": self.damping,
            "gravity": self.gravity,
            "friction": self.friction,
            "dt": self.dt,
            "substeps": self.substeps,
            "collision_iters": self.collision_iters,
            "seed": self.seed,
            "table_z": self.table_z,
            "rope_radius": self.rope_radius,
            "max_grip_step": self.max_grip_step,
            "settle_vel_eps": self.settle_vel_eps,
            "settle_max_steps": self.settle_max_steps,
        }

    @staticmethod
    def from_json_obj(obj: dict) -> "SimParams":
        return SimParams(**obj)

    def scalar_tuple(self) -> tuple:
        """Arguments shared by every kernel call, in kernel order."""
        return (
            self.rest_len,
            self.stretch_stiffness,
            self.bend_stiffness,
            self.damping,
            self.gravity,
            self.friction,
            self.dt,
            self.substeps,
            self.collision_iters,
            self.table_z,
        )


@njit(cache=True)
def _seg_closest(ax, ay, az, bx, by, bz, cx, cy, cz, dx, dy, dz):
    """Closest points between segments ab and cd; returns (s, t, dist²)."""
    d1x = bx - ax
    d1y = by - ay
    d1z = bz - az
    d2x = dx - cx
    d2y = dy - cy
    d2z = dz - cz
    rx = ax - cx
    ry = ay - cy
    rz = az - cz
    a = d1x * d1x + d1y * d1y + d1z * d1z
    e = d2x * d2x + d2y * d2y + d2z * d2z
    f = d2x * rx + d2y * ry + d2z * rz
    eps = 1e-12
    if a <= eps and e <= eps:
        s = 0.0
        t = 0.0
    elif a <= eps:
        s = 0.0
        t = min(max(f / e, 0.0), 1.0)
    else:
        c = d1x * rx + d1y * ry + d1z * rz
        if e <= eps:
            t = 0.0
            s = min(max(-c / a, 0.0), 1.0)
        else:
            b = d1x * d2x + d1y * d2y + d1z * d2z
            denom = a * e - b * b
            if denom > eps:
                s = min(max((b * f - c * e) / denom, 0.0), 1.0)
            else:
                s = 0.0
            t = (b * s + f) / e
            if t < 0.0:
                t = 0.0
                s = min(max(-c / a, 0.0), 1.0)
            elif t > 1.0:
                t = 1.0
                s = min(max((b - c) / a, 0.0), 1.0)
    gx = rx + s * d1x - t * d2x
    gy = ry + s * d1y - t * d2y
    gz = rz + s * d1z - t * d2z
    return s, t, gx * gx + gy * gy + gz * gz


@njit(cache=True)
def _collect_pairs(pos, radius, margin, pairs, boxes):
    """AABB broad phase over non-adjacent segment pairs; writes into pairs, returns count."""
    nseg = pos.shape[0] - 1
    pad = 2.0 * radius + margin
    for i in range(nseg):
        boxes[i, 0] = min(pos[i, 0], pos[i + 1, 0])
        boxes[i, 1] = max(pos[i, 0], pos[i + 1, 0])
        boxes[i, 2] = min(pos[i, 1], pos[i + 1, 1])
        boxes[i, 3] = max(pos[i, 1], pos[i + 1, 1])
        boxes[i, 4] = min(pos[i, 2], pos[i + 1, 2])
        boxes[i, 5] = max(pos[i, 2], pos[i + 1, 2])
    count = 0
    for i in range(nseg):
        for j in range(i + 2, nseg):
            if boxes[j, 1] < boxes[i, 0] - pad or boxes[j, 0] > boxes[i, 1] + pad:
                continue
            if boxes[j, 3] < boxes[i, 2] - pad or boxes[j, 2] > boxes[i, 3] + pad:
                continue
            if boxes[j, 5] < boxes[i, 4] - pad or boxes[j, 4] > boxes[i, 5] + pad:
                continue
            pairs[count, 0] = i
            pairs[count, 1] = j
            count += 1
    return count


@njit(cache=True)
def _advance(
    pos,
    vel,
    prev,
    steps,
    grasp_idx,
    gfx,
    gfy,
    gfz,
    gtx,
    gty,
    gtz,
    rest_len,
    stretch_k,
    bend_k,
    damping,
    gravity,
    friction,
    dt,
    substeps,
    collision_iters,
    table_z,
    radius,
    pairs,
    boxes,
):
    """Advance `steps` dt-steps in place; gripper target lerps (gfx..) → (gtx..)."""
    n = pos.shape[0]
    h = dt / substeps
    damp = max(0.0, 1.0 - damping * h)
    bend_rest = 2.0 * rest_len
    contact_z = table_z + radius
    min_dist = 2.0 * radius
    inv_h = 1.0 / h

    gx = 0.0
    gy = 0.0
    gz = 0.0
    for step in range(steps):
        # broad phase once per dt step; margin covers worst-case motion within the step
        npairs = _collect_pairs(pos, radius, BROAD_MARGIN, pairs, boxes)
        if grasp_idx >= 0:
            alpha = (step + 1.0) / steps
            gx = gfx + alpha * (gtx - gfx)
            gy = gfy + alpha * (gty - gfy)
            gz = gfz + alpha * (gtz - gfz)

        for _ in range(substeps):
            for i in range(n):
                prev[i, 0] = pos[i, 0]
                prev[i, 1] = pos[i, 1]
                prev[i, 2] = pos[i, 2]
                vel[i, 2] -= gravity * h
                vel[i, 0] *= damp
                vel[i, 1] *= damp
                vel[i, 2] *= damp
                pos[i, 0] += vel[i, 0] * h
                pos[i, 1] += vel[i, 1] * h
                pos[i, 2] += vel[i, 2] * h

            if grasp_idx >= 0:
                pos[grasp_idx, 0] = gx
                pos[grasp_idx, 1] = gy
                pos[grasp_idx, 2] = gz

            # stretch: two alternating-parity sweeps keep the solve order-symmetric
            for _rep in range(2):
                for parity in range(2):
                    for i in range(parity, n - 1, 2):
                        dxx = pos[i + 1, 0] - pos[i, 0]
                        dyy = pos[i + 1, 1] - pos[i, 1]
                        dzz = pos[i + 1, 2] - pos[i, 2]
                        d = math.sqrt(dxx * dxx + dyy * dyy + dzz * dzz)
                        if d < 1e-12:
                            continue
                        corr = stretch_k * 0.5 * (d - rest_len) / d
                        w0 = 0.0 if i == grasp_idx else 1.0
                        w1 = 0.0 if i + 1 == grasp_idx else 1.0
                        ws = w0 + w1
                        if ws == 0.0:
                            continue
                        c0 = 2.0 * corr * w0 / ws
                        c1 = 2.0 * corr * w1 / ws
                        pos[i, 0] += c0 * dxx
                        pos[i, 1] += c0 * dyy
                        pos[i, 2] += c0 * dzz
                        pos[i + 1, 0] -= c1 * dxx
                        pos[i + 1, 1] -= c1 * dyy
                        pos[i + 1, 2] -= c1 * dzz

            # bend: soft distance constraint between second neighbors
            for i in range(n - 2):
                dxx = pos[i + 2, 0] - pos[i, 0]
                dyy = pos[i + 2, 1] - pos[i, 1]
                dzz = pos[i + 2, 2] - pos[i, 2]
                d = math.sqrt(dxx * dxx + dyy * dyy + dzz * dzz)
                if d < 1e-12 or d >= bend_rest:
                    continue
                corr = bend_k * 0.5 * (d - bend_rest) / d
                w0 = 0.0 if i == grasp_idx else 1.0
                w1 = 0.0 if i + 2 == grasp_idx else 1.0
                ws = w0 + w1
                if ws == 0.0:
                    continue
                c0 = 2.0 * corr * w0 / ws
                c1 = 2.0 * corr * w1 / ws
                pos[i, 0] += c0 * dxx
                pos[i, 1] += c0 * dyy
                pos[i, 2] += c0 * dzz
                pos[i + 2, 0] -= c1 * dxx
                pos[i + 2, 1] -= c1 * dyy
                pos[i + 2, 2] -= c1 * dzz

            # table contact with position-level Coulomb friction
            for i in range(n):
                if i == grasp_idx:
                    continue
                if pos[i, 2] < contact_z:
                    dn = contact_z - pos[i, 2]
                    pos[i, 2] = contact_z
                    tx = pos[i, 0] - prev[i, 0]
                    ty = pos[i, 1] - prev[i, 1]
                    tlen = math.sqrt(tx * tx + ty * ty)
                    if tlen > 1e-12:
                        if tlen <= friction * dn:
                            scale = 0.0
                        else:
                            scale = 1.0 - friction * dn / tlen
                        pos[i, 0] = prev[i, 0] + tx * scale
                        pos[i, 1] = prev[i, 1] + ty * scale

            # self-collision: push apart any capsule pair closer than two radii
            for _cit in range(collision_iters):
                any_fix = False
                for p in range(npairs):
                    i = pairs[p, 0]
                    j = pairs[p, 1]
                    s, t, dist2 = _seg_closest(
                        pos[i, 0], pos[i, 1], pos[i, 2],
                        pos[i + 1, 0], pos[i + 1, 1], pos[i + 1, 2],
                        pos[j, 0], pos[j, 1], pos[j, 2],
                        pos[j + 1, 0], pos[j + 1, 1], pos[j + 1, 2],
                    )
                    if dist2 >= min_dist * min_dist:
                        continue
                    dist = math.sqrt(dist2)
                    cx = (1.0 - s) * pos[i, 0] + s * pos[i + 1, 0] - (1.0 - t) * pos[j, 0] - t * pos[j + 1, 0]
                    cy = (1.0 - s) * pos[i, 1] + s * pos[i + 1, 1] - (1.0 - t) * pos[j, 1] - t * pos[j + 1, 1]
                    cz = (1.0 - s) * pos[i, 2] + s * pos[i + 1, 2] - (1.0 - t) * pos[j, 2] - t * pos[j + 1, 2]
                    if dist > 1e-9:
                        nx, ny, nz = cx / dist, cy / dist, cz / dist
                    else:
                        nx, ny, nz = 0.0, 0.0, 1.0
                    # move the two closest points apart along n, splitting the
                    # violation between the segments; a pinned endpoint takes none
                    push = 0.5 * (min_dist - dist)
                    bi0 = 1.0 - s
                    bi1 = s
                    bj0 = 1.0 - t
                    bj1 = t
                    mi0 = 0.0 if i == grasp_idx else 1.0
                    mi1 = 0.0 if i + 1 == grasp_idx else 1.0
                    mj0 = 0.0 if j == grasp_idx else 1.0
                    mj1 = 0.0 if j + 1 == grasp_idx else 1.0
                    wi = mi0 * bi0 * bi0 + mi1 * bi1 * bi1
                    wj = mj0 * bj0 * bj0 + mj1 * bj1 * bj1
                    if wi < 1e-9 and wj < 1e-9:
                        continue
                    pi = push
                    pj = push
                    if wi < 1e-9:
                        pi = 0.0
                        pj = 2.0 * push
                    elif wj < 1e-9:
                        pj = 0.0
                        pi = 2.0 * push
                    if pi > 0.0:
                        pos[i, 0] += pi * nx * mi0 * bi0 / wi
                        pos[i, 1] += pi * ny * mi0 * bi0 / wi
                        pos[i, 2] += pi * nz * mi0 * bi0 / wi
                        pos[i + 1, 0] += pi * nx * mi1 * bi1 / wi
                        pos[i + 1, 1] += pi * ny * mi1 * bi1 / wi
                        pos[i + 1, 2] += pi * nz * mi1 * bi1 / wi
                    if pj > 0.0:
                        pos[j, 0] -= pj * nx * mj0 * bj0 / wj
                        pos[j, 1] -= pj * ny * mj0 * bj0 / wj
                        pos[j, 2] -= pj * nz * mj0 * bj0 / wj
                        pos[j + 1, 0] -= pj * nx * mj1 * bj1 / wj
                        pos[j + 1, 1] -= pj * ny * mj1 * bj1 / wj
                        pos[j + 1, 2] -= pj * nz * mj1 * bj1 / wj
                    any_fix = True
                if not any_fix:
                    break

            if grasp_idx >= 0:
                pos[grasp_idx, 0] = gx
                pos[grasp_idx, 1] = gy
                pos[grasp_idx, 2] = gz

            for i in range(n):
                vel[i, 0] = (pos[i, 0] - prev[i, 0]) * inv_h
                vel[i, 1] = (pos[i, 1] - prev[i, 1]) * inv_h
                vel[i, 2] = (pos[i, 2] - prev[i, 2]) * inv_h


@njit(cache=True)
def _state_ok(pos):
    n = pos.shape[0]
    for i in range(n):
        for k in range(3):
            v = pos[i, k]
            if not math.isfinite(v) or abs(v) > 5.0:
                return False
    return True


@njit(cache=True)
def _max_abs_vel(vel):
    n = vel.shape[0]
    m = 0.0
    for i in range(n):
        for k in range(3):
            a = abs(vel[i, k])
            if a > m:
                m = a
    return m


@njit(cache=True)
def _settle_lane(
    pos,
    vel,
    prev,
    rest_len,
    stretch_k,
    bend_k,
    damping,
    gravity,
    friction,
    dt,
    substeps,
    collision_iters,
    table_z,
    radius,
    settle_vel_eps,
    settle_max_steps,
    pairs,
    boxes,
):
    """Run to rest with nothing grasped; returns steps taken, or -1 on timeout, -2 on blow-up."""
    total = 0
    while total < settle_max_steps:
        _advance(
            pos, vel, prev, 25, -1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            rest_len, stretch_k, bend_k, damping, gravity, friction,
            dt, substeps, collision_iters, table_z, radius, pairs, boxes,
        )
        total += 25
        if not _state_ok(pos):
            return -2
        if _max_abs_vel(vel) < settle_vel_eps:
            return total
    return -1


@njit(cache=True)
def _drag_lane(
    pos,
    vel,
    prev,
    wps,
    grasp_idx,
    max_grip_step,
    rest_len,
    stretch_k,
    bend_k,
    damping,
    gravity,
    friction,
    dt,
    substeps,
    collision_iters,
    table_z,
    radius,
    pairs,
    boxes,
):
    """Drag the grasped node through waypoint rows of wps; returns 0, or -2 on blow-up."""
    for w in range(wps.shape[0]):
        cx = pos[grasp_idx, 0]
        cy = pos[grasp_idx, 1]
        cz = pos[grasp_idx, 2]
        tx = wps[w, 0]
        ty = wps[w, 1]
        tz = wps[w, 2]
        ex = tx - cx
        ey = ty - cy
        ez = tz - cz
        hop = math.sqrt(ex * ex + ey * ey + ez * ez)
        steps = max(1, int(math.ceil(hop / max_grip_step)))
        _advance(
            pos, vel, prev, steps, grasp_idx, cx, cy, cz, tx, ty, tz,
            rest_len, stretch_k, bend_k, damping, gravity, friction,
            dt, substeps, collision_iters, table_z, radius, pairs, boxes,
        )
        if not _state_ok(pos):
            return -2
    return 0


@njit(cache=True)
def _rollout_batch(
    pos_b,
    vel_b,
    wps_b,
    grasp_b,
    status_b,
    max_grip_step,
    rest_len,
    stretch_k,
    bend_k,
    damping,
    gravity,
    friction,
    dt,
    substeps,
    collision_iters,
    table_z,
    radius,
    settle_vel_eps,
    settle_max_steps,
):
    """Run B full rollouts (drag through waypoints, release, settle) lane by lane.

    status_b[i]: 0 ok, -1 settle timeout, -2 blow-up. pos_b/vel_b end settled.
    """
    n = pos_b.shape[1]
    nseg = n - 1
    pairs = np.zeros((nseg * (nseg - 1) // 2, 2), dtype=np.int64)
    boxes = np.empty((nseg, 6))
    prev = np.empty((n, 3))
    for lane in range(pos_b.shape[0]):
        st = _drag_lane(
            pos_b[lane], vel_b[lane], prev, wps_b[lane], grasp_b[lane],
            max_grip_step, rest_len, stretch_k, bend_k, damping, gravity,
            friction, dt, substeps, collision_iters, table_z, radius, pairs, boxes,
        )
        if st != 0:
            status_b[lane] = st
            continue
        r = _settle_lane(
            pos_b[lane], vel_b[lane], prev, rest_len, stretch_k, bend_k,
            damping, gravity, friction, dt, substeps, collision_iters,
            table_z, radius, settle_vel_eps, settle_max_steps, pairs, boxes,
        )
        status_b[lane] = 0 if r > 0 else r


class RopeSim:
    """Mutable simulator state for one rope; single-threaded during a rollout."""

    def __init__(self, config: RopeConfig, params: SimParams):
        self.params = params
        self.pos = config.points.copy()
        self.vel = np.zeros_like(self.pos)
        self.radius = config.rope_radius
        self.grasp_idx = -1
        nseg = self.pos.shape[0] - 1
        self._pairs = np.zeros((nseg * (nseg - 1) // 2, 2), dtype=np.int64)
        self._boxes = np.empty((nseg, 6))
        self._prev = np.empty_like(self.pos)

    def config(self) -> RopeConfig:
        return RopeConfig(self.pos, self.radius)

    def gripper_pos(self) -> np.ndarray | None:
        if self.grasp_idx < 0:
            return None
        return self.pos[self.grasp_idx].copy()

    def grasp(self, node_idx: int) -> None:
        if not 0 <= node_idx < self.pos.shape[0]:
            raise DynamicsError(f"grasp node {node_idx} out of range")
        self.grasp_idx = node_idx

    def release(self) -> None:
        self.grasp_idx = -1

    def _run(self, steps: int, grip_from, grip_to) -> None:
        p = self.params
        _advance(
            self.pos,
            self.vel,
            self._prev,
            steps,
            self.grasp_idx,
            float(grip_from[0]),
            float(grip_from[1]),
            float(grip_from[2]),
            float(grip_to[0]),
            float(grip_to[1]),
            float(grip_to[2]),
            p.rest_len,
            p.stretch_stiffness,
            p.bend_stiffness,
            p.damping,
            p.gravity,
            p.friction,
            p.dt,
            p.substeps,
            p.collision_iters,
            p.table_z,
            self.radius,
            self._pairs,
            self._boxes,
        )
        if not np.isfinite(self.pos).all() or np.abs(self.pos).max() > 5.0:
            raise DynamicsError("simulation blew up")

    def step(self, gripper_target=None) -> None:
        """Advance one dt; if a node is grasped, move it toward gripper_target."""
        if self.grasp_idx >= 0:
            cur = self.pos[self.grasp_idx]
            tgt = cur if gripper_target is None else np.asarray(gripper_target, dtype=np.float64)
            self._run(1, cur.copy(), tgt)
        else:
            zero = np.zeros(3)
            self._run(1, zero, zero)

    def move_gripper_to(self, target) -> None:
        """Drag the grasped node to target over enough dt steps to stay under max_grip_step."""
        if self.grasp_idx < 0:
            raise DynamicsError("no node grasped")
        cur = self.pos[self.grasp_idx].copy()
        tgt = np.asarray(target, dtype=np.float64)
        ex = float(tgt[0]) - float(cur[0])
        ey = float(tgt[1]) - float(cur[1])
        ez = float(tgt[2]) - float(cur[2])
        hop = math.sqrt(ex * ex + ey * ey + ez * ez)
        steps = max(1, int(math.ceil(hop / self.params.max_grip_step)))
        self._run(steps, cur, tgt)

    def settle(self) -> int:
        """Step without motion until the rope is at rest; returns steps taken."""
        p = self.params
        chunk = 25
        total = 0
        zero = np.zeros(3)
        while total < p.settle_max_steps:
            self._run(chunk, zero, zero)
            total += chunk
            if np.abs(self.vel).max() < p.settle_vel_eps:
                return total
        raise SettleTimeoutError(f"rope not at rest after {total} steps")


def settle(config: RopeConfig, params: SimParams) -> RopeConfig:
    """Run the rope to rest with nothing grasped."""
    sim = RopeSim(config, params)
    sim.settle()
    return sim.config()


def rollout(
    config: RopeConfig,
    spline: MotionSpline,
    params: SimParams,
    m: int = 40,
) -> list[RopeConfig]:
    """Execute a motion spline: frames = start, one per waypoint, then the settled end.

    The node nearest to grasp_u is pinned and dragged through the spline's
    waypoints (the gripper path starts from that node's actual position, so
    the pin never jumps), released at the last waypoint, and the rope is
    settled. Raises DynamicsError on blow-up, SettleTimeoutError if the
    final settle does not converge.
    """
    if not 0.0 <= spline.grasp_u <= 1.0:
        raise DynamicsError(f"grasp_u {spline.grasp_u} outside [0, 1]")
    sim = RopeSim(config, params)
    frames = [sim.config()]
    sim.grasp(config.nearest_node_to_u(spline.grasp_u))
    for wp in spline_waypoints(spline, config, m, params.table_z):
        sim.move_gripper_to(wp)
        frames.append(sim.config())
    sim.release()
    sim.settle()
    frames.append(sim.config())
    return frames


def rollout_final(
    config: RopeConfig,
    spline: MotionSpline,
    params: SimParams,
    m: int = 40,
) -> RopeConfig:
    """Settled end config of rollout(), skipping intermediate frame copies."""
    out = rollout_finals([config], [spline], params, m)
    if out[0] is None:
        raise DynamicsError("rollout failed")
    return out[0]


def rollout_finals(
    configs: list[RopeConfig] | RopeConfig,
    splines: list[MotionSpline],
    params: SimParams,
    m: int = 40,
) -> list[RopeConfig | None]:
    """Batch of full rollouts; one settled end config per spline, None for a failed lane.

    configs is either one start shared by every spline or a list paired with
    splines. Results are bitwise identical to running rollout() per pair.
    """
    if isinstance(configs, RopeConfig):
        configs = [configs] * len(splines)
    if len(configs) != len(splines):
        raise DynamicsError("configs and splines length mismatch")
    if not splines:
        return []
    n = configs[0].points.shape[0]
    b = len(splines)
    pos_b = np.empty((b, n, 3))
    vel_b = np.zeros((b, n, 3))
    wps_b = np.empty((b, m, 3))
    grasp_b = np.empty(b, dtype=np.int64)
    status_b = np.zeros(b, dtype=np.int64)
    radius = configs[0].rope_radius
    for k, (cfg, sp) in enumerate(zip(configs, splines)):
        if not 0.0 <= sp.grasp_u <= 1.0:
            raise DynamicsError(f"grasp_u {sp.grasp_u} outside [0, 1]")
        if cfg.points.shape[0] != n:
            raise DynamicsError("all configs in a batch need the same node count")
        pos_b[k] = cfg.points
        wps_b[k] = spline_waypoints(sp, cfg, m, params.table_z)
        grasp_b[k] = cfg.nearest_node_to_u(sp.grasp_u)
    _rollout_batch(
        pos_b,
        vel_b,
        wps_b,
        grasp_b,
        status_b,
        params.max_grip_step,
        params.rest_len,
        params.stretch_stiffness,
        params.bend_stiffness,
        params.damping,
        params.gravity,
        params.friction,
        params.dt,
        params.substeps,
        params.collision_iters,
        params.table_z,
        radius,
        params.settle_vel_eps,
        params.settle_max_steps,
    )
    out: list[RopeConfig | None] = []
    for k in range(b):
        out.append(RopeConfig(pos_b[k], radius) if status_b[k] == 0 else None)
    return out


def trajectory_to_jsonl(frames: list[RopeConfig]) -> str:
    """One frame per line, each a RopeConfig JSON object."""
    import json

    return "\n".join(json.dumps(f.to_json_obj(), separators=(",", ":")) for f in frames) + "\n"


def trajectory_from_jsonl(text: str) -> list[RopeConfig]:
    import json

    return [RopeConfig.from_json_obj(json.loads(line)) for line in text.splitlines() if line.strip()]
