"""Seeded random motions and settled configurations.

Used three ways: as the uniform baseline motion sampler that learned policies
are measured against, to scatter start configurations for demo recording,
and to mass-produce settled ropes for extraction stress tests. Everything is
driven by an explicit seed or Generator, so outputs are reproducible.
"""

from __future__ import annotations

import numpy as np

from .errors import DynamicsError, SettleTimeoutError
from .geometry import RopeConfig, straight_rope
from .simulation import SimParams, rollout_finals
from .splines import MotionSpline

# mid-z stays below this so motions look like table work, not crane lifts
MAX_LIFT = 0.12


def random_spline(rng: np.random.Generator, config: RopeConfig) -> MotionSpline:
    """Uniform motion over the config's neighborhood: any grasp, bounded carry."""
    pts = config.points
    lo = pts[:, :2].min(axis=0) - 0.10
    hi = pts[:, :2].max(axis=0) + 0.10
    u = rng.uniform(0.0, 1.0)
    mid = (
        rng.uniform(lo[0], hi[0]),
        rng.uniform(lo[1], hi[1]),
        rng.uniform(0.02, MAX_LIFT),
    )
    release = (rng.uniform(lo[0], hi[0]), rng.uniform(lo[1], hi[1]))
    return MotionSpline(u, mid, release)


def seeded_settled_config(
    seed: int,
    params: SimParams,
    n_motions: int = 2,
    base: RopeConfig | None = None,
) -> RopeConfig:
    """Deterministic tangled-but-settled rope: seeded random motions from a straight rope.

    Motions that blow up or stall are skipped, so every seed yields a config.
    """
    rng = np.random.default_rng(seed)
    cfg = base if base is not None else straight_rope(n=params.n, rest_len=params.rest_len)
    for _ in range(n_motions):
        sp = random_spline(rng, cfg)
        try:
            out = rollout_finals(cfg, [sp], params)[0]
        except (DynamicsError, SettleTimeoutError):
            continue
        if out is not None:
            cfg = out
    return cfg


def random_settled_configs(
    n: int,
    seed: int,
    params: SimParams,
    n_motions: int = 2,
) -> list[RopeConfig]:
    """n settled configs from consecutive sub-seeds of `seed`."""
    return [seeded_settled_config(seed + k, params, n_motions) for k in range(n)]
