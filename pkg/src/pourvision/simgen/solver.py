"""Position-based 2-D particle solver for the pouring scenes.

Fixed timestep (1/fps with 4 substeps): gravity, restitution-0 collision
with solid segments, and pairwise separation for near-incompressibility.
Particle count is constant over the whole trajectory.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .scenario import Scenario, SceneGeometry, build_geometry, tilt_at, validate_profile

SUBSTEPS = 4
GRAVITY = 400.0           # cells / s^2
MAX_SPEED = 45.0          # cells / s
DAMPING = 0.995
PAIR_DIST = 0.42          # rest separation between particle centers
CONTACT_RADIUS = 0.45     # particle-to-wall rest distance
CONTACT_TOLERANCE = 0.25  # max allowed wall penetration
RELAX = 0.3
ITERATIONS = 5
CONTACT_FRICTION = 0.85
SLEEP_EPS = 0.025         # sub-epsilon movers snap back and rest


@dataclass
class SimState:
    """One frame of the trajectory."""

    positions: np.ndarray   # (n, 2) world (x, y)
    velocities: np.ndarray  # (n, 2) cells / s
    tilt: float
    frame_index: int


@dataclass
class PourTrajectory:
    scenario: Scenario
    geometry: SceneGeometry
    states: list[SimState]

    def __len__(self) -> int:
        return len(self.states)


def _point_in_polygon(points: np.ndarray, poly: np.ndarray) -> np.ndarray:
    """Even-odd rule, vectorized over points (m, 2)."""
    x, y = points[:, 0], points[:, 1]
    inside = np.zeros(len(points), dtype=bool)
    k = len(poly)
    for e in range(k):
        x1, y1 = poly[e]
        x2, y2 = poly[(e + 1) % k]
        crosses = (y1 > y) != (y2 > y)
        if not np.any(crosses):
            continue
        xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1 + 1e-300)
        inside ^= crosses & (x < xi)
    return inside


def _segment_distances(points: np.ndarray, segs: np.ndarray) -> np.ndarray:
    """(n, m) distances from points to segments."""
    a = segs[:, 0]
    d = segs[:, 1] - segs[:, 0]
    len2 = np.maximum((d * d).sum(axis=1), 1e-12)
    rel = points[:, None, :] - a[None, :, :]
    t = np.clip((rel * d[None, :, :]).sum(axis=2) / len2[None, :], 0.0, 1.0)
    closest = a[None, :, :] + t[:, :, None] * d[None, :, :]
    diff = points[:, None, :] - closest
    return np.sqrt((diff * diff).sum(axis=2))


def _seed_particles(geometry: SceneGeometry, scenario: Scenario,
                    rng: np.random.Generator) -> np.ndarray:
    """Grid-fill the upright cup interior bottom-up to fill_fraction."""
    if not scenario.has_liquid or scenario.fill_fraction <= 0:
        return np.zeros((0, 2), dtype=np.float64)
    poly = geometry.cup_polygon(0.0)
    lo = poly.min(axis=0) + 0.3
    hi = poly.max(axis=0) - 0.3
    xs = np.arange(lo[0], hi[0] + 1e-9, PAIR_DIST)
    ys = np.arange(lo[1], hi[1] + 1e-9, PAIR_DIST)
    gx, gy = np.meshgrid(xs, ys)
    pts = np.stack([gx.ravel(), gy.ravel()], axis=1)
    inside = _point_in_polygon(pts, poly)
    segs = geometry.collision_segments(0.0)
    clear = _segment_distances(pts, segs).min(axis=1) >= CONTACT_RADIUS - 0.05
    pts = pts[inside & clear]
    # bottom rows first (larger y is lower on screen)
    order = np.lexsort((pts[:, 0], -pts[:, 1]))
    pts = pts[order]
    count = int(np.floor(scenario.fill_fraction * len(pts)))
    pts = pts[:count].copy()
    pts += rng.uniform(-0.03, 0.03, size=pts.shape)
    return pts


class _Solids:
    """Precomputed segment frame for vectorized projection."""

    def __init__(self, segs: np.ndarray):
        self.a = segs[:, 0]                       # (m, 2)
        self.d = segs[:, 1] - segs[:, 0]          # (m, 2)
        self.len2 = np.maximum((self.d * self.d).sum(axis=1), 1e-12)
        inv_len = 1.0 / np.sqrt(self.len2)
        self.nrm = np.stack([-self.d[:, 1], self.d[:, 0]], axis=1) * inv_len[:, None]

    def project(self, p: np.ndarray, p_ref: np.ndarray) -> np.ndarray:
        """Resolve the deepest wall violation per particle, in place."""
        rel = p[:, None, :] - self.a[None, :, :]                       # (n, m, 2)
        t = (rel * self.d[None, :, :]).sum(axis=2) / self.len2[None, :]
        interior = (t > 0.0) & (t < 1.0)
        signed = (rel * self.nrm[None, :, :]).sum(axis=2)              # (n, m)
        side_ref = np.where(
            ((p_ref[:, None, :] - self.a[None, :, :]) * self.nrm[None, :, :])
            .sum(axis=2) >= 0.0, 1.0, -1.0)
        depth_int = np.where(interior, CONTACT_RADIUS - side_ref * signed, -np.inf)

        tc = np.clip(t, 0.0, 1.0)
        closest = self.a[None, :, :] + tc[:, :, None] * self.d[None, :, :]
        diff = p[:, None, :] - closest
        dist = np.sqrt((diff * diff).sum(axis=2))
        depth_cap = np.where(~interior, CONTACT_RADIUS - dist, -np.inf)

        depth = np.maximum(depth_int, depth_cap)
        worst = depth.argmax(axis=1)
        idx = np.arange(len(p))
        violated = depth[idx, worst] > 0.0
        if not violated.any():
            return violated
        pi = idx[violated]
        si = worst[violated]
        use_int = interior[pi, si]
        # interior: move to side_ref * CONTACT_RADIUS along the segment normal
        ii, jj = pi[use_int], si[use_int]
        delta = (side_ref[ii, jj] * CONTACT_RADIUS - signed[ii, jj])
        p[ii] += delta[:, None] * self.nrm[jj]
        # caps: radial push from the endpoint
        ii, jj = pi[~use_int], si[~use_int]
        if len(ii):
            dvec = diff[ii, jj]
            dlen = np.maximum(dist[ii, jj], 1e-9)[:, None]
            p[ii] = closest[ii, jj] + dvec / dlen * CONTACT_RADIUS
        return violated


def _neighbor_pairs(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs closer than ~2x the rest distance (refreshed per substep)."""
    n = len(p)
    diff = p[:, None, :] - p[None, :, :]
    dist2 = (diff * diff).sum(axis=2)
    ii, jj = np.triu_indices(n, k=1)
    near = dist2[ii, jj] < (2.0 * PAIR_DIST) ** 2
    return ii[near], jj[near]


def _separate_pairs(p: np.ndarray, i: np.ndarray, j: np.ndarray) -> None:
    if len(i) == 0:
        return
    d = p[i] - p[j]
    dist = np.sqrt((d * d).sum(axis=1))
    close = dist < PAIR_DIST
    if not close.any():
        return
    i, j, d, dist = i[close], j[close], d[close], dist[close]
    dist = np.maximum(dist, 1e-9)
    push = (RELAX * 0.5 * (PAIR_DIST - dist) / dist)[:, None] * d
    n = len(p)
    p[:, 0] += np.bincount(i, weights=push[:, 0], minlength=n)
    p[:, 0] -= np.bincount(j, weights=push[:, 0], minlength=n)
    p[:, 1] += np.bincount(i, weights=push[:, 1], minlength=n)
    p[:, 1] -= np.bincount(j, weights=push[:, 1], minlength=n)


def simulate_pour(scenario: Scenario, height: int = 48, width: int = 64,
                  tilt_fn: Callable[[float], float] | None = None) -> PourTrajectory:
    """Run the fixed-timestep particle simulation for one scenario.

    tilt_fn overrides the scenario pour profile (used by settling tests).
    """
    if tilt_fn is None:
        validate_profile(scenario)
        tilt_fn = lambda f: tilt_at(scenario, f)  # noqa: E731
    geometry = build_geometry(scenario, height, width)
    rng = np.random.default_rng(scenario.seed)
    p = _seed_particles(geometry, scenario, rng)
    v = np.zeros_like(p)
    dt = 1.0 / (scenario.fps * SUBSTEPS)
    states = []
    for frame in range(scenario.duration_frames):
        for sub in range(SUBSTEPS):
            if not len(p):
                continue
            tilt = tilt_fn(frame + sub / SUBSTEPS)
            solids = _Solids(geometry.collision_segments(tilt))
            v[:, 1] += GRAVITY * dt
            v *= DAMPING
            speed = np.sqrt((v * v).sum(axis=1))
            fast = speed > MAX_SPEED
            if fast.any():
                v[fast] *= (MAX_SPEED / speed[fast])[:, None]
            p_old = p.copy()
            p = p + v * dt
            pi, pj = _neighbor_pairs(p)
            contact = np.zeros(len(p), dtype=bool)
            for _ in range(ITERATIONS):
                _separate_pairs(p, pi, pj)
                contact |= solids.project(p, p_old)
            delta = p - p_old
            asleep = np.sqrt((delta * delta).sum(axis=1)) < SLEEP_EPS
            p[asleep] = p_old[asleep]
            v = (p - p_old) / dt
            v[asleep] = 0.0
            v[contact & ~asleep] *= CONTACT_FRICTION
        states.append(SimState(positions=p.copy(), velocities=v.copy(),
                               tilt=tilt_fn(float(frame)), frame_index=frame))
    return PourTrajectory(scenario=scenario, geometry=geometry, states=states)
