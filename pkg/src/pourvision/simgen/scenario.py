"""Pouring-scene descriptions: container profiles, pour profiles, sampling."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

import numpy as np

from ..nn.tensor import ContractViolation, require

CUP_SHAPES = ("straight", "tapered", "narrow-neck")
BOWL_SHAPES = ("wide", "shallow", "tall")
POUR_PROFILES = ("slow", "fast", "partial")
FILL_FRACTIONS = (0.3, 0.6, 0.9)

MAX_TILT = 2.0  # radians, ~115 degrees


def mix_seed(*parts) -> int:
    """Stable 63-bit seed derived from arbitrary parts (platform independent)."""
    digest = hashlib.blake2b(repr(parts).encode(), digest_size=8).digest()
    return int.from_bytes(digest, "little") & 0x7FFFFFFFFFFFFFFF


@dataclass
class Scenario:
    cup_shape: str = "straight"
    bowl_shape: str = "wide"
    fill_fraction: float = 0.6
    pour_profile: str = "slow"
    background_id: int = 0
    has_liquid: bool = True
    seed: int = 0
    duration_frames: int = 90
    fps: int = 30

    def __post_init__(self):
        require(self.cup_shape in CUP_SHAPES, f"unknown cup_shape {self.cup_shape!r}")
        require(self.bowl_shape in BOWL_SHAPES, f"unknown bowl_shape {self.bowl_shape!r}")
        require(self.pour_profile in POUR_PROFILES,
                f"unknown pour_profile {self.pour_profile!r}")
        require(self.duration_frames > 0, "duration_frames must be positive")
        if self.has_liquid:
            require(self.fill_fraction in FILL_FRACTIONS,
                    f"fill_fraction must be one of {FILL_FRACTIONS}, got {self.fill_fraction}")
        else:
            require(self.fill_fraction == 0.0,
                    "negative scenarios must have fill_fraction 0")

    def to_dict(self) -> dict:
        return {
            "cup_shape": self.cup_shape,
            "bowl_shape": self.bowl_shape,
            "fill_fraction": self.fill_fraction,
            "pour_profile": self.pour_profile,
            "background_id": self.background_id,
            "has_liquid": self.has_liquid,
            "seed": self.seed,
            "duration_frames": self.duration_frames,
            "fps": self.fps,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scenario":
        return cls(**d)


def _smoothstep(p: float) -> float:
    p = min(max(p, 0.0), 1.0)
    return p * p * (3.0 - 2.0 * p)


def tilt_at(scenario: Scenario, frame: float) -> float:
    """Cup tilt angle (radians) at a (possibly fractional) frame index."""
    T = scenario.duration_frames
    t0 = 0.12 * T  # settling phase before the pour
    if scenario.pour_profile == "slow":
        return MAX_TILT * _smoothstep((frame - t0) / (0.85 * T - t0))
    if scenario.pour_profile == "fast":
        return MAX_TILT * _smoothstep((frame - t0) / (0.45 * T - t0))
    # partial: tilt up to 55% of max, then return upright
    up_end, down_start, down_end = 0.40 * T, 0.50 * T, 0.75 * T
    peak = 0.55 * MAX_TILT
    if frame < down_start:
        return peak * _smoothstep((frame - t0) / (up_end - t0))
    return peak * (1.0 - _smoothstep((frame - down_start) / (down_end - down_start)))


def validate_profile(scenario: Scenario) -> None:
    """Tilt is monotone during the pour ramp; partials end upright."""
    T = scenario.duration_frames
    samples = [tilt_at(scenario, f) for f in np.linspace(0, T, 4 * T)]
    peak_idx = int(np.argmax(samples))
    ramp = samples[:peak_idx + 1]
    require(all(b >= a - 1e-12 for a, b in zip(ramp, ramp[1:])),
            "pour profile is not monotone during the pour phase")
    if scenario.pour_profile == "partial":
        require(abs(samples[-1]) < 1e-9, "partial pour must return to upright")


@dataclass
class SceneGeometry:
    """Static bowl/table geometry plus the cup profile and pivot.

    World units are raster cells: x in [0, W] (columns), y in [0, H]
    (rows, increasing downward). Cell (i, j) has center (j+0.5, i+0.5).
    """

    height: int
    width: int
    cup_local: np.ndarray       # (k, 2) polygon, pivot at origin, mouth edge last->first
    cup_pivot: np.ndarray       # (2,) world position of the pour lip
    bowl_poly: np.ndarray       # (k, 2) world polygon, mouth edge last->first
    ground_y: float
    scale: float

    def cup_polygon(self, tilt: float) -> np.ndarray:
        c, s = np.cos(tilt), np.sin(tilt)
        rot = np.array([[c, -s], [s, c]])
        return self.cup_pivot[None, :] + self.cup_local @ rot.T

    def collision_segments(self, tilt: float) -> np.ndarray:
        """(m, 2, 2) solid segments: cup walls, bowl walls, table, borders."""
        segs = []
        cup = self.cup_polygon(tilt)
        for a, b in zip(cup[:-1], cup[1:]):  # mouth (last->first) stays open
            segs.append((a, b))
        for a, b in zip(self.bowl_poly[:-1], self.bowl_poly[1:]):
            segs.append((a, b))
        w, h = float(self.width), float(self.height)
        segs.append(((1.0, self.ground_y), (w - 1.0, self.ground_y)))  # table
        segs.append(((0.6, 0.6), (0.6, h - 0.6)))                      # left border
        segs.append(((w - 0.6, 0.6), (w - 0.6, h - 0.6)))              # right border
        segs.append(((0.6, h - 0.6), (w - 0.6, h - 0.6)))              # floor
        segs.append(((0.6, 0.6), (w - 0.6, 0.6)))                      # ceiling
        return np.array(segs, dtype=np.float64)


_CUP_PROFILES = {
    # local coords, pivot (0,0) = right pour lip, +y down into the cup
    "straight": [(0.0, 0.0), (0.0, 10.0), (-8.0, 10.0), (-8.0, 0.0)],
    "tapered": [(0.0, 0.0), (-1.2, 10.0), (-6.8, 10.0), (-8.0, 0.0)],
    "narrow-neck": [(0.0, 0.0), (0.0, 3.0), (2.3, 5.0), (2.3, 11.5),
                    (-7.3, 11.5), (-7.3, 5.0), (-5.0, 3.0), (-5.0, 0.0)],
}

_BOWL_PROFILES = {
    # (top half-width, bottom half-width, height)
    "wide": (11.0, 7.0, 9.0),
    "shallow": (12.0, 9.0, 6.0),
    "tall": (8.0, 5.5, 12.0),
}


def build_geometry(scenario: Scenario, height: int, width: int) -> SceneGeometry:
    scale = min(width / 64.0, height / 48.0)
    ground_y = height - 2.5 * scale
    cx = 0.66 * width
    top_hw, bot_hw, bowl_h = (v * scale for v in _BOWL_PROFILES[scenario.bowl_shape])
    rim_y = ground_y - bowl_h
    bowl = np.array([(cx - top_hw, rim_y), (cx - bot_hw, ground_y),
                     (cx + bot_hw, ground_y), (cx + top_hw, rim_y)])
    cup_local = np.array(_CUP_PROFILES[scenario.cup_shape]) * scale
    # pour lip sits above the bowl mouth so the stream lands inside
    pivot = np.array([0.60 * width, 0.32 * height])
    return SceneGeometry(height=height, width=width, cup_local=cup_local,
                         cup_pivot=pivot, bowl_poly=bowl, ground_y=ground_y,
                         scale=scale)


def sample_scenario(rng: np.random.Generator, negative: bool, seed: int,
                    duration_frames: int = 90) -> Scenario:
    """Uniformly sample scenario variables, paper-style."""
    return Scenario(
        cup_shape=CUP_SHAPES[int(rng.integers(len(CUP_SHAPES)))],
        bowl_shape=BOWL_SHAPES[int(rng.integers(len(BOWL_SHAPES)))],
        fill_fraction=0.0 if negative else FILL_FRACTIONS[int(rng.integers(3))],
        pour_profile=POUR_PROFILES[int(rng.integers(len(POUR_PROFILES)))],
        background_id=int(rng.integers(8)),
        has_liquid=not negative,
        seed=seed,
        duration_frames=duration_frames,
    )
