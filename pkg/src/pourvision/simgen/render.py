"""Transparency-style frame renderer.

Visible liquid never receives a solid color: those pixels re-sample the
pre-liquid composite at a refraction offset driven by the local mask
gradient, plus sparse specular spikes on mask boundaries. Masking the
liquid out therefore reproduces the no-liquid render exactly.
"""
from __future__ import annotations

import numpy as np
from scipy import ndimage

from .labels import LIQUID, polygon_mask, rasterize_labels
from .scenario import SceneGeometry, mix_seed
from .solver import SimState

REFRACTION_OFFSET = 2     # pixels, along the liquid-mask gradient
SPECULAR_PROB = 0.15      # per boundary cell
SPECULAR_GAIN = 0.5
NOISE_SIGMA = 0.055

_CUP_COLOR = np.array([0.72, 0.30, 0.24])
_BOWL_COLOR = np.array([0.28, 0.55, 0.30])


def background_pattern(background_id: int, height: int, width: int) -> np.ndarray:
    """Deterministic procedural pattern (3, H, W), fixed per id."""
    rng = np.random.default_rng(mix_seed("background", background_id))
    jj, ii = np.meshgrid(np.arange(width, dtype=np.float64),
                         np.arange(height, dtype=np.float64))
    img = np.zeros((3, height, width))
    for ch in range(3):
        a, b = rng.uniform(0.15, 0.8, size=2)
        phase = rng.uniform(0, 2 * np.pi)
        amp = rng.uniform(0.10, 0.22)
        base = rng.uniform(0.35, 0.6)
        img[ch] = base + amp * np.sin(a * jj + b * ii + phase)
        img[ch] += 0.08 * np.sin(0.9 * a * ii - 1.3 * b * jj + 2.1 * phase)
    grad = rng.uniform(-0.1, 0.1)
    img += grad * (ii / max(height - 1, 1))[None]
    return np.clip(img, 0.0, 1.0)


def _container_texture(color: np.ndarray, height: int, width: int,
                       freq: float) -> np.ndarray:
    jj, ii = np.meshgrid(np.arange(width, dtype=np.float64),
                         np.arange(height, dtype=np.float64))
    stripes = 0.06 * np.sin(freq * (jj + 0.5 * ii))
    return np.clip(color[:, None, None] + stripes[None], 0.0, 1.0)


def _base_scene(state: SimState, geometry: SceneGeometry, background_id: int,
                seed: int, frame_index: int) -> np.ndarray:
    h, w = geometry.height, geometry.width
    img = background_pattern(background_id, h, w).copy()
    noise_rng = np.random.default_rng(mix_seed("noise", seed, frame_index))
    img += noise_rng.normal(0.0, NOISE_SIGMA, size=img.shape)
    cup = polygon_mask(geometry.cup_polygon(state.tilt), h, w)
    bowl = polygon_mask(geometry.bowl_poly, h, w)
    bowl_tex = _container_texture(_BOWL_COLOR, h, w, 1.7)
    cup_tex = _container_texture(_CUP_COLOR, h, w, 2.3)
    img[:, bowl] = bowl_tex[:, bowl]
    img[:, cup] = cup_tex[:, cup]
    return np.clip(img, 0.0, 1.0)


def render_frame(state: SimState, geometry: SceneGeometry, background_id: int,
                 seed: int, label: np.ndarray | None = None) -> np.ndarray:
    """(3, H, W) float32 image in [0, 1]."""
    if label is None:
        label = rasterize_labels(state, geometry)
    h, w = geometry.height, geometry.width
    base = _base_scene(state, geometry, background_id, seed, state.frame_index)
    img = base.copy()
    vis = label[3] == LIQUID
    if vis.any():
        smooth = ndimage.uniform_filter(vis.astype(np.float64), size=3)
        gy, gx = np.gradient(smooth)
        norm = np.sqrt(gx * gx + gy * gy)
        safe = np.maximum(norm, 1e-9)
        off_i = np.rint(REFRACTION_OFFSET * gy / safe).astype(np.int64)
        off_j = np.rint(REFRACTION_OFFSET * gx / safe).astype(np.int64)
        off_i[norm < 1e-9] = 0
        off_j[norm < 1e-9] = 0
        ii, jj = np.nonzero(vis)
        si = np.clip(ii + off_i[ii, jj], 0, h - 1)
        sj = np.clip(jj + off_j[ii, jj], 0, w - 1)
        img[:, ii, jj] = base[:, si, sj]
        boundary = vis & ~ndimage.binary_erosion(vis, np.ones((3, 3), bool),
                                                 border_value=1)
        spec_rng = np.random.default_rng(
            mix_seed("specular", seed, state.frame_index))
        roll = spec_rng.random((h, w))
        spikes = boundary & (roll < SPECULAR_PROB)
        img[:, spikes] = np.clip(img[:, spikes] + SPECULAR_GAIN, 0.0, 1.0)
    return np.clip(img, 0.0, 1.0).astype(np.float32)


def render_constants() -> dict:
    return {
        "refraction_offset_px": REFRACTION_OFFSET,
        "specular_prob": SPECULAR_PROB,
        "specular_gain": SPECULAR_GAIN,
        "noise_sigma": NOISE_SIGMA,
    }
