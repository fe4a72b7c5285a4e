"""Ground-truth rasterization with multi-label + visible-class semantics.

Channels (cup, bowl, liquid) mark full object extent and may overlap;
visible_class records the frontmost object per pixel. In side view the
container silhouette occludes liquid it contains, so occluded liquid has
liquid=1 with visible_class pointing at the container.
"""
from __future__ import annotations

import numpy as np
from scipy import ndimage

from .scenario import SceneGeometry
from .solver import SimState

SPLAT_RADIUS = 1.5

BACKGROUND, CUP, BOWL, LIQUID = 0, 1, 2, 3


def polygon_mask(poly: np.ndarray, height: int, width: int) -> np.ndarray:
    """Even-odd scan fill over pixel centers."""
    jj, ii = np.meshgrid(np.arange(width), np.arange(height))
    x = jj + 0.5
    y = ii + 0.5
    inside = np.zeros((height, width), dtype=bool)
    k = len(poly)
    for e in range(k):
        x1, y1 = poly[e]
        x2, y2 = poly[(e + 1) % k]
        if y1 == y2:
            continue
        crosses = (y1 > y) != (y2 > y)
        xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
        inside ^= crosses & (x < xi)
    return inside


def liquid_mask(positions: np.ndarray, height: int, width: int) -> np.ndarray:
    """Disc splats (radius 1.5 cells) followed by one closing pass."""
    mask = np.zeros((height, width), dtype=bool)
    if len(positions) == 0:
        return mask
    r = SPLAT_RADIUS
    rng_cells = int(np.ceil(r)) + 1
    base_j = np.floor(positions[:, 0] - 0.5).astype(np.int64)
    base_i = np.floor(positions[:, 1] - 0.5).astype(np.int64)
    for di in range(-rng_cells, rng_cells + 1):
        for dj in range(-rng_cells, rng_cells + 1):
            ci = base_i + di
            cj = base_j + dj
            cx = cj + 0.5
            cy = ci + 0.5
            d2 = (cx - positions[:, 0]) ** 2 + (cy - positions[:, 1]) ** 2
            ok = (d2 <= r * r) & (ci >= 0) & (ci < height) & (cj >= 0) & (cj < width)
            mask[ci[ok], cj[ok]] = True
    struct = np.ones((3, 3), dtype=bool)
    dil = ndimage.binary_dilation(mask, structure=struct)
    return ndimage.binary_erosion(dil, structure=struct, border_value=1)


def rasterize_labels(state: SimState, geometry: SceneGeometry,
                     height: int | None = None,
                     width: int | None = None) -> np.ndarray:
    """(4, H, W) uint8 label raster: cup, bowl, liquid, visible_class.

    Painter's order for visibility: background < liquid < bowl < cup.
    """
    h = geometry.height if height is None else height
    w = geometry.width if width is None else width
    cup = polygon_mask(geometry.cup_polygon(state.tilt), h, w)
    bowl = polygon_mask(geometry.bowl_poly, h, w)
    liquid = liquid_mask(state.positions, h, w)
    visible = np.zeros((h, w), dtype=np.uint8)
    visible[liquid] = LIQUID
    visible[bowl] = BOWL
    visible[cup] = CUP
    label = np.zeros((4, h, w), dtype=np.uint8)
    label[0] = cup
    label[1] = bowl
    label[2] = liquid
    label[3] = visible
    return label


def visible_liquid_mask(label: np.ndarray) -> np.ndarray:
    return label[3] == LIQUID


def total_liquid_mask(label: np.ndarray) -> np.ndarray:
    return label[2].astype(bool)


def make_segmented_input(label: np.ndarray) -> np.ndarray:
    """One-hot (4, H, W) float32 from visible_class only.

    Channels: background, cup, bowl, visible liquid. Occluded liquid does
    not appear.
    """
    vc = label[3]
    out = np.zeros((4,) + vc.shape, dtype=np.float32)
    for ch in range(4):
        out[ch] = vc == ch
    return out
