"""Independent naive reimplementations used as test oracles.

Everything here is deliberately loop-based and shares no code with the
package implementations it checks.
"""
from __future__ import annotations

import numpy as np


def conv_direct(x: np.ndarray, w: np.ndarray, b: np.ndarray,
                stride: int, pad: int) -> np.ndarray:
    """Quadruple-loop cross-correlation."""
    n, c, h, ww = x.shape
    oc, ic, kh, kw = w.shape
    assert c == ic
    xp = np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))
    oh = (h + 2 * pad - kh) // stride + 1
    ow = (ww + 2 * pad - kw) // stride + 1
    y = np.zeros((n, oc, oh, ow), dtype=np.float64)
    for ni in range(n):
        for oi in range(oc):
            for i in range(oh):
                for j in range(ow):
                    acc = 0.0
                    for ci in range(ic):
                        for u in range(kh):
                            for v in range(kw):
                                acc += w[oi, ci, u, v] * xp[ni, ci, i * stride + u, j * stride + v]
                    y[ni, oi, i, j] = acc + b[oi]
    return y


def deconv_scatter(x: np.ndarray, w: np.ndarray, b: np.ndarray,
                   stride: int, crop: int) -> np.ndarray:
    """Direct scatter-accumulate transposed convolution."""
    n, c, h, ww = x.shape
    ic, oc, kh, kw = w.shape
    assert c == ic
    full_h = (h - 1) * stride + kh
    full_w = (ww - 1) * stride + kw
    out = np.zeros((n, oc, full_h, full_w), dtype=np.float64)
    for ni in range(n):
        for ci in range(ic):
            for i in range(h):
                for j in range(ww):
                    for oi in range(oc):
                        for u in range(kh):
                            for v in range(kw):
                                out[ni, oi, i * stride + u, j * stride + v] += \
                                    w[ci, oi, u, v] * x[ni, ci, i, j]
    out = out[:, :, crop:full_h - crop, crop:full_w - crop]
    return out + b[None, :, None, None]


def maxpool_scan(x: np.ndarray) -> np.ndarray:
    """Per-window scan with bottom/right -inf padding for odd sizes."""
    n, c, h, w = x.shape
    oh, ow = (h + 1) // 2, (w + 1) // 2
    y = np.zeros((n, c, oh, ow), dtype=x.dtype)
    for ni in range(n):
        for ci in range(c):
            for i in range(oh):
                for j in range(ow):
                    best = -np.inf
                    for di in range(2):
                        for dj in range(2):
                            r, s = 2 * i + di, 2 * j + dj
                            if r < h and s < w and x[ni, ci, r, s] > best:
                                best = x[ni, ci, r, s]
                    y[ni, ci, i, j] = best
    return y


def slack_confusion_allpairs(pred: np.ndarray, gt: np.ndarray,
                             slack: int) -> tuple[int, int, int]:
    """All-pairs Chebyshev-distance confusion counts."""
    pred_pts = list(zip(*np.nonzero(pred)))
    gt_pts = list(zip(*np.nonzero(gt)))
    tp = fp = fn = 0
    for (pi, pj) in pred_pts:
        hit = any(max(abs(pi - gi), abs(pj - gj)) <= slack for (gi, gj) in gt_pts)
        if hit:
            tp += 1
        else:
            fp += 1
    for (gi, gj) in gt_pts:
        hit = any(max(abs(pi - gi), abs(pj - gj)) <= slack for (pi, pj) in pred_pts)
        if not hit:
            fn += 1
    return tp, fp, fn
