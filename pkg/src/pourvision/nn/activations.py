"""Rectifier and 2x2 max pooling with gradient routing."""
from __future__ import annotations

import numpy as np

from .tensor import check_nchw, require


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0)


def relu_backward(x: np.ndarray, grad_out: np.ndarray) -> np.ndarray:
    # subgradient at exactly 0 is 0
    return grad_out * (x > 0)


def maxpool_forward(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """2x2 window, stride 2 max pooling.

    Odd heights/widths are padded on the bottom/right with -inf. Returns
    the pooled map and an argmax index map of shape (n, c, oh, ow, 2)
    holding the (row, col) of each winner in the unpadded input. Ties go
    to the lexicographically first (top-left) element of the window.
    """
    x = check_nchw(x, "pool input")
    n, c, h, w = x.shape
    hp, wp = h + (h % 2), w + (w % 2)
    if hp != h or wp != w:
        xp = np.full((n, c, hp, wp), -np.inf, dtype=x.dtype)
        xp[:, :, :h, :w] = x
    else:
        xp = x
    oh, ow = hp // 2, wp // 2
    # window order TL, TR, BL, BR so argmax tie-break is top-left first
    win = xp.reshape(n, c, oh, 2, ow, 2).transpose(0, 1, 2, 4, 3, 5)
    win = win.reshape(n, c, oh, ow, 4)
    flat = win.argmax(axis=-1)
    y = np.take_along_axis(win, flat[..., None], axis=-1)[..., 0]
    rows = 2 * np.arange(oh)[None, None, :, None] + flat // 2
    cols = 2 * np.arange(ow)[None, None, None, :] + flat % 2
    argmax = np.stack(np.broadcast_arrays(rows, cols), axis=-1).astype(np.int64)
    return np.ascontiguousarray(y), argmax


def maxpool_backward(x: np.ndarray, argmax: np.ndarray,
                     grad_out: np.ndarray) -> np.ndarray:
    """Route each output gradient to its recorded argmax position."""
    n, c, h, w = x.shape
    oh, ow = argmax.shape[2], argmax.shape[3]
    require(grad_out.shape == (n, c, oh, ow),
            f"pool grad_out shape {grad_out.shape} != expected {(n, c, oh, ow)}")
    grad_x = np.zeros((n, c, h, w), dtype=grad_out.dtype)
    ni, ci = np.meshgrid(np.arange(n), np.arange(c), indexing="ij")
    ni = ni[:, :, None, None]
    ci = ci[:, :, None, None]
    np.add.at(grad_x, (ni, ci, argmax[..., 0], argmax[..., 1]), grad_out)
    return grad_x
