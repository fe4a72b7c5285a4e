"""Convolution and transposed convolution with analytic backward passes.

conv_forward is cross-correlation with symmetric zero padding. The
transposed convolution (deconv_forward) is the exact adjoint of
conv_forward for the same kernel array, so <conv(x), y> == <x, deconv(y)>
holds up to rounding when biases are zero.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import ContractViolation, check_nchw, require


@dataclass
class ConvParams:
    """weights: (out_c, in_c, kh, kw); bias: (out_c,)."""

    weights: np.ndarray
    bias: np.ndarray
    stride: int = 1
    pad: int = 0

    def __post_init__(self):
        self.weights = np.asarray(self.weights)
        self.bias = np.asarray(self.bias)
        require(self.weights.ndim == 4,
                f"conv weights must be rank-4, got shape {self.weights.shape}")
        require(self.bias.shape == (self.weights.shape[0],),
                f"bias shape {self.bias.shape} does not match out_c={self.weights.shape[0]}")
        require(self.stride >= 1, f"stride must be positive, got {self.stride}")
        require(self.pad >= 0, f"pad must be non-negative, got {self.pad}")

    @property
    def out_c(self) -> int:
        return self.weights.shape[0]

    @property
    def in_c(self) -> int:
        return self.weights.shape[1]


@dataclass
class DeconvParams:
    """weights: (in_c, out_c, kh, kw); crop trims the output symmetrically."""

    weights: np.ndarray
    bias: np.ndarray
    stride: int = 1
    crop: int = 0

    def __post_init__(self):
        self.weights = np.asarray(self.weights)
        self.bias = np.asarray(self.bias)
        require(self.weights.ndim == 4,
                f"deconv weights must be rank-4, got shape {self.weights.shape}")
        require(self.bias.shape == (self.weights.shape[1],),
                f"bias shape {self.bias.shape} does not match out_c={self.weights.shape[1]}")
        require(self.stride >= 1, f"stride must be positive, got {self.stride}")
        require(self.crop >= 0, f"crop must be non-negative, got {self.crop}")

    @property
    def in_c(self) -> int:
        return self.weights.shape[0]

    @property
    def out_c(self) -> int:
        return self.weights.shape[1]


def conv_out_size(size: int, k: int, stride: int, pad: int) -> int:
    return (size + 2 * pad - k) // stride + 1


def _conv_check(x: np.ndarray, p: ConvParams) -> tuple[int, int]:
    x = check_nchw(x, "conv input")
    _, c, h, w = x.shape
    oc, ic, kh, kw = p.weights.shape
    require(c == ic, f"conv input has {c} channels, kernel expects {ic}")
    oh = conv_out_size(h, kh, p.stride, p.pad)
    ow = conv_out_size(w, kw, p.stride, p.pad)
    require(oh >= 1 and ow >= 1,
            f"conv output size {oh}x{ow} < 1 for input {h}x{w}, kernel {kh}x{kw}, "
            f"stride {p.stride}, pad {p.pad}")
    return oh, ow


def _pad2d(x: np.ndarray, pad: int) -> np.ndarray:
    if pad == 0:
        return x
    return np.pad(x, ((0, 0), (0, 0), (pad, pad), (pad, pad)))


def conv_forward(x: np.ndarray, p: ConvParams) -> np.ndarray:
    """Cross-correlation with bias. Output (n, out_c, oh, ow)."""
    oh, ow = _conv_check(x, p)
    n, c, _, _ = x.shape
    oc, _, kh, kw = p.weights.shape
    xp = _pad2d(x, p.pad)
    sn, sc, sy, sx = xp.strides
    win = np.lib.stride_tricks.as_strided(
        xp, (n, c, kh, kw, oh, ow),
        (sn, sc, sy, sx, sy * p.stride, sx * p.stride), writeable=False)
    y = np.tensordot(p.weights, win, axes=([1, 2, 3], [1, 2, 3]))  # (oc,n,oh,ow)
    y = np.ascontiguousarray(y.transpose(1, 0, 2, 3))
    y += p.bias.astype(y.dtype)[None, :, None, None]
    return y


def conv_backward(x: np.ndarray, p: ConvParams,
                  grad_out: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of conv_forward w.r.t. input, weights and bias."""
    oh, ow = _conv_check(x, p)
    n, c, h, w = x.shape
    oc, _, kh, kw = p.weights.shape
    grad_out = check_nchw(grad_out, "conv grad_out")
    require(grad_out.shape == (n, oc, oh, ow),
            f"conv grad_out shape {grad_out.shape} != expected {(n, oc, oh, ow)}")

    grad_b = grad_out.sum(axis=(0, 2, 3))

    xp = _pad2d(x, p.pad)
    s = p.stride
    grad_w = np.empty_like(p.weights, dtype=grad_out.dtype)
    grad_xp = np.zeros_like(xp, dtype=grad_out.dtype)
    for u in range(kh):
        for v in range(kw):
            patch = xp[:, :, u:u + s * oh:s, v:v + s * ow:s]
            # (oc, c) contraction over batch and output positions
            grad_w[:, :, u, v] = np.tensordot(
                grad_out, patch, axes=([0, 2, 3], [0, 2, 3]))
            # scatter grad_out back through the kernel tap (u, v)
            contrib = np.tensordot(grad_out, p.weights[:, :, u, v],
                                   axes=([1], [0]))  # (n, oh, ow, c)
            grad_xp[:, :, u:u + s * oh:s, v:v + s * ow:s] += \
                contrib.transpose(0, 3, 1, 2)
    if p.pad > 0:
        grad_x = grad_xp[:, :, p.pad:p.pad + h, p.pad:p.pad + w]
    else:
        grad_x = grad_xp
    return np.ascontiguousarray(grad_x), grad_w, grad_b


def deconv_out_size(size: int, k: int, stride: int, crop: int) -> int:
    return (size - 1) * stride + k - 2 * crop


def _deconv_check(x: np.ndarray, p: DeconvParams) -> tuple[int, int]:
    x = check_nchw(x, "deconv input")
    _, c, h, w = x.shape
    ic, oc, kh, kw = p.weights.shape
    require(c == ic, f"deconv input has {c} channels, kernel expects {ic}")
    oh = deconv_out_size(h, kh, p.stride, p.crop)
    ow = deconv_out_size(w, kw, p.stride, p.crop)
    require(oh >= 1 and ow >= 1,
            f"deconv output size {oh}x{ow} < 1 for input {h}x{w}")
    return oh, ow


def deconv_forward(x: np.ndarray, p: DeconvParams) -> np.ndarray:
    """Transposed convolution: adjoint of conv_forward, plus bias."""
    oh, ow = _deconv_check(x, p)
    n, c, h, w = x.shape
    _, oc, kh, kw = p.weights.shape
    s = p.stride
    full_h = (h - 1) * s + kh
    full_w = (w - 1) * s + kw
    out = np.zeros((n, oc, full_h, full_w), dtype=x.dtype)
    for u in range(kh):
        for v in range(kw):
            contrib = np.tensordot(x, p.weights[:, :, u, v],
                                   axes=([1], [0]))  # (n, h, w, oc)
            out[:, :, u:u + s * h:s, v:v + s * w:s] += contrib.transpose(0, 3, 1, 2)
    if p.crop > 0:
        out = out[:, :, p.crop:full_h - p.crop, p.crop:full_w - p.crop]
    out = np.ascontiguousarray(out)
    out += p.bias.astype(out.dtype)[None, :, None, None]
    return out


def deconv_backward(x: np.ndarray, p: DeconvParams,
                    grad_out: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gradients of deconv_forward w.r.t. input, weights and bias."""
    oh, ow = _deconv_check(x, p)
    n, c, h, w = x.shape
    ic, oc, kh, kw = p.weights.shape
    grad_out = check_nchw(grad_out, "deconv grad_out")
    require(grad_out.shape == (n, oc, oh, ow),
            f"deconv grad_out shape {grad_out.shape} != expected {(n, oc, oh, ow)}")

    grad_b = grad_out.sum(axis=(0, 2, 3))

    # By adjointness the input gradient is the plain convolution of grad_out
    # with the same kernel (stride/crop play the conv stride/pad roles).
    s = p.stride
    gp = _pad2d(grad_out, p.crop)
    grad_x = np.zeros_like(x, dtype=grad_out.dtype)
    grad_w = np.empty_like(p.weights, dtype=grad_out.dtype)
    for u in range(kh):
        for v in range(kw):
            patch = gp[:, :, u:u + s * h:s, v:v + s * w:s]  # (n, oc, h, w)
            grad_x += np.tensordot(patch, p.weights[:, :, u, v],
                                   axes=([1], [1])).transpose(0, 3, 1, 2)
            grad_w[:, :, u, v] = np.tensordot(
                x, patch, axes=([0, 2, 3], [0, 2, 3]))
    return grad_x, grad_w, grad_b
