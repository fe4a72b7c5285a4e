"""Convolutional LSTM cell with 1x1 gate convolutions.

Gates are computed from the channel concatenation of the cell input and
the previous hidden map; the cell state enters only through the
elementwise recurrence (no peepholes).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .conv import ConvParams, conv_backward, conv_forward
from .tensor import require, sigmoid

GATES = ("i", "f", "o", "g")


@dataclass
class ConvLSTMParams:
    """Per-gate 1x1 convolution weights over concat([x, h_prev])."""

    wi: np.ndarray
    bi: np.ndarray
    wf: np.ndarray
    bf: np.ndarray
    wo: np.ndarray
    bo: np.ndarray
    wg: np.ndarray
    bg: np.ndarray

    def __post_init__(self):
        shapes = {g: getattr(self, "w" + g).shape for g in GATES}
        first = shapes["i"]
        for g, s in shapes.items():
            require(len(s) == 4 and s[2] == 1 and s[3] == 1,
                    f"gate {g} weights must be (hidden, in, 1, 1), got {s}")
            require(s == first,
                    f"gate {g} weights shape {s} != gate i shape {first}")
        for g in GATES:
            b = getattr(self, "b" + g)
            require(b.shape == (first[0],),
                    f"gate {g} bias shape {b.shape} != ({first[0]},)")

    @property
    def hidden_channels(self) -> int:
        return self.wi.shape[0]

    @property
    def gate_in_channels(self) -> int:
        return self.wi.shape[1]

    def gate_conv(self, gate: str) -> ConvParams:
        return ConvParams(getattr(self, "w" + gate), getattr(self, "b" + gate),
                          stride=1, pad=0)


@dataclass
class LstmStepCache:
    z: np.ndarray
    c_prev: np.ndarray
    i: np.ndarray
    f: np.ndarray
    o: np.ndarray
    g: np.ndarray
    c: np.ndarray


def conv_lstm_forward(x: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray,
                      p: ConvLSTMParams) -> tuple[np.ndarray, np.ndarray, LstmStepCache]:
    """One recurrence step; also returns the gate cache for BPTT/tests."""
    require(x.shape[0] == h_prev.shape[0] and x.shape[2:] == h_prev.shape[2:],
            f"x shape {x.shape} not spatially congruent with h_prev {h_prev.shape}")
    require(h_prev.shape == c_prev.shape,
            f"c_prev shape {c_prev.shape} != h_prev shape {h_prev.shape}")
    require(h_prev.shape[1] == p.hidden_channels,
            f"h_prev has {h_prev.shape[1]} channels, cell expects {p.hidden_channels}")
    z = np.concatenate([x, h_prev], axis=1)
    require(z.shape[1] == p.gate_in_channels,
            f"gate input has {z.shape[1]} channels, weights expect {p.gate_in_channels}")
    i = sigmoid(conv_forward(z, p.gate_conv("i")))
    f = sigmoid(conv_forward(z, p.gate_conv("f")))
    o = sigmoid(conv_forward(z, p.gate_conv("o")))
    g = np.tanh(conv_forward(z, p.gate_conv("g")))
    c = f * c_prev + i * g
    h = o * np.tanh(c)
    return h, c, LstmStepCache(z=z, c_prev=c_prev, i=i, f=f, o=o, g=g, c=c)


def conv_lstm_step(x: np.ndarray, h_prev: np.ndarray, c_prev: np.ndarray,
                   p: ConvLSTMParams) -> tuple[np.ndarray, np.ndarray]:
    h, c, _ = conv_lstm_forward(x, h_prev, c_prev, p)
    return h, c


def conv_lstm_backward(cache: LstmStepCache, p: ConvLSTMParams,
                       grad_h: np.ndarray, grad_c: np.ndarray):
    """Backward through one step.

    Returns (grad_x, grad_h_prev, grad_c_prev, grads) where grads maps
    'wi','bi',... to parameter gradients.
    """
    tc = np.tanh(cache.c)
    do = grad_h * tc
    dc = grad_c + grad_h * cache.o * (1.0 - tc * tc)
    di = dc * cache.g
    df = dc * cache.c_prev
    dg = dc * cache.i
    grad_c_prev = dc * cache.f

    pre = {
        "i": di * cache.i * (1.0 - cache.i),
        "f": df * cache.f * (1.0 - cache.f),
        "o": do * cache.o * (1.0 - cache.o),
        "g": dg * (1.0 - cache.g * cache.g),
    }
    x_c = p.gate_in_channels - p.hidden_channels
    grad_z = np.zeros_like(cache.z)
    grads = {}
    for gate in GATES:
        gz, gw, gb = conv_backward(cache.z, p.gate_conv(gate), pre[gate])
        grad_z += gz
        grads["w" + gate] = gw
        grads["b" + gate] = gb
    grad_x = grad_z[:, :x_c]
    grad_h_prev = grad_z[:, x_c:]
    return grad_x, grad_h_prev, grad_c_prev, grads
