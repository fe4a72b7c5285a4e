"""Tensor conventions and contract checks shared by all layers.

Tensors are plain numpy arrays in (batch, channel, height, width) order,
row-major, float32 by default. float64 is reserved for the gradient
checker.
"""
from __future__ import annotations

import numpy as np

DEFAULT_DTYPE = np.float32
CHECK_DTYPE = np.float64


class ContractViolation(ValueError):
    """An operation was called with inputs that break its contract."""


def require(condition: bool, message: str) -> None:
    if not condition:
        raise ContractViolation(message)


def check_nchw(x: np.ndarray, name: str = "tensor") -> np.ndarray:
    x = np.asarray(x)
    require(x.ndim == 4, f"{name} must be rank-4 (n,c,h,w), got shape {x.shape}")
    return x


def check_finite(x: np.ndarray, name: str = "tensor") -> None:
    if not np.all(np.isfinite(x)):
        raise ContractViolation(f"{name} contains NaN or Inf")


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function, dtype preserving."""
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out
