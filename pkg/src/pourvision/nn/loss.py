"""Pixel-wise weighted binary cross-entropy on logits."""
from __future__ import annotations

import numpy as np

from .tensor import ContractViolation, require, sigmoid


def sigmoid_ce_loss(logits: np.ndarray, labels: np.ndarray,
                    pos_weight: float = 1.0) -> tuple[float, np.ndarray]:
    """Mean over pixels of weighted BCE, numerically stable.

    Positive pixels are weighted by pos_weight, negatives by 1. Returns
    the scalar loss and the gradient w.r.t. logits,
    weight * (sigmoid(logit) - label) / N.
    """
    logits = np.asarray(logits)
    labels = np.asarray(labels)
    require(logits.shape == labels.shape,
            f"logits shape {logits.shape} != labels shape {labels.shape}")
    require(pos_weight > 0, f"pos_weight must be > 0, got {pos_weight}")
    lab = labels.astype(logits.dtype, copy=False)
    if not np.all((lab == 0) | (lab == 1)):
        raise ContractViolation("labels must be 0 or 1")
    weight = 1.0 + (pos_weight - 1.0) * lab
    # stable form: max(z,0) - z*y + log(1 + exp(-|z|))
    per_pixel = np.maximum(logits, 0) - logits * lab + np.log1p(np.exp(-np.abs(logits)))
    n = logits.size
    loss = float(np.sum(per_pixel.astype(np.float64) * weight) / n)
    grad = (weight * (sigmoid(logits) - lab) / n).astype(logits.dtype)
    return loss, grad
