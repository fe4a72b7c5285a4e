"""SGD with momentum and optional global-norm gradient clipping."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor import require


@dataclass
class OptimizerState:
    learning_rate: float
    momentum: float = 0.0
    grad_clip_norm: float | None = None
    velocity: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        require(self.learning_rate > 0,
                f"learning_rate must be positive, got {self.learning_rate}")
        require(0.0 <= self.momentum < 1.0,
                f"momentum must be in [0, 1), got {self.momentum}")
        if self.grad_clip_norm is not None:
            require(self.grad_clip_norm > 0,
                    f"grad_clip_norm must be positive, got {self.grad_clip_norm}")


def global_norm(grads: dict[str, np.ndarray]) -> float:
    total = 0.0
    for name in sorted(grads):
        g = grads[name]
        total += float(np.dot(g.ravel(), g.ravel()))
    return float(np.sqrt(total))


def sgd_step(params: dict[str, np.ndarray], grads: dict[str, np.ndarray],
             state: OptimizerState) -> None:
    """In-place update: v <- momentum*v - lr*g; theta <- theta + v."""
    require(set(grads) == set(params),
            "gradient keys do not match parameter keys")
    scale = 1.0
    if state.grad_clip_norm is not None:
        gn = global_norm(grads)
        if gn > state.grad_clip_norm:
            scale = state.grad_clip_norm / gn
    for name in sorted(params):
        p = params[name]
        g = grads[name]
        require(g.shape == p.shape,
                f"gradient shape {g.shape} != parameter shape {p.shape} for {name}")
        v = state.velocity.get(name)
        if v is None:
            v = np.zeros_like(p)
            state.velocity[name] = v
        v *= state.momentum
        v -= (state.learning_rate * scale) * g.astype(p.dtype, copy=False)
        p += v
