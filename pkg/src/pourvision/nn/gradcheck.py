"""Central finite-difference validation of analytic gradients."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np


@dataclass
class GradCheckReport:
    max_rel_error: float
    tolerance: float
    passed: bool
    per_input: list[float]

    def __str__(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"gradcheck {status}: max relative error {self.max_rel_error:.3e} "
                f"(tolerance {self.tolerance:.1e})")


def finite_diff_check(op: Callable[[Sequence[np.ndarray]], tuple[float, Sequence[np.ndarray]]],
                      inputs: Sequence[np.ndarray],
                      step: float = 1e-4,
                      tolerance: float = 1e-4) -> GradCheckReport:
    """Compare op's analytic gradients against central differences.

    op maps a list of float64 arrays to (scalar loss, gradients congruent
    with the inputs). Every input element is perturbed by +-step.
    """
    inputs = [np.asarray(x, dtype=np.float64) for x in inputs]
    _, analytic = op(inputs)
    analytic = [np.asarray(g, dtype=np.float64) for g in analytic]
    per_input = []
    for idx, x in enumerate(inputs):
        numeric = np.zeros_like(x)
        flat = x.ravel()
        num_flat = numeric.ravel()
        for k in range(flat.size):
            orig = flat[k]
            flat[k] = orig + step
            lp, _ = op(inputs)
            flat[k] = orig - step
            lm, _ = op(inputs)
            flat[k] = orig
            num_flat[k] = (lp - lm) / (2.0 * step)
        a = analytic[idx]
        denom = np.maximum(1.0, np.maximum(np.abs(a), np.abs(numeric)))
        err = np.abs(a - numeric) / denom
        per_input.append(float(err.max()) if err.size else 0.0)
    max_err = max(per_input) if per_input else 0.0
    return GradCheckReport(max_rel_error=max_err, tolerance=tolerance,
                           passed=max_err < tolerance, per_input=per_input)
