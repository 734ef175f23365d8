# This code is part of FuXi-Rec.
#
# (C) Copyright FuXi-Rec Developers 2026.
#
# This code is licensed under the Apache License, Version 2.0. You may
# obtain a copy of this license in the LICENSE.txt file in the root directory
# of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
#
# Any modifications or derivative works of this code must retain this
# copyright notice, and modified files need to carry a notice indicating
# that they have been altered from the originals.

"""Dense kernels on numpy arrays, shared by the tape and the reference oracles."""

from typing import Tuple

import numpy as np
from scipy.special import expit, logsumexp, softmax

from ..exceptions import NonFiniteError, ShapeMismatchError

RMSNORM_EPS = 1e-6


def check_finite(name: str, array: np.ndarray) -> np.ndarray:
    """Return ``array`` unchanged, raising if any entry is NaN or infinite.

    Raises:
        NonFiniteError: if ``array`` has a non-finite entry.
    """
    if not np.all(np.isfinite(array)):
        bad = int(np.size(array) - np.count_nonzero(np.isfinite(array)))
        raise NonFiniteError(
            f"{name} produced {bad} non-finite value(s)", {"op": name, "shape": np.shape(array)}
        )
    return array


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product over the last two axes, leading axes broadcast.

    Raises:
        ShapeMismatchError: if the inner dimensions differ or an operand is not at least 2-D.
    """
    if a.ndim < 2 or b.ndim < 2:
        raise ShapeMismatchError(f"matmul needs 2-D operands, got {a.shape} and {b.shape}")
    if a.shape[-1] != b.shape[-2]:
        raise ShapeMismatchError(f"matmul inner dimensions differ: {a.shape} @ {b.shape}")
    return check_finite("matmul", np.matmul(a, b))


def matmul_multiplies(a_shape: Tuple[int, ...], b_shape: Tuple[int, ...]) -> int:
    """Scalar multiplies performed by ``matmul`` on operands of the given shapes."""
    batch = np.broadcast_shapes(a_shape[:-2], b_shape[:-2])
    return int(np.prod(batch, dtype=np.int64)) * a_shape[-2] * a_shape[-1] * b_shape[-1]


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Logistic function, overflow free."""
    return expit(x)


def silu(x: np.ndarray) -> np.ndarray:
    """``x * sigmoid(x)``."""
    return x * expit(x)


def silu_grad(x: np.ndarray) -> np.ndarray:
    """Derivative of :func:`silu`: ``sigmoid(x) * (1 + x * (1 - sigmoid(x)))``."""
    sig = expit(x)
    return sig * (1.0 + x * (1.0 - sig))


def softplus(x: np.ndarray) -> np.ndarray:
    """``log(1 + exp(x))`` evaluated without overflow."""
    return np.logaddexp(0.0, x)


def inverse_softplus(y: float) -> float:
    """Return ``x`` such that ``softplus(x) == y`` for ``y > 0``."""
    return float(y + np.log(-np.expm1(-y)))


def rmsnorm(x: np.ndarray, gain: np.ndarray, eps: float = RMSNORM_EPS) -> np.ndarray:
    """Normalize the last axis by its root mean square and scale by ``gain``.

    Raises:
        ShapeMismatchError: if ``gain`` does not match the last axis of ``x``.
    """
    if gain.shape != x.shape[-1:]:
        raise ShapeMismatchError(f"rmsnorm gain {gain.shape} does not match input {x.shape}")
    inv_rms = 1.0 / np.sqrt(np.mean(x * x, axis=-1, keepdims=True) + eps)
    return gain * x * inv_rms


def rmsnorm_backward(
    x: np.ndarray, gain: np.ndarray, grad_out: np.ndarray, eps: float = RMSNORM_EPS
) -> Tuple[np.ndarray, np.ndarray]:
    """Return ``(d_x, d_gain)`` for :func:`rmsnorm`, ``d_gain`` summed over leading axes."""
    width = x.shape[-1]
    inv_rms = 1.0 / np.sqrt(np.mean(x * x, axis=-1, keepdims=True) + eps)
    scaled = grad_out * gain
    dot = np.sum(scaled * x, axis=-1, keepdims=True)
    d_x = scaled * inv_rms - x * dot * inv_rms**3 / width
    d_gain = np.sum((grad_out * x * inv_rms).reshape(-1, width), axis=0)
    return d_x, d_gain


def softmax_row(row: np.ndarray) -> np.ndarray:
    """Softmax along the last axis, stabilized by max subtraction."""
    return softmax(row, axis=-1)


def log_sum_exp(row: np.ndarray) -> np.ndarray:
    """``log(sum(exp(row)))`` along the last axis, stabilized by max subtraction."""
    return logsumexp(row, axis=-1)
