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

"""Adaptive moment estimation with decoupled weight decay."""

import logging
from dataclasses import dataclass, field
from typing import Dict

import numpy as np

from ...exceptions import ConfigurationError
from ...numerics.param_store import ParamStore
from ...utils.validation import validate_min, validate_range

logger = logging.getLogger(__name__)


@dataclass
class OptimizerState:
    """First and second moments per parameter name and the number of steps taken."""

    step: int = 0
    first_moment: Dict[str, np.ndarray] = field(default_factory=dict)
    second_moment: Dict[str, np.ndarray] = field(default_factory=dict)


class LinearWarmupSchedule:
    """Learning rate rising linearly from ``lr / warmup_steps`` to ``lr`` over
    ``warmup_steps`` steps, then constant."""

    def __init__(self, learning_rate: float, warmup_steps: int = 0) -> None:
        validate_min("learning_rate", learning_rate, 0.0)
        validate_min("warmup_steps", warmup_steps, 0)
        self._learning_rate = learning_rate
        self._warmup_steps = warmup_steps

    @classmethod
    def from_fraction(
        cls, learning_rate: float, warmup_fraction: float, total_steps: int
    ) -> "LinearWarmupSchedule":
        """Warm up over ``warmup_fraction`` of ``total_steps``."""
        validate_range("warmup_fraction", warmup_fraction, 0.0, 1.0)
        return cls(learning_rate, int(round(warmup_fraction * total_steps)))

    @property
    def warmup_steps(self) -> int:
        """Returns the number of warmup steps."""
        return self._warmup_steps

    def __call__(self, step: int) -> float:
        """Learning rate for the 1-based ``step``."""
        if self._warmup_steps and step <= self._warmup_steps:
            return self._learning_rate * step / self._warmup_steps
        return self._learning_rate


class AdamW:
    """AdamW over the trainable parameters of a :class:`~fuxi_rec.numerics.ParamStore`.

    Args:
        store: parameters to update in place.
        learning_rate: base step size, or a schedule mapping step to step size.
        beta_1: first-moment decay.
        beta_2: second-moment decay.
        eps: denominator offset.
        weight_decay: decoupled decay, applied as ``w -= lr * weight_decay * w``.

    Pinned rows stay at zero and a learning rate of zero leaves every value unchanged.
    """

    def __init__(
        self,
        store: ParamStore,
        learning_rate: float = 1e-3,
        beta_1: float = 0.9,
        beta_2: float = 0.98,
        eps: float = 1e-9,
        weight_decay: float = 0.0,
    ) -> None:
        validate_range("beta_1", beta_1, 0.0, 1.0)
        validate_range("beta_2", beta_2, 0.0, 1.0)
        validate_min("weight_decay", weight_decay, 0.0)
        if eps <= 0:
            raise ConfigurationError(f"eps must be > 0, was {eps}")
        self._store = store
        self._schedule = (
            learning_rate
            if callable(learning_rate)
            else LinearWarmupSchedule(float(learning_rate))
        )
        self._beta_1 = beta_1
        self._beta_2 = beta_2
        self._eps = eps
        self._weight_decay = weight_decay
        self._state = OptimizerState()
        for param in store.trainable():
            self._state.first_moment[param.name] = np.zeros_like(param.value)
            self._state.second_moment[param.name] = np.zeros_like(param.value)

    @property
    def state(self) -> OptimizerState:
        """Returns the moment estimates and step count."""
        return self._state

    @property
    def current_learning_rate(self) -> float:
        """Returns the step size the next call to :meth:`step` uses."""
        return self._schedule(self._state.step + 1)

    def step(self) -> None:
        """Apply one update from the gradients currently held in the store."""
        self._state.step += 1
        step = self._state.step
        learning_rate = self._schedule(step)
        if learning_rate == 0.0:
            return
        correction_1 = 1.0 - self._beta_1**step
        correction_2 = 1.0 - self._beta_2**step
        for param in self._store.trainable():
            first = self._state.first_moment[param.name]
            second = self._state.second_moment[param.name]
            first *= self._beta_1
            first += (1.0 - self._beta_1) * param.grad
            second *= self._beta_2
            second += (1.0 - self._beta_2) * param.grad * param.grad
            update = (first / correction_1) / (np.sqrt(second / correction_2) + self._eps)
            if self._weight_decay:
                param.value *= 1.0 - learning_rate * self._weight_decay
            param.value -= learning_rate * update
            if param.pinned_rows:
                param.value[list(param.pinned_rows)] = 0.0
        logger.debug("AdamW step %s with learning rate %.3e", step, learning_rate)
