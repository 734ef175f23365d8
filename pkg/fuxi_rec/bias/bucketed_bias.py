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

"""Bucketed relative attention bias: learnable tables indexed by relative distance."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bias_functions import DEFAULT_MAX_BUCKET, bucket_indices
from .bias_matrix import (
    MULTIPLICATIVE_MASK,
    BiasKind,
    BiasMatrix,
    elapsed_time,
)
from ..exceptions import ConfigurationError
from ..numerics.counters import KernelCounter
from ..numerics.param_store import ParamStore
from ..numerics.tape import Tape, Variable


@dataclass
class BucketTable:
    """Positional table ``beta`` (one entry per relative distance, clamped) and
    temporal table ``beta_t`` indexed by log2 buckets of elapsed time."""

    beta: np.ndarray
    beta_t: np.ndarray = field(default_factory=lambda: np.zeros(DEFAULT_MAX_BUCKET))
    time_scale: float = 1.0

    def __post_init__(self) -> None:
        self.beta = np.asarray(self.beta, dtype=np.float64)
        self.beta_t = np.asarray(self.beta_t, dtype=np.float64)
        if self.beta.ndim != 1 or self.beta.size < 1:
            raise ConfigurationError("positional bucket table needs at least one entry")
        if self.beta_t.ndim != 1 or self.beta_t.size < 1:
            raise ConfigurationError("temporal bucket table needs at least one entry")
        if self.time_scale <= 0:
            raise ConfigurationError(f"time_scale must be > 0, was {self.time_scale}")

    @property
    def d_rab(self) -> int:
        """Returns the positional table length."""
        return self.beta.size

    @property
    def max_bucket(self) -> int:
        """Returns the temporal table length."""
        return self.beta_t.size


def positional_indices(n: int, d_rab: int) -> np.ndarray:
    """``min(i - j, d_rab - 1)`` on and below the diagonal, 0 above."""
    distance = np.subtract.outer(np.arange(n), np.arange(n))
    return np.clip(distance, 0, d_rab - 1)


def temporal_indices(timestamps: np.ndarray, time_scale: float, max_bucket: int) -> np.ndarray:
    """Log2 bucket of the elapsed time for every pair, over the last axis."""
    return bucket_indices(elapsed_time(timestamps, time_scale), max_bucket)


def _gather_lower(
    table: np.ndarray, indices: np.ndarray, mask_value: float, counter: Optional[KernelCounter]
) -> np.ndarray:
    n = indices.shape[-1]
    rows, cols = np.tril_indices(n)
    lower = indices[..., rows, cols]
    if counter is not None:
        counter.add_gathers("bias", lower.size)
    values = np.full(indices.shape, mask_value, dtype=np.float64)
    values[..., rows, cols] = table[lower]
    return values


def bucketed_rab_positional(
    n: int,
    table: BucketTable,
    mask_value: float = MULTIPLICATIVE_MASK,
    counter: Optional[KernelCounter] = None,
) -> BiasMatrix:
    """Positional bias ``beta[min(i - j, d_rab - 1)]`` for ``j <= i``, masked above."""
    values = _gather_lower(table.beta, positional_indices(n, table.d_rab), mask_value, counter)
    return BiasMatrix(n, values, BiasKind.POSITIONAL, mask_value)


def bucketed_rab_temporal(
    timestamps: np.ndarray,
    table: BucketTable,
    mask_value: float = MULTIPLICATIVE_MASK,
    counter: Optional[KernelCounter] = None,
) -> BiasMatrix:
    """Temporal bias ``beta_t[floor(log2(1 + elapsed / time_scale))]``, masked above.

    Every kept entry is a data-dependent read from ``beta_t``: ``n(n+1)/2`` gathers.
    """
    timestamps = np.asarray(timestamps)
    indices = temporal_indices(timestamps, table.time_scale, table.max_bucket)
    values = _gather_lower(table.beta_t, indices, mask_value, counter)
    return BiasMatrix(timestamps.shape[-1], values, BiasKind.TEMPORAL, mask_value)


class BucketedRelativeBias:
    """Learnable bucket table registered in a parameter store.

    Args:
        name: parameter name of the table, e.g. ``block0.rab.beta``.
        kind: positional or temporal.
        size: table length (``d_rab`` or ``max_bucket``).
        time_scale: seconds per unit before temporal bucketing.
    """

    def __init__(self, name: str, kind: BiasKind, size: int, time_scale: float = 1.0) -> None:
        self._name = name
        self._kind = kind
        self._size = size
        self._time_scale = time_scale

    @property
    def name(self) -> str:
        """Returns the table's parameter name."""
        return self._name

    @property
    def num_parameters(self) -> int:
        """Returns the table length."""
        return self._size

    def register(self, store: ParamStore) -> None:
        """Add a zero-initialized table to ``store``."""
        store.add(self._name, np.zeros(self._size))

    def forward(self, tape: Tape, timestamps: np.ndarray, mask_value: float) -> Variable:
        """Bias matrices for ``timestamps`` of shape ``(batch, n)``.

        The positional map is the same for every sequence and is returned as ``(n, n)``;
        the temporal map is ``(batch, n, n)``.
        """
        table = tape.param(self._name)
        n = timestamps.shape[-1]
        if self._kind is BiasKind.POSITIONAL:
            indices = positional_indices(n, self._size)
        else:
            indices = temporal_indices(timestamps, self._time_scale, self._size)
        return tape.gather_lower(table, indices, mask_value, tag="bias")

    def table(self, store: ParamStore) -> np.ndarray:
        """Current table values."""
        return store[self._name].value.copy()
