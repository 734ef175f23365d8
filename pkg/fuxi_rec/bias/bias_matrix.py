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

"""Causally masked attention-bias matrices."""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from ..exceptions import NonFiniteError, ShapeMismatchError

# Upper-triangle value for maps used multiplicatively as attention (token mixer).
MULTIPLICATIVE_MASK = 0.0
# Upper-triangle value for maps added to query-key logits.
ADDITIVE_MASK = -1e9


class BiasKind(Enum):
    """What a bias matrix encodes."""

    POSITIONAL = "positional"
    TEMPORAL = "temporal"


@lru_cache(maxsize=32)
def _causal_mask(n: int) -> np.ndarray:
    mask = np.tril(np.ones((n, n), dtype=bool))
    mask.setflags(write=False)
    return mask


def causal_mask(n: int) -> np.ndarray:
    """Read-only ``n x n`` boolean mask, true on and below the diagonal."""
    return _causal_mask(int(n))


def elapsed_time(timestamps: np.ndarray, time_scale: float) -> np.ndarray:
    """``max(0, (t_i - t_j) / time_scale)`` for every pair, over the last axis of ``timestamps``."""
    times = np.asarray(timestamps, dtype=np.float64)
    gaps = (times[..., :, None] - times[..., None, :]) / time_scale
    return np.maximum(gaps, 0.0)


@dataclass
class BiasMatrix:
    """An ``n x n`` bias whose strictly upper triangle holds ``mask_value``."""

    n: int
    values: np.ndarray
    kind: BiasKind
    mask_value: float = MULTIPLICATIVE_MASK

    def __post_init__(self) -> None:
        if self.values.shape != (self.n, self.n):
            raise ShapeMismatchError(
                f"bias matrix has shape {self.values.shape}, expected {(self.n, self.n)}"
            )
        kept = self.values[causal_mask(self.n)]
        if not np.all(np.isfinite(kept)):
            raise NonFiniteError(f"{self.kind.value} bias has non-finite entries")

    def is_causal(self) -> bool:
        """Whether every entry above the diagonal equals the mask value."""
        return bool(np.all(self.values[~causal_mask(self.n)] == self.mask_value))

    def kept(self) -> np.ndarray:
        """Entries on and below the diagonal, row by row."""
        return self.values[causal_mask(self.n)]
