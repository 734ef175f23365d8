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

"""Uniform negative sampling with replacement."""

from typing import AbstractSet

import numpy as np

from ..exceptions import ConfigurationError
from ..utils.validation import validate_min


def sample_negatives(
    rng: np.random.Generator, item_count: int, exclude: AbstractSet[int], num_negatives: int
) -> np.ndarray:
    """Draw ``num_negatives`` items uniformly from ``1..item_count`` outside ``exclude``.

    Duplicates among the draws are allowed.

    Raises:
        ConfigurationError: if ``num_negatives < 1`` or every item is excluded.
    """
    validate_min("num_negatives", num_negatives, 1)
    excluded = np.fromiter((e for e in exclude if 1 <= e <= item_count), dtype=np.int64)
    if item_count <= len(set(excluded.tolist())):
        raise ConfigurationError(
            f"cannot sample negatives: all {item_count} items are excluded"
        )
    draws = rng.integers(1, item_count + 1, size=num_negatives)
    clash = np.isin(draws, excluded)
    while clash.any():
        draws[clash] = rng.integers(1, item_count + 1, size=int(clash.sum()))
        clash = np.isin(draws, excluded)
    return draws


def sample_negative_matrix(
    rng: np.random.Generator, item_count: int, targets: np.ndarray, num_negatives: int
) -> np.ndarray:
    """Draw negatives for every target position at once.

    Returns an array of shape ``targets.shape + (num_negatives,)`` where no entry
    equals the target at its position. Padding targets (0) never clash.

    Raises:
        ConfigurationError: if ``num_negatives < 1`` or ``item_count < 2``.
    """
    validate_min("num_negatives", num_negatives, 1)
    validate_min("item_count", item_count, 2)
    targets = np.asarray(targets)[..., None]
    draws = rng.integers(1, item_count + 1, size=targets.shape[:-1] + (num_negatives,))
    clash = draws == targets
    while clash.any():
        draws[clash] = rng.integers(1, item_count + 1, size=int(clash.sum()))
        clash = draws == targets
    return draws
