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

"""A sequence model abstract class providing validated forward and backward passes over
batched item sequences."""

from abc import ABC, abstractmethod
from typing import NamedTuple, Optional, Tuple

import numpy as np

from ..exceptions import ConfigurationError, ShapeMismatchError


class TrainingBatch(NamedTuple):
    """Inputs and candidates of one training step.

    ``candidates[..., 0]`` is the target at each position and the rest are sampled
    negatives; positions whose target is 0 are padding and carry no loss.
    """

    items: np.ndarray
    timestamps: np.ndarray
    targets: np.ndarray
    candidates: np.ndarray


class NeuralNetwork(ABC):
    """Abstract next-item model. Subclasses implement ``_forward`` and ``_backward``; the
    public methods validate shapes and accept a single sequence as a batch of one.
    """

    def __init__(self, item_count: int, max_len: int) -> None:
        """
        Args:
            item_count: number of real items; item 0 is padding.
            max_len: fixed sequence length.

        Raises:
            ConfigurationError: Invalid parameter values.
        """
        if item_count < 1:
            raise ConfigurationError(f"Number of items must be positive: {item_count}!")
        if max_len < 1:
            raise ConfigurationError(f"Sequence length must be positive: {max_len}!")
        self._item_count = item_count
        self._max_len = max_len

    @property
    def item_count(self) -> int:
        """Returns the number of real items."""
        return self._item_count

    @property
    def max_len(self) -> int:
        """Returns the fixed sequence length."""
        return self._max_len

    @property
    @abstractmethod
    def num_weights(self) -> int:
        """Returns the number of trainable scalars."""
        raise NotImplementedError

    def _validate_input(
        self, items: np.ndarray, timestamps: np.ndarray
    ) -> Tuple[np.ndarray, np.ndarray, bool]:
        items_ = np.asarray(items, dtype=np.int64)
        times_ = np.asarray(timestamps, dtype=np.int64)
        if items_.shape != times_.shape:
            raise ShapeMismatchError(
                f"items {items_.shape} and timestamps {times_.shape} differ in shape"
            )
        single = items_.ndim == 1
        if single:
            items_, times_ = items_[None, :], times_[None, :]
        if items_.ndim != 2 or items_.shape[1] != self._max_len:
            raise ShapeMismatchError(
                f"expected sequences of length {self._max_len}, got shape {items_.shape}"
            )
        if items_.size and (items_.min() < 0 or items_.max() > self._item_count):
            raise ShapeMismatchError(f"item index out of range [0, {self._item_count}]")
        return items_, times_, single

    def forward(self, items: np.ndarray, timestamps: np.ndarray) -> np.ndarray:
        """Forward pass of the network.

        Args:
            items: ``(n,)`` or ``(batch, n)`` item indices, 0 at padding.
            timestamps: same shape, integer seconds.

        Returns:
            Final hidden states of shape ``(n, d)`` or ``(batch, n, d)``.
        """
        items_, times_, single = self._validate_input(items, timestamps)
        output = self._forward(items_, times_)
        return output[0] if single else output

    @abstractmethod
    def _forward(self, items: np.ndarray, timestamps: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def backward(self, batch: TrainingBatch) -> float:
        """Backward pass of the network.

        Accumulates the gradient of the sampled softmax loss into the parameter
        store, after clearing it.

        Returns:
            The loss.
        """
        items_, times_, single = self._validate_input(batch.items, batch.timestamps)
        targets = np.asarray(batch.targets)
        candidates = np.asarray(batch.candidates)
        if single:
            targets, candidates = targets[None], candidates[None]
        if targets.shape != items_.shape or candidates.shape[:-1] != items_.shape:
            raise ShapeMismatchError(
                f"targets {targets.shape} / candidates {candidates.shape} do not match "
                f"items {items_.shape}"
            )
        return self._backward(TrainingBatch(items_, times_, targets, candidates))

    @abstractmethod
    def _backward(self, batch: TrainingBatch) -> float:
        raise NotImplementedError

    def score_last(
        self, items: np.ndarray, timestamps: np.ndarray, lengths: Optional[np.ndarray] = None
    ) -> np.ndarray:
        """Scores of every item, padding column included, after each sequence's last real item.

        Returns:
            ``(batch, item_count + 1)``.
        """
        items_, times_, _ = self._validate_input(items, timestamps)
        if lengths is None:
            lengths = np.count_nonzero(items_, axis=1)
        lengths = np.atleast_1d(np.asarray(lengths, dtype=np.int64))
        if np.any(lengths < 1) or np.any(lengths > self._max_len):
            raise ShapeMismatchError("every sequence needs between 1 and max_len real items")
        return self._score_last(items_, times_, lengths)

    @abstractmethod
    def _score_last(
        self, items: np.ndarray, timestamps: np.ndarray, lengths: np.ndarray
    ) -> np.ndarray:
        raise NotImplementedError
