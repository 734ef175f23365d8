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

"""Fixed-length leave-one-out sequences."""

import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence

import numpy as np

from .movielens import RawInteraction
from ..exceptions import ConfigurationError

logger = logging.getLogger(__name__)

PADDING_ITEM = 0


class UserHistory(NamedTuple):
    """A user's full chronological history as arrays."""

    user_id: int
    items: np.ndarray
    timestamps: np.ndarray


@dataclass
class InteractionSequence:
    """One user's items and timestamps, left-aligned with trailing padding."""

    user_id: int
    items: np.ndarray
    timestamps: np.ndarray
    true_length: int


@dataclass
class SplitSequences:
    """The sequences of one split stored as ``(users, n)`` arrays.

    ``targets`` is ``(users, n)`` for the training split, where column ``k`` holds the
    item following input position ``k`` (0 at padding), and ``(users,)`` for the
    evaluation splits, where it holds the held-out item.
    """

    user_ids: np.ndarray
    items: np.ndarray
    timestamps: np.ndarray
    lengths: np.ndarray
    targets: np.ndarray

    def __len__(self) -> int:
        return len(self.user_ids)

    @property
    def max_len(self) -> int:
        """Returns the padded sequence length."""
        return self.items.shape[1]

    def sequence(self, index: int) -> InteractionSequence:
        """Returns row ``index`` as an :class:`InteractionSequence`."""
        return InteractionSequence(
            int(self.user_ids[index]),
            self.items[index],
            self.timestamps[index],
            int(self.lengths[index]),
        )

    def max_elapsed(self) -> int:
        """Largest gap in seconds between two real positions of the same row."""
        rows = self.lengths > 0
        if not np.any(rows):
            return 0
        times = self.timestamps[rows]
        real = np.arange(self.max_len)[None, :] < self.lengths[rows][:, None]
        latest = np.where(real, times, np.iinfo(np.int64).min).max(axis=1)
        earliest = np.where(real, times, np.iinfo(np.int64).max).min(axis=1)
        return int((latest - earliest).max())

    def subset(self, indices: Sequence[int]) -> "SplitSequences":
        """Returns the rows at ``indices`` in the given order."""
        indices = np.asarray(indices, dtype=np.int64)
        return SplitSequences(
            self.user_ids[indices],
            self.items[indices],
            self.timestamps[indices],
            self.lengths[indices],
            self.targets[indices],
        )


@dataclass
class SplitDataset:
    """Train, validation and test sequences built from the same histories."""

    train: SplitSequences
    validation: SplitSequences
    test: SplitSequences
    item_count: int
    user_count: int
    max_len: int
    histories: List[UserHistory]

    def max_elapsed(self) -> int:
        """Largest elapsed time, in seconds, inside any model input."""
        return max(self.train.max_elapsed(), self.test.max_elapsed())


def to_histories(users: Sequence[Sequence[RawInteraction]]) -> List[UserHistory]:
    """Convert per-user interaction lists to arrays."""
    return [
        UserHistory(
            user[0].user_id,
            np.array([r.item_id for r in user], dtype=np.int64),
            np.array([r.timestamp for r in user], dtype=np.int64),
        )
        for user in users
    ]


def _fill(rows: np.ndarray, row: int, values: np.ndarray) -> None:
    rows[row, : len(values)] = values


def build_split(histories: Sequence[UserHistory], max_len: int) -> SplitDataset:
    """:func:`build_sequences` over histories already held as arrays.

    Raises:
        ConfigurationError: if ``max_len < 2`` or a user has fewer than 3 interactions.
    """
    if max_len < 2:
        raise ConfigurationError(f"max_len must be >= 2, was {max_len}")
    num_users = len(histories)
    shape = (num_users, max_len)
    train_items = np.zeros(shape, dtype=np.int64)
    train_times = np.zeros(shape, dtype=np.int64)
    train_targets = np.zeros(shape, dtype=np.int64)
    train_lengths = np.zeros(num_users, dtype=np.int64)
    test_items = np.zeros(shape, dtype=np.int64)
    test_times = np.zeros(shape, dtype=np.int64)
    test_lengths = np.zeros(num_users, dtype=np.int64)
    validation_targets = np.zeros(num_users, dtype=np.int64)
    test_targets = np.zeros(num_users, dtype=np.int64)
    user_ids = np.zeros(num_users, dtype=np.int64)

    item_count = 0
    for row, history in enumerate(histories):
        items, times = history.items, history.timestamps
        count = len(items)
        if count < 3:
            raise ConfigurationError(
                f"user {history.user_id} has {count} interactions; at least 3 are needed"
            )
        user_ids[row] = history.user_id
        item_count = max(item_count, int(items.max()))

        # inputs 1..m-2, shifted targets 2..m-1, keeping the most recent max_len
        start = max(0, count - 2 - max_len)
        _fill(train_items, row, items[start : count - 2])
        _fill(train_times, row, times[start : count - 2])
        _fill(train_targets, row, items[start + 1 : count - 1])
        train_lengths[row] = count - 2 - start
        validation_targets[row] = items[count - 2]

        start = max(0, count - 1 - max_len)
        _fill(test_items, row, items[start : count - 1])
        _fill(test_times, row, times[start : count - 1])
        test_lengths[row] = count - 1 - start
        test_targets[row] = items[count - 1]

    train = SplitSequences(user_ids, train_items, train_times, train_lengths, train_targets)
    validation = SplitSequences(
        user_ids, train_items, train_times, train_lengths, validation_targets
    )
    test = SplitSequences(user_ids, test_items, test_times, test_lengths, test_targets)
    dataset = SplitDataset(
        train, validation, test, item_count, num_users, max_len, list(histories)
    )
    logger.info(
        "Built %s sequences of length %s; mean test prefix %.2f",
        num_users,
        max_len,
        float(test_lengths.mean()) if num_users else 0.0,
    )
    return dataset


def build_sequences(users: Sequence[Sequence[RawInteraction]], max_len: int) -> SplitDataset:
    """Build left-aligned leave-one-out splits.

    For a user with ``m`` interactions the training input is interactions ``1..m-2``
    with targets ``2..m-1``; validation reuses that input with target ``m-1``; the
    test input is ``1..m-1`` with target ``m``. Inputs keep their most recent
    ``max_len`` interactions and pad with item 0 after the last one.

    Raises:
        ConfigurationError: if ``max_len < 2`` or a user has fewer than 3 interactions.
    """
    if max_len < 2:
        raise ConfigurationError(f"max_len must be >= 2, was {max_len}")
    return build_split(to_histories(users), max_len)
