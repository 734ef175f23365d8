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


"""Test leave-one-out sequences, negative sampling and the synthetic log."""

import unittest

from test import FuxiRecTestCase

import numpy as np
from ddt import data, ddt

from fuxi_rec.datasets import (
    PADDING_ITEM,
    RawInteraction,
    build_sequences,
    sample_negative_matrix,
    sample_negatives,
    synthetic_cyclic,
)
from fuxi_rec.exceptions import ConfigurationError


def _user(user_id, items, start=1000):
    return [RawInteraction(user_id, item, 5.0, start + 60 * k) for k, item in enumerate(items)]


@ddt
class TestSequences(FuxiRecTestCase):
    """Sequence building tests."""

    def test_leave_one_out(self):
        """Seven interactions with n = 5."""
        dataset = build_sequences([_user(1, [11, 12, 13, 14, 15, 16, 17])], 5)
        train, validation, test = dataset.train, dataset.validation, dataset.test
        np.testing.assert_array_equal(train.items[0], [11, 12, 13, 14, 15])
        np.testing.assert_array_equal(train.targets[0], [12, 13, 14, 15, 16])
        self.assertEqual(train.lengths[0], 5)
        self.assertEqual(validation.targets[0], 16)
        np.testing.assert_array_equal(validation.items[0], train.items[0])
        np.testing.assert_array_equal(test.items[0], [12, 13, 14, 15, 16])
        self.assertEqual(test.targets[0], 17)
        self.assertEqual(dataset.item_count, 17)

    def test_three_interactions(self):
        """The shortest usable history trains on a single position."""
        dataset = build_sequences([_user(4, [3, 1, 2])], 4)
        self.assertEqual(dataset.train.lengths[0], 1)
        np.testing.assert_array_equal(dataset.train.items[0], [3, 0, 0, 0])
        np.testing.assert_array_equal(dataset.train.targets[0], [1, 0, 0, 0])
        np.testing.assert_array_equal(dataset.test.items[0], [3, 1, 0, 0])
        self.assertEqual(dataset.validation.targets[0], 1)
        self.assertEqual(dataset.test.targets[0], 2)

    def test_padding_and_chronology(self):
        """Padding is trailing and timestamps never decrease over the real prefix."""
        users = synthetic_cyclic(num_users=30, cycle_length=7, seq_len=9, seed=4)
        dataset = build_sequences(users, 12)
        for split in (dataset.train, dataset.test):
            for row in range(len(split)):
                sequence = split.sequence(row)
                length = sequence.true_length
                self.assertTrue(np.all(sequence.items[:length] != PADDING_ITEM))
                self.assertTrue(np.all(sequence.items[length:] == PADDING_ITEM))
                self.assertTrue(np.all(np.diff(sequence.timestamps[:length]) >= 0))

    def test_test_target_not_trained(self):
        """The final interaction never appears as a training target position."""
        dataset = build_sequences([_user(1, [5, 6, 7, 8, 9]), _user(2, [9, 8, 7])], 6)
        for row in range(2):
            self.assertNotIn(dataset.test.targets[row], dataset.train.targets[row])

    @data(1, 0, -3)
    def test_bad_length(self, max_len):
        """n must be at least 2."""
        with self.assertRaises(ConfigurationError):
            build_sequences([_user(1, [1, 2, 3])], max_len)

    def test_short_user(self):
        """Two interactions leave no target for every split."""
        with self.assertRaises(ConfigurationError):
            build_sequences([_user(1, [1, 2])], 4)

    def test_max_elapsed(self):
        """The widest gap inside any input window, padding ignored."""
        dataset = build_sequences(
            [_user(1, [11, 12, 13, 14, 15, 16, 17]), _user(2, [3, 1, 2], start=0)], 5
        )
        self.assertEqual(dataset.train.max_elapsed(), 240)
        self.assertEqual(dataset.test.max_elapsed(), 240)
        self.assertEqual(dataset.max_elapsed(), 240)
        self.assertEqual(dataset.test.subset([1]).max_elapsed(), 60)

    def test_subset(self):
        """Rows are selected in the given order."""
        dataset = build_sequences([_user(u, [u, u + 1, u + 2, u + 3]) for u in (1, 2, 3)], 3)
        subset = dataset.train.subset([2, 0])
        np.testing.assert_array_equal(subset.user_ids, [3, 1])
        self.assertEqual(len(subset), 2)
        self.assertEqual(subset.max_len, 3)


class TestNegativeSampling(FuxiRecTestCase):
    """Negative sampling tests."""

    def test_excludes_positive(self):
        """Five draws from 1..10 never hit the excluded item."""
        draws = sample_negatives(np.random.default_rng(0), 10, {3}, 5)
        self.assertEqual(draws.shape, (5,))
        self.assertTrue(np.all((draws >= 1) & (draws <= 10)))
        self.assertNotIn(3, draws)

    def test_deterministic(self):
        """A fixed seed repeats the draws."""
        first = sample_negatives(np.random.default_rng(9), 50, {1, 2}, 20)
        second = sample_negatives(np.random.default_rng(9), 50, {1, 2}, 20)
        np.testing.assert_array_equal(first, second)

    def test_bad_requests(self):
        """No draws, or nothing left to draw from."""
        with self.assertRaises(ConfigurationError):
            sample_negatives(np.random.default_rng(0), 10, {3}, 0)
        with self.assertRaises(ConfigurationError):
            sample_negatives(np.random.default_rng(0), 3, {1, 2, 3}, 1)

    def test_matrix_avoids_targets(self):
        """Every position gets negatives different from its own target."""
        targets = np.array([[1, 2, 0], [2, 1, 2]])
        negatives = sample_negative_matrix(np.random.default_rng(1), 2, targets, 8)
        self.assertEqual(negatives.shape, (2, 3, 8))
        self.assertTrue(np.all(negatives != targets[..., None]))
        self.assertTrue(np.all((negatives >= 1) & (negatives <= 2)))


class TestSyntheticCyclic(FuxiRecTestCase):
    """Synthetic log tests."""

    def test_cycle(self):
        """The next item always follows from the current one, one day later."""
        users = synthetic_cyclic(num_users=20, cycle_length=6, seq_len=15, seed=3)
        self.assertEqual(len(users), 20)
        for user in users:
            for current, following in zip(user, user[1:]):
                self.assertEqual(following.item_id, current.item_id % 6 + 1)
                self.assertEqual(following.timestamp - current.timestamp, 86_400)

    def test_seeded(self):
        """Same seed, same log; another seed, other phases."""
        self.assertEqual(synthetic_cyclic(10, 5, 4, seed=1), synthetic_cyclic(10, 5, 4, seed=1))
        self.assertNotEqual(synthetic_cyclic(10, 5, 4, seed=1), synthetic_cyclic(10, 5, 4, seed=2))


if __name__ == "__main__":
    unittest.main()
