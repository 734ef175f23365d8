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


"""Test the sampled softmax loss."""

import math
import unittest

from test import FuxiRecTestCase

import numpy as np
from ddt import ddt, data

from fuxi_rec.exceptions import FuxiRecError, NonFiniteError, ShapeMismatchError
from fuxi_rec.utils.loss_functions import SampledSoftmaxLoss, sampled_softmax_loss


@ddt
class TestSampledSoftmaxLoss(FuxiRecTestCase):
    """Sampled softmax loss tests."""

    def setUp(self):
        super().setUp()
        self.loss = SampledSoftmaxLoss()

    def test_equal_scores(self):
        """A positive tied with one negative costs ``ln 2``."""
        self.assertAlmostEqual(self.loss(np.zeros((1, 2))), math.log(2), places=15)
        self.assertAlmostEqual(float(sampled_softmax_loss(0.0, [0.0])), math.log(2), places=15)

    def test_functional_form(self):
        """``-log(exp(s+) / (exp(s+) + sum exp(s-)))`` per position."""
        rng = np.random.default_rng(0)
        pos, neg = rng.normal(size=(3, 4)), rng.normal(size=(3, 4, 5))
        expected = -np.log(np.exp(pos) / (np.exp(pos) + np.exp(neg).sum(axis=-1)))
        np.testing.assert_allclose(sampled_softmax_loss(pos, neg), expected, rtol=1e-12)
        scores = np.concatenate([pos[..., None], neg], axis=-1)
        self.assertAlmostEqual(self.loss(scores), float(expected.mean()), places=12)

    def test_padding_weights(self):
        """Zero-weight positions do not count, wherever their scores are."""
        scores = np.array([[2.0, 0.0, 1.0], [-50.0, 30.0, 0.0]])
        self.assertAlmostEqual(
            self.loss(scores, np.array([1.0, 0.0])), self.loss(scores[:1]), places=14
        )

    def test_large_scores(self):
        """Scores far beyond the exponent range stay finite."""
        value = self.loss(np.array([[1000.0, 999.0]]))
        self.assertAlmostEqual(value, math.log1p(math.exp(-1.0)), places=12)

    def test_gradient(self):
        """The gradient matches central differences."""
        rng = np.random.default_rng(1)
        scores = rng.normal(size=(2, 3, 4))
        weights = np.array([[1.0, 1.0, 0.0], [1.0, 0.0, 1.0]])
        grad = self.loss.gradient(scores, weights)
        h = 1e-6
        numeric = np.zeros_like(scores)
        for index in np.ndindex(scores.shape):
            up, down = scores.copy(), scores.copy()
            up[index] += h
            down[index] -= h
            numeric[index] = (self.loss(up, weights) - self.loss(down, weights)) / (2 * h)
        np.testing.assert_allclose(grad, numeric, rtol=1e-6, atol=1e-9)
        self.assertFalse(grad[0, 2].any())

    @data(np.zeros((2, 1)), np.zeros(()))
    def test_needs_a_negative(self, scores):
        """Every row needs the positive and at least one negative."""
        with self.assertRaises(ShapeMismatchError):
            self.loss(scores)

    def test_weight_shape(self):
        """One weight per position."""
        with self.assertRaises(ShapeMismatchError):
            self.loss(np.zeros((2, 3)), np.ones(3))
        with self.assertRaises(ShapeMismatchError):
            sampled_softmax_loss(np.zeros(2), np.zeros((3, 4)))

    def test_all_padding(self):
        """A batch of padding has no loss to average."""
        with self.assertRaises(FuxiRecError):
            self.loss(np.zeros((2, 3)), np.zeros(2))

    def test_non_finite(self):
        """NaN scores are reported."""
        with self.assertRaises(NonFiniteError):
            self.loss(np.array([[np.nan, 0.0]]))
        with self.assertRaises(NonFiniteError):
            sampled_softmax_loss(np.array([np.inf]), np.zeros((1, 2)))


if __name__ == "__main__":
    unittest.main()
