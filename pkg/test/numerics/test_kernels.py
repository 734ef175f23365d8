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


"""Test dense kernels."""

import unittest

from test import FuxiRecTestCase

import numpy as np
from ddt import data, ddt

from fuxi_rec.exceptions import NonFiniteError, ShapeMismatchError
from fuxi_rec.numerics import (
    RMSNORM_EPS,
    check_finite,
    inverse_softplus,
    log_sum_exp,
    matmul,
    rmsnorm,
    silu,
    silu_grad,
    softmax_row,
    softplus,
)
from fuxi_rec.numerics.kernels import matmul_multiplies


@ddt
class TestKernels(FuxiRecTestCase):
    """Dense kernel tests."""

    def test_matmul_identity(self):
        """Identity times a matrix is the matrix."""
        matrix = np.array([[1.5, -2.0, 0.25], [3.0, 4.0, -1.0]])
        np.testing.assert_array_equal(matmul(np.eye(2), matrix), matrix)

    def test_matmul_hand_arithmetic(self):
        """A 2x2 by 2x1 product."""
        result = matmul(np.array([[1.0, 2.0], [3.0, 4.0]]), np.array([[5.0], [6.0]]))
        np.testing.assert_array_equal(result, [[17.0], [39.0]])

    @data(((2, 3), (4, 2)), ((3,), (3, 2)), ((2, 5, 3), (2, 2)))
    def test_matmul_shape_mismatch(self, shapes):
        """Inner dimensions must agree and operands must be 2-D."""
        a_shape, b_shape = shapes
        with self.assertRaises(ShapeMismatchError):
            matmul(np.ones(a_shape), np.ones(b_shape))

    def test_matmul_non_finite(self):
        """An overflowing product is reported immediately."""
        with self.assertRaises(NonFiniteError):
            matmul(np.full((1, 2), 1e308), np.full((2, 1), 1e308))

    def test_matmul_multiplies(self):
        """Broadcast batches multiply the count."""
        self.assertEqual(matmul_multiplies((3, 4, 5), (5, 2)), 3 * 4 * 5 * 2)
        self.assertEqual(matmul_multiplies((1, 8, 8), (2, 1, 8, 4)), 2 * 8 * 8 * 4)

    def test_silu(self):
        """SiLU at zero and its asymptote."""
        self.assertEqual(silu(np.array(0.0)), 0.0)
        self.assertAlmostEqual(float(silu(np.array(20.0))), 20.0, delta=1e-6)
        self.assertAlmostEqual(float(silu(np.array(-40.0))), 0.0, delta=1e-12)

    def test_silu_grad_matches_difference(self):
        """Analytic SiLU derivative against a central difference."""
        x = np.linspace(-6.0, 6.0, 25)
        h = 1e-6
        numeric = (silu(x + h) - silu(x - h)) / (2 * h)
        np.testing.assert_allclose(silu_grad(x), numeric, rtol=1e-6, atol=1e-9)

    def test_softplus_inverse(self):
        """``inverse_softplus`` undoes ``softplus``."""
        for y in (1e-3, 0.5, 1.0, 7.0):
            self.assertAlmostEqual(float(softplus(inverse_softplus(y))), y, places=12)
        self.assertTrue(np.isfinite(softplus(np.array(1000.0))))

    def test_rmsnorm_constant_row(self):
        """A constant row normalizes to about its sign."""
        for c in (3.0, -0.5):
            out = rmsnorm(np.full(6, c), np.ones(6))
            np.testing.assert_allclose(out, c / np.sqrt(c * c + RMSNORM_EPS), rtol=0, atol=1e-15)

    def test_rmsnorm_zero_row(self):
        """Epsilon keeps a zero row at zero."""
        np.testing.assert_array_equal(rmsnorm(np.zeros((2, 4)), np.ones(4)), np.zeros((2, 4)))

    def test_rmsnorm_gain_shape(self):
        """The gain must match the normalized axis."""
        with self.assertRaises(ShapeMismatchError):
            rmsnorm(np.ones((2, 4)), np.ones(3))

    @data(1, 4, 9)
    def test_softmax_uniform(self, length):
        """A uniform row gives equal probabilities."""
        np.testing.assert_allclose(softmax_row(np.full(length, 2.5)), 1.0 / length, atol=1e-15)

    def test_softmax_outlier(self):
        """A huge entry takes all the mass without overflow."""
        row = np.array([0.0, 1e6, -3.0, 2.0])
        with np.errstate(over="raise"):
            probabilities = softmax_row(row)
            total = log_sum_exp(row)
        self.assertAlmostEqual(float(probabilities[1]), 1.0, places=12)
        self.assertAlmostEqual(float(total), 1e6, places=6)

    def test_softmax_matches_naive(self):
        """Small-magnitude rows agree with exp / sum(exp)."""
        rng = np.random.default_rng(3)
        rows = rng.normal(size=(20, 7))
        naive = np.exp(rows) / np.exp(rows).sum(axis=-1, keepdims=True)
        np.testing.assert_allclose(softmax_row(rows), naive, rtol=0, atol=1e-12)
        np.testing.assert_allclose(softmax_row(rows).sum(axis=-1), 1.0, rtol=0, atol=1e-12)
        np.testing.assert_allclose(
            log_sum_exp(rows), np.log(np.exp(rows).sum(axis=-1)), rtol=0, atol=1e-12
        )

    def test_check_finite(self):
        """NaN and infinity raise with the op name in the diagnostics."""
        values = np.array([1.0, 2.0])
        self.assertIs(check_finite("ok", values), values)
        for bad in (np.nan, np.inf):
            with self.assertRaises(NonFiniteError) as context:
                check_finite("sample", np.array([1.0, bad]))
            self.assertEqual(context.exception.diagnostics["op"], "sample")


if __name__ == "__main__":
    unittest.main()
