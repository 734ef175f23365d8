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


"""Test the finite-difference gradient check."""

import unittest

from test import FuxiRecTestCase

import numpy as np

from fuxi_rec.exceptions import NonFiniteError
from fuxi_rec.numerics import ParamStore, Tape, grad_check, relative_error


class TestGradientCheck(FuxiRecTestCase):
    """Gradient check tests."""

    def setUp(self):
        super().setUp()
        rng = np.random.default_rng(17)
        self.x = rng.normal(size=(5, 3))
        self.y = rng.normal(size=(5, 2))
        self.store = ParamStore()
        self.store.add("W", rng.normal(size=(3, 2)))

    def _square_loss(self, with_grad):
        tape = Tape(self.store)
        diff = tape.sub(tape.matmul(tape.constant(self.x), tape.param("W")), tape.constant(self.y))
        loss = tape.sum(tape.mul(diff, diff))
        if with_grad:
            tape.backward(loss)
        return float(loss.value)

    def test_linear_square_loss(self):
        """A quadratic loss is differenced exactly up to rounding."""
        result = grad_check(self._square_loss, self.store, h=1e-4, floor=1e-2)
        self.assertLess(result.max_relative_error, 1e-8)
        self.assertEqual(result.num_checked, 6)
        self.assertEqual(list(result.errors), ["W"])
        # the check leaves values and gradients as it found them
        self.assertFalse(self.store["W"].grad.any())

    def test_matches_closed_form_gradient(self):
        """The tape gradient equals ``2 xᵀ (x W - y)``."""
        self._square_loss(True)
        expected = 2.0 * self.x.T @ (self.x @ self.store["W"].value - self.y)
        np.testing.assert_allclose(self.store["W"].grad, expected, rtol=1e-12, atol=1e-12)

    def test_frozen_parameter_skipped(self):
        """A parameter that is not trainable is reported as skipped."""
        self.store.add("frozen", np.ones(2), trainable=False)
        result = grad_check(self._square_loss, self.store, h=1e-4, floor=1e-2)
        self.assertEqual(result.skipped, ["frozen"])
        self.assertNotIn("frozen", result.errors)

    def test_restrict_to_names(self):
        """Only the named parameters are checked."""
        self.store.add("unused", np.ones(4))
        result = grad_check(self._square_loss, self.store, names=["unused"])
        self.assertEqual(result.num_checked, 4)
        self.assertEqual(result.max_relative_error, 0.0)

    def test_non_finite_loss(self):
        """A NaN loss aborts the check."""
        with self.assertRaises(NonFiniteError):
            grad_check(lambda with_grad: float("nan"), self.store)

    def test_relative_error(self):
        """Relative error uses the larger magnitude, floored."""
        self.assertAlmostEqual(relative_error(1.0, 1.1, 1e-5), 0.1 / 1.1)
        self.assertAlmostEqual(relative_error(0.0, 1e-9, 1e-5), 1e-4)


if __name__ == "__main__":
    unittest.main()
