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


"""Test the reverse-mode tape."""

import unittest

from test import FuxiRecTestCase

import numpy as np
from hypothesis import given, settings, strategies as st

from fuxi_rec.exceptions import FuxiRecError, NonFiniteError, ShapeMismatchError
from fuxi_rec.numerics import KernelCounter, ParamStore, Tape, relative_error


def _weighted_loss(build, values, weights, record=True):
    tape = Tape(record=record)
    leaves = [tape.leaf(value) for value in values]
    out = build(tape, *leaves)
    return tape, leaves, tape.sum(tape.mul(out, tape.constant(weights)))


def max_gradient_error(build, values, seed=0, h=1e-5, floor=1e-3):
    """Worst relative error between tape gradients and central differences of
    ``sum(build(...) * w)`` for a fixed random ``w``."""
    values = [np.array(value, dtype=np.float64) for value in values]
    shape_tape = Tape(record=False)
    shape = build(shape_tape, *[shape_tape.constant(value) for value in values]).shape
    weights = np.random.default_rng(seed).normal(size=shape)

    tape, leaves, loss = _weighted_loss(build, values, weights)
    tape.backward(loss)
    worst = 0.0
    for value, leaf in zip(values, leaves):
        analytic = leaf.grad if leaf.grad is not None else np.zeros_like(value)
        for index in np.ndindex(*value.shape):
            original = value[index]
            value[index] = original + h
            plus = float(_weighted_loss(build, values, weights, record=False)[2].value)
            value[index] = original - h
            minus = float(_weighted_loss(build, values, weights, record=False)[2].value)
            value[index] = original
            numeric = (plus - minus) / (2.0 * h)
            worst = max(worst, relative_error(float(analytic[index]), numeric, floor))
    return worst


def op_cases(rng, rows, cols):
    """Every differentiable tape operation on random operands of the given size."""
    x = rng.normal(size=(rows, cols))
    y = rng.normal(size=(rows, cols))
    row = rng.normal(size=cols)
    keep = rng.random((rows, cols)) < 0.6
    table = rng.normal(size=(5, cols))
    indices = rng.integers(0, 5, size=rows)
    candidates = rng.integers(0, 5, size=(rows, 3))
    lower = rng.integers(0, 4, size=(cols, cols))
    weights = (rng.random(rows) < 0.7).astype(float)
    weights[0] = 1.0
    cases = [
        ("add", lambda t, a, b: t.add(a, b), [x, row]),
        ("sub", lambda t, a, b: t.sub(a, b), [x, y]),
        ("mul", lambda t, a, b: t.mul(a, b), [x, row]),
        ("scale", lambda t, a: t.scale(a, -1.7), [x]),
        ("add_scalar", lambda t, a: t.add_scalar(a, 0.3), [x]),
        ("silu", lambda t, a: t.silu(a), [x]),
        ("sigmoid", lambda t, a: t.sigmoid(a), [x]),
        ("softplus", lambda t, a: t.softplus(a), [x]),
        ("exp", lambda t, a: t.exp(a), [0.5 * x]),
        ("log", lambda t, a: t.log(a), [np.abs(x) + 0.5]),
        ("sin", lambda t, a: t.sin(a), [x]),
        ("mask", lambda t, a: t.mask(a, keep, 0.0), [x]),
        ("matmul", lambda t, a, b: t.matmul(a, b), [x, rng.normal(size=(cols, 3))]),
        ("transpose", lambda t, a: t.transpose(a), [x]),
        ("swapaxes", lambda t, a: t.swapaxes(a, 0, 1), [x]),
        ("reshape", lambda t, a: t.reshape(a, (rows * cols,)), [x]),
        ("concat", lambda t, a, b: t.concat([a, b], axis=-1), [x, y]),
        ("rmsnorm", lambda t, a, g: t.rmsnorm(a, g), [x + 0.5 * np.sign(x), row]),
        ("gather", lambda t, a: t.gather(a, indices), [table]),
        ("gather_lower", lambda t, a: t.gather_lower(a, lower), [rng.normal(size=4)]),
        (
            "candidate_scores",
            lambda t, a, b: t.candidate_scores(a, b, candidates),
            [x, table],
        ),
    ]
    if cols >= 2:
        cases.append(
            ("sampled_softmax_loss", lambda t, a: t.sampled_softmax_loss(a, weights), [x])
        )
    return cases


class TestTape(FuxiRecTestCase):
    """Tape tests."""

    @settings(max_examples=15, deadline=None)
    @given(
        rows=st.integers(min_value=1, max_value=8),
        cols=st.integers(min_value=1, max_value=8),
        seed=st.integers(min_value=0, max_value=2**16),
    )
    def test_every_op_matches_finite_differences(self, rows, cols, seed):
        """Reverse-mode gradients of every op agree with central differences."""
        rng = np.random.default_rng(seed)
        for name, build, values in op_cases(rng, rows, cols):
            with self.subTest(op=name):
                self.assertLess(max_gradient_error(build, values, seed), 1e-5)

    def test_matmul_gradient(self):
        """A 3x4 by 4x2 product at a finer step."""
        rng = np.random.default_rng(11)
        values = [rng.normal(size=(3, 4)), rng.normal(size=(4, 2))]
        error = max_gradient_error(lambda t, a, b: t.matmul(a, b), values, h=1e-6)
        self.assertLess(error, 1e-6)

    def test_silu_gradient(self):
        """SiLU at a finer step."""
        values = [np.linspace(-4.0, 4.0, 12).reshape(3, 4)]
        self.assertLess(max_gradient_error(lambda t, a: t.silu(a), values, h=1e-6), 1e-6)

    def test_param_gradient_accumulates(self):
        """Gradients of stored parameters land in the store and add up across passes."""
        store = ParamStore()
        store.add("w", np.array([[1.0, 2.0], [3.0, 4.0]]))
        x = np.array([[1.0, -1.0]])
        for passes in (1, 2):
            tape = Tape(store)
            tape.backward(tape.sum(tape.matmul(tape.constant(x), tape.param("w"))))
            np.testing.assert_array_equal(store["w"].grad, passes * np.array([[1, 1], [-1, -1]]))
        store.zero_grad()
        self.assertFalse(store["w"].grad.any())

    def test_pinned_rows_get_no_gradient(self):
        """A pinned table row stays at zero gradient even when gathered."""
        store = ParamStore()
        store.add("table", np.ones((3, 2)), pinned_rows=(0,))
        tape = Tape(store)
        tape.backward(tape.sum(tape.gather(tape.param("table"), np.array([0, 1, 0]))))
        np.testing.assert_array_equal(store["table"].grad, [[0, 0], [1, 1], [0, 0]])
        np.testing.assert_array_equal(store["table"].value[0], [0, 0])

    def test_backward_needs_scalar(self):
        """Only a scalar output can be differentiated."""
        tape = Tape()
        with self.assertRaises(ShapeMismatchError):
            tape.backward(tape.silu(tape.leaf(np.ones(3))))

    def test_backward_without_recording(self):
        """An inference tape has no backward pass."""
        tape = Tape(record=False)
        out = tape.sum(tape.leaf(np.ones(3)))
        self.assertEqual(tape.num_nodes, 0)
        with self.assertRaises(FuxiRecError):
            tape.backward(out)

    def test_non_finite_raises(self):
        """Overflow raises at the producing op unless checking is off."""
        with np.errstate(over="ignore"):
            with self.assertRaises(NonFiniteError):
                Tape().exp(Tape().leaf(np.array([1000.0])))
            out = Tape(check_finite=False).exp(Tape().leaf(np.array([1000.0])))
        self.assertTrue(np.isinf(out.value).all())

    def test_unknown_param(self):
        """Unknown names and store-less tapes are rejected."""
        with self.assertRaises(FuxiRecError):
            Tape().param("w")
        with self.assertRaises(FuxiRecError):
            Tape(ParamStore()).param("w")

    def test_counter(self):
        """Matmul multiplies and gathers are tallied by tag."""
        counter = KernelCounter()
        tape = Tape(counter=counter, record=False)
        tape.matmul(tape.constant(np.ones((2, 3, 4))), tape.constant(np.ones((4, 5))), term="x")
        tape.gather_lower(tape.constant(np.arange(3.0)), np.zeros((4, 4), dtype=int), tag="b")
        self.assertEqual(counter.multiplies, {"x": 2 * 3 * 4 * 5})
        self.assertEqual(counter.gathers, {"b": 10})
        counter.reset()
        self.assertEqual(counter.total_multiplies(), 0)

    def test_forward_is_deterministic(self):
        """The same inputs give bit-identical values."""
        rng = np.random.default_rng(5)
        x, w = rng.normal(size=(4, 6)), rng.normal(size=(6, 6))

        def run():
            tape = Tape(record=False)
            hidden = tape.silu(tape.matmul(tape.constant(x), tape.constant(w)))
            return tape.rmsnorm(hidden, tape.constant(np.ones(6))).value

        np.testing.assert_array_equal(run(), run())


if __name__ == "__main__":
    unittest.main()
