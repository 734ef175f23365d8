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


"""Test the positional and temporal bias matrices against per-entry loops."""

import unittest

from test import FuxiRecTestCase

import numpy as np
from ddt import ddt, data

from fuxi_rec.bias import (
    ADDITIVE_MASK,
    BiasFunctionKind,
    BiasFunctionSpec,
    BiasKind,
    BiasMatrix,
    BucketTable,
    BucketedRelativeBias,
    FunctionalRelativeBias,
    bucketed_rab_positional,
    bucketed_rab_temporal,
    elapsed_time,
    eval_bias_function,
    frab_matrix,
    valid_kinds,
)
from fuxi_rec.exceptions import ConfigurationError, NonFiniteError, ShapeMismatchError
from fuxi_rec.numerics import KernelCounter, ParamStore, Tape, grad_check

DAY = 86_400.0


def random_spec(kind: BiasFunctionKind, rng: np.random.Generator) -> BiasFunctionSpec:
    """A spec of ``kind`` with every parameter moved away from its default."""
    spec = BiasFunctionSpec.default(kind, rng)
    params = {
        name: value + rng.normal(0.0, 0.5, size=value.shape)
        for name, value in spec.params.items()
    }
    return BiasFunctionSpec(kind, params)


def loop_frab(timestamps, spec, time_scale, mask_value):
    """Evaluate the bias function one pair at a time."""
    n = len(timestamps)
    values = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            if j > i:
                values[i, j] = mask_value
            else:
                elapsed = max(0.0, (float(timestamps[i]) - float(timestamps[j])) / time_scale)
                values[i, j] = eval_bias_function(spec, elapsed)
    return values


def loop_positional(n, beta, mask_value):
    """Read ``beta`` one pair at a time."""
    values = np.full((n, n), mask_value)
    for i in range(n):
        for j in range(i + 1):
            values[i, j] = beta[min(i - j, len(beta) - 1)]
    return values


def loop_temporal(timestamps, beta_t, time_scale, mask_value):
    """Bucket every pair's elapsed time one pair at a time."""
    n = len(timestamps)
    values = np.full((n, n), mask_value)
    for i in range(n):
        for j in range(i + 1):
            elapsed = max(0.0, (float(timestamps[i]) - float(timestamps[j])) / time_scale)
            bucket = min(int(np.floor(np.log2(1.0 + elapsed))), len(beta_t) - 1)
            values[i, j] = beta_t[bucket]
    return values


@ddt
class TestFunctionalBiasMatrix(FuxiRecTestCase):
    """Functional relative bias tests."""

    def test_matches_loop_for_every_kind(self):
        """Vectorized construction equals the per-entry loop for random inputs."""
        rng = np.random.default_rng(2026)
        kinds = [BiasFunctionKind.parse(name) for name in valid_kinds()]
        for trial in range(100):
            kind = kinds[trial % len(kinds)]
            n = int(rng.integers(1, 65))
            timestamps = np.sort(rng.integers(0, 120 * int(DAY), size=n))
            spec = random_spec(kind, rng)
            with self.subTest(trial=trial, kind=kind.value, n=n):
                matrix = frab_matrix(timestamps, spec, DAY)
                self.assertEqual(matrix.values.shape, (n, n))
                self.assertTrue(matrix.is_causal())
                np.testing.assert_allclose(
                    matrix.values, loop_frab(timestamps, spec, DAY, 0.0), rtol=0, atol=1e-12
                )

    def test_unsorted_timestamps_clamp(self):
        """An earlier timestamp later in the sequence counts as no elapsed time."""
        spec = BiasFunctionSpec.pow(2.0, 1.0)
        matrix = frab_matrix(np.array([5 * DAY, 0.0]), spec, DAY)
        self.assertAlmostEqual(matrix.values[1, 0], 2.0, places=14)

    def test_equal_timestamps(self):
        """Without elapsed time every kept power-law entry is ``a``."""
        matrix = frab_matrix(np.full(6, 1e9), BiasFunctionSpec.pow(1.0, 1.0), DAY)
        np.testing.assert_allclose(matrix.kept(), 1.0, rtol=0, atol=1e-15)
        self.assertTrue(np.all(np.triu(matrix.values, 1) == 0.0))

    def test_three_days(self):
        """``1.5 * (1 + 3) ** -0.5`` three days after the first event."""
        matrix = frab_matrix(np.array([0.0, 3 * DAY]), BiasFunctionSpec.pow(1.5, 0.5), DAY)
        self.assertAlmostEqual(matrix.values[1, 0], 0.75, places=12)
        self.assertAlmostEqual(matrix.values[1, 1], 1.5, places=12)
        self.assertEqual(matrix.values[0, 1], 0.0)

    def test_zero_kind(self):
        """The zero function removes the temporal map."""
        matrix = frab_matrix(np.arange(10) * DAY, BiasFunctionSpec.default("zero"), DAY)
        self.assertFalse(matrix.values.any())

    def test_additive_mask(self):
        """Maps added to logits are masked with a large negative value."""
        spec = BiasFunctionSpec.default("pow")
        matrix = frab_matrix(np.arange(4) * DAY, spec, DAY, ADDITIVE_MASK)
        self.assertTrue(matrix.is_causal())
        self.assertEqual(matrix.values[0, 3], ADDITIVE_MASK)

    def test_no_gathers(self):
        """Closed forms are evaluated without a single table read."""
        rng = np.random.default_rng(5)
        timestamps = np.sort(rng.integers(0, int(30 * DAY), size=64))
        for name in valid_kinds():
            if name == "bucket":
                continue
            counter = KernelCounter()
            frab_matrix(timestamps, BiasFunctionSpec.default(name, rng), DAY, counter=counter)
            self.assertEqual(counter.total_gathers(), 0, name)

    def test_bucket_kind_gathers(self):
        """The bucket kind reads its table once per kept entry."""
        counter = KernelCounter()
        timestamps = np.arange(64) * DAY
        frab_matrix(timestamps, BiasFunctionSpec.default("bucket"), DAY, counter=counter)
        self.assertEqual(counter.total_gathers(), 64 * 65 // 2)
        self.assertEqual(counter.total_gathers(), 2080)

    @data(0.0, -DAY)
    def test_bad_time_scale(self, time_scale):
        """Elapsed time needs a positive unit."""
        with self.assertRaises(ConfigurationError):
            frab_matrix(np.arange(3), BiasFunctionSpec.default("pow"), time_scale)

    def test_non_finite_parameter(self):
        """A NaN parameter is refused before any evaluation."""
        spec = BiasFunctionSpec(BiasFunctionKind.EXP, {"a": np.inf, "b": 0.0})
        with self.assertRaises(NonFiniteError):
            frab_matrix(np.arange(3), spec, DAY)


@ddt
class TestBucketedBiasMatrix(FuxiRecTestCase):
    """Bucketed relative bias tests."""

    def test_positional_direct_indexing(self):
        """Row ``i`` reads ``beta[i - j]``."""
        matrix = bucketed_rab_positional(3, BucketTable(np.array([1.0, 2.0, 3.0])))
        np.testing.assert_array_equal(matrix.values[2], [3.0, 2.0, 1.0])
        np.testing.assert_array_equal(matrix.values[0], [1.0, 0.0, 0.0])
        self.assertIs(matrix.kind, BiasKind.POSITIONAL)

    def test_positional_zero_table(self):
        """An all-zero table removes the positional map."""
        matrix = bucketed_rab_positional(8, BucketTable(np.zeros(8)))
        self.assertFalse(matrix.values.any())

    @data((5, 3), (16, 16), (33, 64))
    def test_positional_matches_loop(self, case):
        """Distances past the table end read its last entry."""
        n, d_rab = case
        beta = np.random.default_rng(n).normal(size=d_rab)
        matrix = bucketed_rab_positional(n, BucketTable(beta), ADDITIVE_MASK)
        np.testing.assert_array_equal(matrix.values, loop_positional(n, beta, ADDITIVE_MASK))

    def test_temporal_matches_loop(self):
        """Log2 bucketing of seconds equals the per-entry loop."""
        rng = np.random.default_rng(8)
        for _ in range(20):
            n = int(rng.integers(1, 65))
            timestamps = np.sort(rng.integers(0, 10**8, size=n))
            table = BucketTable(np.zeros(n), rng.normal(size=128), time_scale=1.0)
            matrix = bucketed_rab_temporal(timestamps, table)
            np.testing.assert_array_equal(
                matrix.values, loop_temporal(timestamps, table.beta_t, 1.0, 0.0)
            )

    def test_temporal_buckets(self):
        """No elapsed time is bucket 0; seven units is bucket 3."""
        table = BucketTable(np.zeros(2), np.arange(128, dtype=float), time_scale=2.0)
        matrix = bucketed_rab_temporal(np.array([0.0, 0.0, 14.0]), table)
        self.assertEqual(matrix.values[1, 0], 0.0)
        self.assertEqual(matrix.values[2, 0], 3.0)

    def test_temporal_gathers(self):
        """The bucketed temporal path reads ``n(n+1)/2`` table entries."""
        counter = KernelCounter()
        table = BucketTable(np.zeros(64), np.ones(128), time_scale=DAY)
        bucketed_rab_temporal(np.arange(64) * DAY, table, counter=counter)
        self.assertEqual(counter.gathers, {"bias": 2080})

    def test_bad_tables(self):
        """Tables need at least one entry and a positive time scale."""
        with self.assertRaises(ConfigurationError):
            BucketTable(np.zeros(0))
        with self.assertRaises(ConfigurationError):
            BucketTable(np.zeros(2), np.zeros(4), time_scale=0.0)

    def test_matrix_validation(self):
        """A bias matrix must be square and finite where kept."""
        with self.assertRaises(ShapeMismatchError):
            BiasMatrix(3, np.zeros((3, 2)), BiasKind.TEMPORAL)
        values = np.zeros((2, 2))
        values[1, 0] = np.nan
        with self.assertRaises(NonFiniteError):
            BiasMatrix(2, values, BiasKind.TEMPORAL)
        values = np.zeros((2, 2))
        values[0, 1] = 1.0
        self.assertFalse(BiasMatrix(2, values, BiasKind.TEMPORAL).is_causal())

    def test_elapsed_time(self):
        """Elapsed time is clamped at zero and scaled."""
        gaps = elapsed_time(np.array([0.0, 10.0, 4.0]), 2.0)
        np.testing.assert_array_equal(gaps, [[0, 0, 0], [5, 0, 3], [2, 0, 0]])


@ddt
class TestBiasGradients(FuxiRecTestCase):
    """Gradients through the learnable bias modules."""

    def setUp(self):
        super().setUp()
        rng = np.random.default_rng(41)
        self.timestamps = np.sort(rng.uniform(0.0, 10 * DAY, size=(2, 6)), axis=1)
        self.weights = rng.normal(size=(2, 6, 6))

    def _check(self, module, store):
        def closure(with_grad):
            tape = Tape(store)
            bias = module.forward(tape, self.timestamps, 0.0)
            loss = tape.sum(tape.mul(bias, tape.constant(self.weights)))
            if with_grad:
                tape.backward(loss)
            return float(loss.value)

        return grad_check(closure, store, h=1e-6, floor=1e-4)

    @data("pow", "exp", "log", "linear", "mixed", "nn")
    def test_functional_gradients(self, name):
        """Parameter gradients of the functional bias match finite differences."""
        module = FunctionalRelativeBias("block0.frab", BiasFunctionKind.parse(name), DAY)
        store = ParamStore()
        module.register(store, np.random.default_rng(4))
        result = self._check(module, store)
        self.assertLess(result.max_relative_error, 1e-4)
        self.assertEqual(set(result.errors), set(module.parameter_names.values()))

    def test_bucket_table_gradient(self):
        """Each table entry receives the weights of the pairs that read it."""
        module = BucketedRelativeBias("block0.rab.beta", BiasKind.POSITIONAL, 6)
        store = ParamStore()
        module.register(store)
        result = self._check(module, store)
        self.assertLess(result.max_relative_error, 1e-6)
        # the positional map is shared, so it broadcasts over the batch
        tape = Tape(store)
        bias = module.forward(tape, self.timestamps, 0.0)
        self.assertEqual(bias.shape, (6, 6))

    def test_spec_reads_store(self):
        """The module reports its function with the stored values."""
        module = FunctionalRelativeBias("block1.frab", BiasFunctionKind.POW, DAY)
        store = ParamStore()
        module.register(store)
        self.assertEqual(
            sorted(module.parameter_names.values()), ["block1.frab.pow.a", "block1.frab.pow.b_raw"]
        )
        store["block1.frab.pow.a"].value[...] = 3.0
        spec = module.spec(store)
        self.assertEqual(spec.kind, BiasFunctionKind.POW)
        self.assertAlmostEqual(spec.effective()["a"], 3.0)
        self.assertAlmostEqual(spec.effective()["b"], 1.0, places=12)


if __name__ == "__main__":
    unittest.main()
