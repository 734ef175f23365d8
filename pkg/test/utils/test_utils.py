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


"""Test validation, hashing and the global random state."""

import hashlib
import os
import unittest

from test import FuxiRecTestCase

import numpy as np

from fuxi_rec.exceptions import ConfigurationError
from fuxi_rec.utils import (
    algorithm_globals,
    canonical_json,
    config_hash,
    file_hash,
    validate_in_set,
    validate_min,
    validate_range,
)


class TestValidation(FuxiRecTestCase):
    """Validation helper tests."""

    def test_validate_min(self):
        """Values below the minimum are rejected."""
        validate_min("n", 2, 2)
        with self.assertRaises(ConfigurationError):
            validate_min("n", 1, 2)

    def test_validate_range(self):
        """Bounds are inclusive unless the minimum is exclusive."""
        validate_range("p", 0.0, 0.0, 1.0)
        validate_range("p", 1.0, 0.0, 1.0)
        with self.assertRaises(ConfigurationError):
            validate_range("p", 0.0, 0.0, 1.0, exclusive_min=True)
        with self.assertRaises(ConfigurationError):
            validate_range("p", 1.5, 0.0, 1.0)

    def test_validate_in_set(self):
        """Only listed values pass."""
        validate_in_set("dtype", "float64", ("float64", "float32"))
        with self.assertRaises(ConfigurationError) as context:
            validate_in_set("dtype", "float16", ("float64", "float32"))
        self.assertIn("float32", str(context.exception))


class TestHashing(FuxiRecTestCase):
    """Hashing tests."""

    def test_key_order_ignored(self):
        """Dicts hash by content, not insertion order."""
        self.assertEqual(canonical_json({"b": 1, "a": [1, 2]}), '{"a":[1,2],"b":1}')
        self.assertEqual(config_hash({"a": 1, "b": 2}), config_hash({"b": 2, "a": 1}))
        self.assertNotEqual(config_hash({"a": 1}), config_hash({"a": 2}))
        self.assertEqual(len(config_hash({})), 64)

    def test_file_hash(self):
        """Files with equal bytes share a hash."""
        root = self.make_temp_dir()
        paths = [os.path.join(root, name) for name in ("a.bin", "b.bin")]
        for path in paths:
            with open(path, "wb") as file:
                file.write(b"fuxi" * 1000)
        self.assertEqual(file_hash(paths[0]), file_hash(paths[1]))
        self.assertEqual(file_hash(paths[0]), hashlib.sha256(b"fuxi" * 1000).hexdigest())


class TestAlgorithmGlobals(FuxiRecTestCase):
    """Global random state tests."""

    def setUp(self):
        super().setUp()
        self._seed = algorithm_globals.random_seed
        self.addCleanup(setattr, algorithm_globals, "random_seed", self._seed)

    def test_seed_reproduces(self):
        """Setting the seed restarts the stream."""
        algorithm_globals.random_seed = 123
        first = algorithm_globals.random.integers(0, 1000, size=5)
        algorithm_globals.random_seed = 123
        np.testing.assert_array_equal(algorithm_globals.random.integers(0, 1000, size=5), first)

    def test_spawn(self):
        """Spawned streams are reproducible and differ from each other."""
        algorithm_globals.random_seed = 7
        first = [g.integers(0, 2**32, size=4) for g in algorithm_globals.spawn(2)]
        algorithm_globals.random_seed = 7
        second = [g.integers(0, 2**32, size=4) for g in algorithm_globals.spawn(2)]
        np.testing.assert_array_equal(first[0], second[0])
        self.assertFalse(np.array_equal(first[0], first[1]))


if __name__ == "__main__":
    unittest.main()
