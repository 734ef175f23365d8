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


"""Test run configurations and manifests."""

import json
import os
import unittest
from unittest import mock

from test import FuxiRecTestCase

from ddt import ddt, data

from fuxi_rec.algorithms import TrainerConfig
from fuxi_rec.cli import (
    OUTPUT_ROOT_ENV,
    RunManifest,
    apply_overrides,
    load_run_config,
    output_root,
    packaged_configs,
    resolve_config_path,
    write_json_atomic,
)
from fuxi_rec.exceptions import ConfigurationError, FuxiRecError
from fuxi_rec.neural_networks import ModelConfig


@ddt
class TestRunConfig(FuxiRecTestCase):
    """Run configuration tests."""

    def test_shipped(self):
        """Four configurations ship with the package."""
        self.assertEqual(sorted(packaged_configs()), ["large", "ml20m", "small", "synthetic"])

    @data("small", "large", "ml20m", "synthetic")
    def test_shipped_are_valid(self, name):
        """Every shipped configuration builds its model and trainer settings."""
        config = load_run_config(name)
        model = ModelConfig.from_dict(config["model"])
        trainer = TrainerConfig.from_dict(config["trainer"])
        self.assertEqual(model.num_blocks, 8 if name == "large" else 2)
        self.assertIn(trainer.selection_metric, ("ndcg@10", "hr@1"))

    def test_resolve(self):
        """Names, names with an extension and real paths all resolve."""
        shipped = packaged_configs()["small"]
        self.assertEqual(resolve_config_path("small"), shipped)
        self.assertEqual(resolve_config_path("small.json"), shipped)
        self.assertEqual(resolve_config_path(shipped), shipped)
        with self.assertRaises(ConfigurationError):
            resolve_config_path("medium")

    def test_no_config(self):
        """Without a file every section is empty."""
        self.assertEqual(
            load_run_config(None), {"model": {}, "trainer": {}, "data": {}, "bench": {}}
        )

    @data("{not json", "[1, 2]", '{"optimizer": {}}')
    def test_bad_files(self, text):
        """Invalid JSON, non-objects and unknown sections are rejected."""
        path = os.path.join(self.make_temp_dir(), "bad.json")
        with open(path, "w", encoding="utf8") as file:
            file.write(text)
        with self.assertRaises(ConfigurationError):
            load_run_config(path)

    def test_overrides(self):
        """Set values win, ``None`` leaves the file's value and dotted keys nest."""
        config = load_run_config("small")
        merged = apply_overrides(
            config, "model", {"embed_dim": 64, "seed": None, "mixer.mode": "qk_baseline"}
        )
        self.assertEqual(merged["model"]["embed_dim"], 64)
        self.assertEqual(merged["model"]["seed"], 42)
        self.assertEqual(merged["model"]["mixer"], {"mode": "qk_baseline", "heads": 2})
        self.assertEqual(config["model"]["embed_dim"], 50)
        self.assertEqual(config["model"]["mixer"]["mode"], "aftm")
        created = apply_overrides({}, "bench", {"warmup": 10})
        self.assertEqual(created, {"bench": {"warmup": 10}})

    def test_output_root(self):
        """The flag wins over the environment, which wins over ``./runs``."""
        with mock.patch.dict(os.environ, {OUTPUT_ROOT_ENV: "/tmp/fuxi-runs"}):
            self.assertEqual(output_root(), "/tmp/fuxi-runs")
            self.assertEqual(output_root("elsewhere"), "elsewhere")
        with mock.patch.dict(os.environ, {}, clear=True):
            self.assertEqual(output_root(), "runs")


class TestRunManifest(FuxiRecTestCase):
    """Run manifest tests."""

    def test_lifecycle(self):
        """A manifest is written at start and rewritten with its outcome."""
        path = os.path.join(self.make_temp_dir(), "manifest.json")
        manifest = RunManifest("train", {"model": {"embed_dim": 8}}, seed=3, argv=["train"])
        manifest.write(path)
        self.assertEqual(RunManifest.load(path).status, "running")
        manifest.add_artifact("epoch1.fxb")
        manifest.add_artifact("epoch1.fxb")
        manifest.finalize()
        loaded = RunManifest.load(path)
        self.assertEqual(loaded.status, "succeeded")
        self.assertIsNotNone(loaded.finished_at)
        self.assertEqual(loaded.artifacts, ["epoch1.fxb"])
        self.assertEqual(loaded.seed, 3)
        self.assertEqual(loaded.config_hash, manifest.config_hash)
        self.assertTrue(loaded.source_revision)
        with open(path, encoding="utf8") as file:
            self.assertEqual(json.load(file)["config_hash"], manifest.config_hash)

    def test_config_hash_key_order(self):
        """The hash ignores key order."""
        first = RunManifest("bench", {"a": 1, "b": {"c": 2, "d": 3}})
        second = RunManifest("bench", {"b": {"d": 3, "c": 2}, "a": 1})
        self.assertEqual(first.config_hash, second.config_hash)
        self.assertNotEqual(first.config_hash, RunManifest("bench", {"a": 2}).config_hash)

    def test_no_path(self):
        """Writing needs a path."""
        with self.assertRaises(FuxiRecError):
            RunManifest("describe", {}).write()

    def test_atomic_write(self):
        """Only the target file remains after an atomic write."""
        directory = self.make_temp_dir()
        path = os.path.join(directory, "nested", "metrics.json")
        write_json_atomic(path, {"hr@10": 0.5})
        self.assertEqual(os.listdir(os.path.dirname(path)), ["metrics.json"])
        with open(path, encoding="utf8") as file:
            self.assertEqual(json.load(file), {"hr@10": 0.5})


if __name__ == "__main__":
    unittest.main()
