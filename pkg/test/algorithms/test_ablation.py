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


"""Test bias function and attention map sweeps."""

import csv
import os
import unittest

from test import FuxiRecTestCase

from ddt import ddt, data

from fuxi_rec.algorithms import (
    MAP_ABLATIONS,
    AblationRun,
    TrainerConfig,
    ablation_matrix,
    run_ablation,
    valid_map_ablations,
    write_ablation_csv,
)
from fuxi_rec.exceptions import ConfigurationError


@ddt
class TestAblation(FuxiRecTestCase):
    """Ablation sweep tests."""

    def test_matrix_order(self):
        """Functions vary fastest within each map row."""
        matrix = ablation_matrix(["exp", "pow"], ["full", "no-qk"])
        self.assertEqual(
            [(m["bias_function"], m["maps"]) for m in matrix],
            [("exp", "full"), ("pow", "full"), ("exp", "no-qk"), ("pow", "no-qk")],
        )

    def test_matrix_omitted_axes(self):
        """An omitted axis keeps the base model's choice."""
        self.assertEqual(ablation_matrix(), [{"bias_function": None, "maps": None}])
        self.assertEqual(
            [m["maps"] for m in ablation_matrix(maps=valid_map_ablations())],
            ["full", "no-qk", "no-positional", "no-temporal"],
        )

    @data((["cosine"], None), (None, ["no-ffn"]))
    def test_unknown_names(self, axes):
        """Unknown function kinds and map rows are configuration errors."""
        functions, maps = axes
        with self.assertRaises(ConfigurationError):
            ablation_matrix(functions, maps)

    def test_map_rows(self):
        """Only the no-qk row runs the attention-free mixer."""
        modes = {name: row["mode"] for name, row in MAP_ABLATIONS.items()}
        self.assertEqual(modes["no-qk"], "aftm")
        baselines = {modes[n] for n in ("full", "no-positional", "no-temporal")}
        self.assertEqual(baselines, {"qk_baseline"})
        self.assertFalse(MAP_ABLATIONS["no-positional"]["use_positional_map"])
        self.assertFalse(MAP_ABLATIONS["no-temporal"]["use_temporal_map"])

    def test_run_ablation(self):
        """Each configuration trains in its own directory and the sweep writes a table."""
        dataset = self.cyclic_dataset(num_users=16)
        model = self.small_model(item_count=dataset.item_count).config
        trainer_config = TrainerConfig(
            batch_size=8, max_epochs=1, patience=1, cutoffs=(10,), selection_metric="hr@10"
        )
        output_dir = self.make_temp_dir()
        runs = run_ablation(dataset, model, trainer_config, ["exp", "zero"], ["no-qk"], output_dir)
        self.assertEqual([run.name for run in runs], ["exp/no-qk", "zero/no-qk"])
        self.assertTrue(all(not run.diverged for run in runs))
        self.assertTrue(os.path.isdir(os.path.join(output_dir, "00_exp_no-qk")))
        self.assertTrue(os.path.isdir(os.path.join(output_dir, "01_zero_no-qk")))
        with open(os.path.join(output_dir, "ablation.csv"), newline="", encoding="utf8") as file:
            rows = list(csv.DictReader(file))
        self.assertEqual([row["bias_function"] for row in rows], ["exp", "zero"])
        self.assertIn("test_hr@10", rows[0])
        self.assertIn("val_ndcg@10", rows[0])

    def test_base_run_name(self):
        """Without a map row the run keeps the base mixer and is named after it."""
        dataset = self.cyclic_dataset(num_users=8)
        model = self.small_model(item_count=dataset.item_count).config
        trainer_config = TrainerConfig(
            batch_size=8, max_epochs=1, patience=1, cutoffs=(10,), selection_metric="hr@10"
        )
        runs = run_ablation(dataset, model, trainer_config)
        self.assertEqual([run.name for run in runs], ["pow/base"])
        self.assertEqual(runs[0].best_epoch, 1)

    def test_rows(self):
        """Rows prefix metrics by split and leave bookkeeping fields alone."""
        run = AblationRun(
            "exp/full",
            "exp",
            "full",
            3,
            {"epoch": 3, "ndcg@10": 0.5, "mrr": 0.4, "num_users": 9},
            {"epoch": 3, "ndcg@10": 0.25, "mrr": 0.2},
            1.23456,
        )
        row = run.to_row()
        self.assertEqual(row["val_ndcg@10"], 0.5)
        self.assertEqual(row["test_mrr"], 0.2)
        self.assertEqual(row["wall_seconds"], 1.235)
        self.assertNotIn("val_epoch", row)
        self.assertNotIn("test_num_users", row)

    def test_csv_union_of_columns(self):
        """A diverged run without metrics still gets a row."""
        runs = [
            AblationRun("nn/full", "nn", "full", 0, {}, {}, 0.5, diverged=True),
            AblationRun("pow/full", "pow", "full", 2, {"hr@10": 0.5}, {"hr@10": 0.4}, 0.5),
        ]
        path = os.path.join(self.make_temp_dir(), "ablation.csv")
        write_ablation_csv(path, runs)
        with open(path, newline="", encoding="utf8") as file:
            rows = list(csv.DictReader(file))
        self.assertEqual(rows[0]["diverged"], "True")
        self.assertEqual(rows[0]["test_hr@10"], "")
        self.assertEqual(rows[1]["test_hr@10"], "0.4")


if __name__ == "__main__":
    unittest.main()
