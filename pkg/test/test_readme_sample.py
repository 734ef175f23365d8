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


"""
Code inside the test is the training sample from the readme.
If this test fails and code changes are needed here to resolve
the issue then ensure changes are made to readme too.
"""

import unittest

from test import FuxiRecTestCase


class TestReadmeSample(FuxiRecTestCase):
    """Test sample code from readme"""

    def test_readme_sample(self):
        """readme sample test"""
        # pylint: disable=import-outside-toplevel,redefined-builtin
        def print(*args):
            """overloads print to log values"""
            if args:
                self.log.debug(" ".join(str(arg) for arg in args))

        # --- Exact copy of sample code ----------------------------------------

        from fuxi_rec.algorithms import Trainer, TrainerConfig
        from fuxi_rec.datasets import build_sequences, synthetic_cyclic
        from fuxi_rec.neural_networks import ModelConfig, SequentialRecommender

        users = synthetic_cyclic(num_users=50, cycle_length=20, seq_len=8, seed=0)
        dataset = build_sequences(users, max_len=8)

        config = ModelConfig(
            item_count=dataset.item_count,
            max_len=8,
            embed_dim=16,
            num_blocks=1,
            num_negatives=4,
            bias_function="pow",
            learning_rate=0.005,
            seed=0,
        )
        model = SequentialRecommender(config)
        trainer_config = TrainerConfig(max_epochs=2, cutoffs=(1, 10), selection_metric="hr@10")
        result = Trainer(model, dataset, trainer_config).fit()

        print("Best epoch:", result.best_epoch)
        print("Test HR@10: {:0.2f}".format(result.test["hr@10"]))

        # ----------------------------------------------------------------------

        self.assertIn(result.best_epoch, (1, 2))
        self.assertEqual(len(result.history), 2)
        self.assertGreaterEqual(result.test["hr@10"], result.test["hr@1"])
        self.assertLessEqual(result.test["hr@10"], 1.0)


if __name__ == "__main__":
    unittest.main()
