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
Algorithms (:mod:`fuxi_rec.algorithms`)

.. currentmodule:: fuxi_rec.algorithms

Algorithms
==========

Training
++++++++
Optimizer and epoch loop.

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   AdamW
   LinearWarmupSchedule
   OptimizerState
   Trainer
   TrainerConfig
   TrainingResult
   train_epoch

Evaluation
++++++++++
Full-ranking metrics.

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   MetricsReport
   evaluate
   metrics_from_ranks
   rank_of_target

Ablations
+++++++++

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   AblationRun
   ablation_matrix
   run_ablation

"""

from .optimizers import AdamW, LinearWarmupSchedule, OptimizerState
from .evaluation import MetricsReport, evaluate, metrics_from_ranks, rank_of_target
from .trainer import Trainer, TrainerConfig, TrainingResult, checkpoint_path, train_epoch
from .ablation import (
    MAP_ABLATIONS,
    AblationRun,
    ablation_matrix,
    run_ablation,
    valid_map_ablations,
    write_ablation_csv,
)

__all__ = [
    "AdamW",
    "LinearWarmupSchedule",
    "OptimizerState",
    "MetricsReport",
    "evaluate",
    "metrics_from_ranks",
    "rank_of_target",
    "Trainer",
    "TrainerConfig",
    "TrainingResult",
    "checkpoint_path",
    "train_epoch",
    "MAP_ABLATIONS",
    "AblationRun",
    "ablation_matrix",
    "run_ablation",
    "valid_map_ablations",
    "write_ablation_csv",
]
