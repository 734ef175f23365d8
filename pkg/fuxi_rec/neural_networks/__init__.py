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
Neural Networks (:mod:`fuxi_rec.neural_networks`)
=================================================

.. currentmodule:: fuxi_rec.neural_networks

The embedding layer, the FuXi-β block and the sequential recommender built from
them.

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   NeuralNetwork
   SequentialRecommender
   ModelConfig
   FuxiBlock
   EmbeddingTables
   TrainingBatch

Functions
=========

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   embed
   fuxi_beta_block
   predict_scores
   count_parameters
   describe

"""

from .model_config import ModelConfig
from .embedding import (
    ITEM_EMBEDDING,
    POSITION_EMBEDDING,
    EmbeddingTables,
    embed,
    predict_scores,
)
from .block import FuxiBlock, fuxi_beta_block
from .neural_network import NeuralNetwork, TrainingBatch
from .sequential_recommender import SequentialRecommender
from .parameter_count import block_parameter_breakdown, count_parameters, describe

__all__ = [
    "ModelConfig",
    "ITEM_EMBEDDING",
    "POSITION_EMBEDDING",
    "EmbeddingTables",
    "embed",
    "predict_scores",
    "FuxiBlock",
    "fuxi_beta_block",
    "NeuralNetwork",
    "TrainingBatch",
    "SequentialRecommender",
    "block_parameter_breakdown",
    "count_parameters",
    "describe",
]
