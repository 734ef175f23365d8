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
Datasets (:mod:`fuxi_rec.datasets`)
===================================

.. currentmodule:: fuxi_rec.datasets

Interaction-log parsing, leave-one-out sequence building, negative sampling and
the split file format.

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   RawInteraction
   InteractionSequence
   SplitSequences
   SplitDataset
   parse_movielens
   build_sequences
   sample_negatives
   sample_negative_matrix
   synthetic_cyclic
   save_split
   load_split

"""

from .movielens import RawInteraction, item_count_of, iter_interactions, parse_movielens
from .sequences import (
    PADDING_ITEM,
    InteractionSequence,
    SplitDataset,
    SplitSequences,
    UserHistory,
    build_sequences,
    build_split,
    to_histories,
)
from .negative_sampling import sample_negative_matrix, sample_negatives
from .synthetic import synthetic_cyclic
from .split_io import decode_split, encode_split, load_split, save_split, sidecar_path

__all__ = [
    "RawInteraction",
    "item_count_of",
    "iter_interactions",
    "parse_movielens",
    "PADDING_ITEM",
    "InteractionSequence",
    "SplitDataset",
    "SplitSequences",
    "UserHistory",
    "build_sequences",
    "build_split",
    "to_histories",
    "sample_negative_matrix",
    "sample_negatives",
    "synthetic_cyclic",
    "decode_split",
    "encode_split",
    "load_split",
    "save_split",
    "sidecar_path",
]
