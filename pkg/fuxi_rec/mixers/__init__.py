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
Token Mixers (:mod:`fuxi_rec.mixers`)
=====================================

.. currentmodule:: fuxi_rec.mixers

The attention-free token mixer, which uses the positional and temporal bias
matrices directly as attention maps, and the query-key self-attention baseline
with the switches that remove each map.

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   MixerConfig
   MixerMode
   MixerLayout
   MixerParams
   FlopTerms
   aftm_forward
   qk_attention_channels
   qk_attention_forward
   flop_count
   closed_form_terms

"""

from .mixer_config import (
    CHANNEL_POSITIONAL,
    CHANNEL_QK,
    CHANNEL_TEMPORAL,
    MixerConfig,
    MixerLayout,
    MixerMode,
    MixerParams,
)
from .aftm import aftm_forward
from .qk_attention import qk_attention_channels, qk_attention_forward
from .flops import FlopTerms, closed_form_terms, flop_count

__all__ = [
    "CHANNEL_POSITIONAL",
    "CHANNEL_QK",
    "CHANNEL_TEMPORAL",
    "MixerConfig",
    "MixerLayout",
    "MixerMode",
    "MixerParams",
    "aftm_forward",
    "qk_attention_channels",
    "qk_attention_forward",
    "FlopTerms",
    "closed_form_terms",
    "flop_count",
]
