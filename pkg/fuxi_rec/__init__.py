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
==========================================
FuXi-Rec (:mod:`fuxi_rec`)
==========================================

.. currentmodule:: fuxi_rec

A sequential-recommendation engine built around the FuXi-β block: a functional
relative attention bias over elapsed time and an attention-free token mixer that
uses the positional and temporal bias matrices themselves as attention maps. The
query-key attention and bucketed relative bias baselines are implemented alongside,
together with a training and full-ranking evaluation loop and a microbenchmark
harness that counts the multiplies and gathers each variant performs.

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   FuxiRecError

Submodules
==========

.. autosummary::
   :toctree:

   algorithms
   benchmarks
   bias
   cli
   datasets
   mixers
   neural_networks
   numerics
   utils

"""

from .version import __version__
from .exceptions import FuxiRecError

__all__ = ["__version__", "FuxiRecError"]
