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
Optimizers (:mod:`fuxi_rec.algorithms.optimizers`)
==================================================

.. currentmodule:: fuxi_rec.algorithms.optimizers

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   AdamW
   LinearWarmupSchedule
   OptimizerState

"""

from .adamw import AdamW, LinearWarmupSchedule, OptimizerState

__all__ = ["AdamW", "LinearWarmupSchedule", "OptimizerState"]
