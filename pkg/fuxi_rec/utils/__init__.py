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
Utilities (:mod:`fuxi_rec.utils`)
=================================

.. currentmodule:: fuxi_rec.utils

Seeded random-number globals, argument validation and loss functions shared by
the rest of the package.

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   algorithm_globals
   validate_min
   validate_range
   validate_in_set

Submodules
==========

.. autosummary::
   :toctree:

   loss_functions

"""

from .algorithm_globals import algorithm_globals
from .validation import validate_min, validate_range, validate_in_set
from .hashing import canonical_json, config_hash, file_hash

__all__ = [
    "algorithm_globals",
    "validate_min",
    "validate_range",
    "validate_in_set",
    "canonical_json",
    "config_hash",
    "file_hash",
]
