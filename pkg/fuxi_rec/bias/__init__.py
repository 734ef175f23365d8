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
Attention Bias (:mod:`fuxi_rec.bias`)
=====================================

.. currentmodule:: fuxi_rec.bias

Causally masked positional and temporal bias matrices. The bucketed relative
bias reads learnable tables at data-dependent indices; the functional relative
bias evaluates a learnable closed form of elapsed time instead.

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   BiasMatrix
   BiasKind
   BiasFunctionKind
   BiasFunctionSpec
   BucketTable
   FunctionalRelativeBias
   BucketedRelativeBias
   frab_matrix
   eval_bias_function
   bucketed_rab_positional
   bucketed_rab_temporal
   curve_samples
   export_bias_curves

"""

from .bias_matrix import (
    ADDITIVE_MASK,
    MULTIPLICATIVE_MASK,
    BiasKind,
    BiasMatrix,
    causal_mask,
    elapsed_time,
)
from .bias_functions import (
    CLOSED_FORM_KINDS,
    DEFAULT_MAX_BUCKET,
    BiasFunctionKind,
    BiasFunctionSpec,
    bias_formula,
    bucket_indices,
    default_parameters,
    eval_bias_function,
    valid_kinds,
)
from .bucketed_bias import (
    BucketTable,
    BucketedRelativeBias,
    bucketed_rab_positional,
    bucketed_rab_temporal,
    positional_indices,
    temporal_indices,
)
from .functional_bias import SECONDS_PER_DAY, FunctionalRelativeBias, frab_matrix
from .curves import (
    curve_samples,
    export_bias_curves,
    is_monotone_decreasing,
    read_curve_csv,
    render_curves,
    write_curve_csv,
)

__all__ = [
    "ADDITIVE_MASK",
    "MULTIPLICATIVE_MASK",
    "BiasKind",
    "BiasMatrix",
    "causal_mask",
    "elapsed_time",
    "CLOSED_FORM_KINDS",
    "DEFAULT_MAX_BUCKET",
    "BiasFunctionKind",
    "BiasFunctionSpec",
    "bias_formula",
    "bucket_indices",
    "default_parameters",
    "eval_bias_function",
    "valid_kinds",
    "BucketTable",
    "BucketedRelativeBias",
    "bucketed_rab_positional",
    "bucketed_rab_temporal",
    "positional_indices",
    "temporal_indices",
    "SECONDS_PER_DAY",
    "FunctionalRelativeBias",
    "frab_matrix",
    "curve_samples",
    "export_bias_curves",
    "is_monotone_decreasing",
    "read_curve_csv",
    "render_curves",
    "write_curve_csv",
]
