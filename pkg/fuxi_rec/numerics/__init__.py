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
Numerics (:mod:`fuxi_rec.numerics`)
===================================

.. currentmodule:: fuxi_rec.numerics

Dense kernels, named parameters with gradient buffers, a reverse-mode tape over
the operations the models need, a finite-difference gradient checker and the
binary checkpoint format.

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   Tape
   Variable
   EagerOps
   Parameter
   ParamStore
   KernelCounter
   GradCheckResult
   grad_check

Kernels
=======

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   matmul
   silu
   silu_grad
   sigmoid
   softplus
   rmsnorm
   softmax_row
   log_sum_exp

Checkpoints
===========

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   save_checkpoint
   load_checkpoint

"""

from .kernels import (
    RMSNORM_EPS,
    check_finite,
    inverse_softplus,
    log_sum_exp,
    matmul,
    rmsnorm,
    rmsnorm_backward,
    sigmoid,
    silu,
    silu_grad,
    softmax_row,
    softplus,
)
from .counters import KernelCounter, TERM_FFN, TERM_N2D, TERM_ND2
from .param_store import Parameter, ParamStore
from .tape import EagerOps, Tape, Variable, reduce_to
from .gradient_check import GradCheckResult, grad_check, relative_error
from .checkpoint import decode_checkpoint, encode_checkpoint, load_checkpoint, save_checkpoint

__all__ = [
    "RMSNORM_EPS",
    "check_finite",
    "inverse_softplus",
    "log_sum_exp",
    "matmul",
    "rmsnorm",
    "rmsnorm_backward",
    "sigmoid",
    "silu",
    "silu_grad",
    "softmax_row",
    "softplus",
    "KernelCounter",
    "TERM_FFN",
    "TERM_N2D",
    "TERM_ND2",
    "Parameter",
    "ParamStore",
    "EagerOps",
    "Tape",
    "Variable",
    "reduce_to",
    "GradCheckResult",
    "grad_check",
    "relative_error",
    "decode_checkpoint",
    "encode_checkpoint",
    "load_checkpoint",
    "save_checkpoint",
]
