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

"""Functional relative attention bias: a learnable closed form of elapsed time."""

from typing import Dict, Optional

import numpy as np

from .bias_functions import BiasFunctionKind, BiasFunctionSpec, bias_formula, default_parameters
from .bias_matrix import MULTIPLICATIVE_MASK, BiasKind, BiasMatrix, causal_mask, elapsed_time
from .bucketed_bias import BucketTable, bucketed_rab_temporal, temporal_indices
from ..exceptions import ConfigurationError
from ..numerics.counters import KernelCounter
from ..numerics.param_store import ParamStore
from ..numerics.tape import EagerOps, Tape, Variable

SECONDS_PER_DAY = 86_400.0


def frab_matrix(
    timestamps: np.ndarray,
    spec: BiasFunctionSpec,
    time_scale: float = SECONDS_PER_DAY,
    mask_value: float = MULTIPLICATIVE_MASK,
    counter: Optional[KernelCounter] = None,
) -> BiasMatrix:
    """Temporal bias ``f(max(0, (t_i - t_j) / time_scale))`` for ``j <= i``, masked above.

    Every kind except ``bucket`` is evaluated with arithmetic and special functions
    only; no entry is read from a table by a data-dependent index.

    Raises:
        ConfigurationError: if ``time_scale <= 0``.
        NonFiniteError: if a parameter of ``spec`` is not finite.
    """
    if time_scale <= 0:
        raise ConfigurationError(f"time_scale must be > 0, was {time_scale}")
    spec.check_finite()
    timestamps = np.asarray(timestamps)
    n = timestamps.shape[-1]
    if spec.kind is BiasFunctionKind.BUCKET:
        table = BucketTable(np.zeros(1), spec.params["beta_t"], time_scale)
        return bucketed_rab_temporal(timestamps, table, mask_value, counter)
    values = bias_formula(EagerOps(), spec.kind, spec.params, elapsed_time(timestamps, time_scale))
    values = np.where(causal_mask(n), values, mask_value)
    return BiasMatrix(n, values, BiasKind.TEMPORAL, mask_value)


class FunctionalRelativeBias:
    """Per-block temporal bias whose parameters live in a parameter store.

    Parameters are registered as ``{prefix}.{kind}.{name}``; a ``bucket`` kind
    registers ``{prefix}.bucket.beta_t`` and performs the table lookup.

    Args:
        prefix: parameter name prefix, e.g. ``block0.frab``.
        kind: bias function kind.
        time_scale: seconds per unit of elapsed time.
        max_bucket: table length for the ``bucket`` kind.
    """

    def __init__(
        self,
        prefix: str,
        kind: BiasFunctionKind,
        time_scale: float = SECONDS_PER_DAY,
        max_bucket: int = 128,
    ) -> None:
        if time_scale <= 0:
            raise ConfigurationError(f"time_scale must be > 0, was {time_scale}")
        self._prefix = f"{prefix}.{kind.value}"
        self._kind = kind
        self._time_scale = time_scale
        self._max_bucket = max_bucket
        self._names = list(default_parameters(kind, max_bucket=max_bucket))

    @property
    def kind(self) -> BiasFunctionKind:
        """Returns the function kind."""
        return self._kind

    @property
    def time_scale(self) -> float:
        """Returns seconds per unit of elapsed time."""
        return self._time_scale

    @property
    def parameter_names(self) -> Dict[str, str]:
        """Returns local parameter name to store name."""
        return {name: f"{self._prefix}.{name}" for name in self._names}

    def register(self, store: ParamStore, rng: Optional[np.random.Generator] = None) -> None:
        """Add the kind's initial parameters to ``store``."""
        for name, value in default_parameters(self._kind, rng, self._max_bucket).items():
            store.add(f"{self._prefix}.{name}", value)

    def forward(self, tape: Tape, timestamps: np.ndarray, mask_value: float) -> Variable:
        """Temporal bias of shape ``(batch, n, n)`` for ``timestamps`` of shape ``(batch, n)``."""
        n = timestamps.shape[-1]
        params = {name: tape.param(full) for name, full in self.parameter_names.items()}
        if self._kind is BiasFunctionKind.BUCKET:
            indices = temporal_indices(timestamps, self._time_scale, self._max_bucket)
            return tape.gather_lower(params["beta_t"], indices, mask_value, tag="bias")
        values = bias_formula(tape, self._kind, params, elapsed_time(timestamps, self._time_scale))
        return tape.mask(values, causal_mask(n), mask_value)

    def spec(self, store: ParamStore) -> BiasFunctionSpec:
        """The current function with the values held in ``store``."""
        return BiasFunctionSpec(
            self._kind,
            {name: store[full].value.copy() for name, full in self.parameter_names.items()},
        )
