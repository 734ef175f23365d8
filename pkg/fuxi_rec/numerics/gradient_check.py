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

"""Central finite-difference check of reverse-mode gradients."""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .param_store import ParamStore
from ..exceptions import NonFiniteError

logger = logging.getLogger(__name__)

LossClosure = Callable[[bool], float]


@dataclass
class GradCheckResult:
    """Outcome of :func:`grad_check`.

    Attributes:
        max_relative_error: worst relative error over every checked scalar.
        errors: worst relative error per parameter name.
        skipped: names of parameters not checked because they are not trainable.
        worst: parameter name and index of the worst scalar.
        num_checked: number of scalars compared.
    """

    max_relative_error: float = 0.0
    errors: Dict[str, float] = field(default_factory=dict)
    skipped: List[str] = field(default_factory=list)
    worst: Optional[Tuple[str, Tuple[int, ...]]] = None
    num_checked: int = 0


def relative_error(analytic: float, numeric: float, floor: float) -> float:
    """``|a - n| / max(|a|, |n|, floor)``."""
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), floor)


def grad_check(
    loss_closure: LossClosure,
    params: ParamStore,
    h: float = 1e-5,
    floor: float = 1e-5,
    names: Optional[Sequence[str]] = None,
) -> GradCheckResult:
    """Compare reverse-mode gradients to ``(L(θ+h) - L(θ-h)) / 2h`` for every trainable scalar.

    Args:
        loss_closure: evaluates the loss at the current parameter values. Called with
            ``True`` it must also run the backward pass into ``params``.
        params: the parameters the closure reads.
        h: finite-difference step.
        floor: magnitude below which differences are measured absolutely.
        names: restrict the check to these parameters.

    Returns:
        The worst relative error overall and per parameter.

    Raises:
        NonFiniteError: if the loss is not finite at any evaluation point.
    """

    def evaluate(with_grad: bool) -> float:
        loss = float(loss_closure(with_grad))
        if not np.isfinite(loss):
            raise NonFiniteError(f"loss is {loss} during gradient check")
        return loss

    params.zero_grad()
    evaluate(True)
    analytic = {p.name: p.grad.copy() for p in params}

    result = GradCheckResult()
    selected = set(names) if names is not None else None
    for param in params:
        if selected is not None and param.name not in selected:
            continue
        if not param.trainable:
            result.skipped.append(param.name)
            continue
        worst = 0.0
        pinned = set(param.pinned_rows)
        for index in np.ndindex(*param.shape):
            if index and index[0] in pinned:
                continue
            original = param.value[index]
            param.value[index] = original + h
            plus = evaluate(False)
            param.value[index] = original - h
            minus = evaluate(False)
            param.value[index] = original
            numeric = (plus - minus) / (2.0 * h)
            error = relative_error(float(analytic[param.name][index]), numeric, floor)
            result.num_checked += 1
            if error > worst:
                worst = error
            if error > result.max_relative_error:
                result.max_relative_error = error
                result.worst = (param.name, tuple(index))
        result.errors[param.name] = worst
        logger.debug("Gradient check %s: worst relative error %.3e", param.name, worst)
    params.zero_grad()
    return result
