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

""" Loss utilities """

from abc import ABC, abstractmethod
from typing import Optional, Tuple

import numpy as np
from scipy.special import logsumexp, softmax

from ...exceptions import FuxiRecError, NonFiniteError, ShapeMismatchError


class Loss(ABC):
    """
    Abstract base class for Loss.
    """

    def __call__(self, scores, weights=None):
        return self.evaluate(scores, weights)

    @abstractmethod
    def evaluate(self, scores, weights=None):
        """evaluate"""
        raise NotImplementedError

    @abstractmethod
    def gradient(self, scores, weights=None):
        """gradient"""
        raise NotImplementedError

    @staticmethod
    def _validate(
        scores: np.ndarray, weights: Optional[np.ndarray]
    ) -> Tuple[np.ndarray, np.ndarray]:
        scores = np.asarray(scores, dtype=float)
        if scores.ndim < 1 or scores.shape[-1] < 2:
            raise ShapeMismatchError(
                f"need a positive and at least one negative per row, got {scores.shape}!"
            )
        if weights is None:
            weights = np.ones(scores.shape[:-1])
        weights = np.asarray(weights, dtype=float)
        if weights.shape != scores.shape[:-1]:
            raise ShapeMismatchError(
                f"Shapes don't match, scores: {scores.shape}, weights: {weights.shape}!"
            )
        if not np.all(np.isfinite(scores)):
            raise NonFiniteError("candidate scores are not finite")
        if weights.sum() <= 0.0:
            raise FuxiRecError("sampled softmax loss needs at least one non-padded target")
        return scores, weights


class SampledSoftmaxLoss(Loss):
    """Softmax cross entropy of the positive candidate against its sampled negatives.

    ``scores`` is ``(..., K)`` with the positive in column 0; ``weights`` is ``(...)``,
    zero at padded positions. The loss is the weighted mean over positions of
    ``logsumexp(scores) - scores[0]``.
    """

    def evaluate(self, scores, weights=None):
        scores, weights = self._validate(scores, weights)
        per_position = logsumexp(scores, axis=-1) - scores[..., 0]
        return float(np.sum(weights * per_position) / weights.sum())

    def gradient(self, scores, weights=None):
        """Gradient with respect to ``scores``, same shape."""
        scores, weights = self._validate(scores, weights)
        probs = softmax(scores, axis=-1)
        probs[..., 0] -= 1.0
        return probs * (weights / weights.sum())[..., None]


def sampled_softmax_loss(pos_score: np.ndarray, neg_scores: np.ndarray) -> np.ndarray:
    """Per-position loss ``-log(exp(s+) / (exp(s+) + sum exp(s-)))``.

    Args:
        pos_score: ``(...)`` scores of the positive items.
        neg_scores: ``(..., N)`` scores of the sampled negatives.

    Returns:
        ``(...)`` non-negative losses.

    Raises:
        NonFiniteError: if any score is not finite.
    """
    pos_score = np.asarray(pos_score, dtype=float)
    neg_scores = np.asarray(neg_scores, dtype=float)
    if neg_scores.shape[:-1] != pos_score.shape:
        raise ShapeMismatchError(
            f"Shapes don't match, positive: {pos_score.shape}, negatives: {neg_scores.shape}!"
        )
    if not (np.all(np.isfinite(pos_score)) and np.all(np.isfinite(neg_scores))):
        raise NonFiniteError("candidate scores are not finite")
    scores = np.concatenate([pos_score[..., None], neg_scores], axis=-1)
    return logsumexp(scores, axis=-1) - pos_score
