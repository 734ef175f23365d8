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

"""Full-ranking next-item evaluation: NDCG@K, HR@K and MRR over all items."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from ..datasets.sequences import PADDING_ITEM, SplitSequences
from ..exceptions import ConfigurationError
from ..neural_networks.neural_network import NeuralNetwork
from ..utils.validation import validate_in_set, validate_min

logger = logging.getLogger(__name__)

TIE_POLICIES = ("optimistic", "pessimistic")
DEFAULT_CUTOFFS = (10, 50)


@dataclass
class MetricsReport:
    """Metrics averaged over the users of one split.

    ``ndcg`` and ``hr`` are keyed by cutoff. ``loss`` is the training loss of the
    epoch that produced the model, when known.
    """

    ndcg: Dict[int, float]
    hr: Dict[int, float]
    mrr: float
    num_users: int = 0
    epoch: Optional[int] = None
    wall_seconds: float = 0.0
    loss: Optional[float] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def __getitem__(self, name: str) -> float:
        """Metric by name, e.g. ``"ndcg@10"``, ``"hr@50"`` or ``"mrr"``."""
        if name == "mrr":
            return self.mrr
        metric, _, cutoff = name.partition("@")
        table = {"ndcg": self.ndcg, "hr": self.hr}.get(metric)
        if table is None or not cutoff.isdigit() or int(cutoff) not in table:
            raise KeyError(name)
        return table[int(cutoff)]

    def metric_names(self) -> List[str]:
        """Names accepted by ``report[name]``, cutoffs ascending."""
        names = [f"ndcg@{k}" for k in sorted(self.ndcg)]
        names += [f"hr@{k}" for k in sorted(self.hr)]
        return names + ["mrr"]

    def to_dict(self) -> Dict[str, Any]:
        """Flat record for JSON lines and CSV rows."""
        record: Dict[str, Any] = {"epoch": self.epoch, "loss": self.loss}
        record.update({name: self[name] for name in self.metric_names()})
        record["num_users"] = self.num_users
        record["wall_seconds"] = self.wall_seconds
        record.update(self.extra)
        return record


def rank_of_target(scores: np.ndarray, target: int, tie_policy: str = "optimistic") -> int:
    """1-based rank of ``scores[target]`` within ``scores``.

    Under the optimistic policy the rank is one plus the number of strictly greater
    scores; under the pessimistic policy tied scores are ranked ahead of the target.

    Raises:
        ConfigurationError: if ``target`` is out of range or the policy is unknown.
    """
    validate_in_set("tie_policy", tie_policy, TIE_POLICIES)
    scores = np.asarray(scores)
    if not 0 <= target < scores.shape[-1]:
        raise ConfigurationError(f"target {target} outside [0, {scores.shape[-1]})")
    target_score = scores[target]
    if tie_policy == "optimistic":
        return 1 + int(np.count_nonzero(scores > target_score))
    return int(np.count_nonzero(scores >= target_score))


def _batch_ranks(network: NeuralNetwork, split: SplitSequences, tie_policy: str) -> np.ndarray:
    scores = network.score_last(split.items, split.timestamps, split.lengths)
    scores[:, PADDING_ITEM] = -np.inf
    rows = np.arange(len(split))
    target_scores = scores[rows, split.targets][:, None]
    if tie_policy == "optimistic":
        return 1 + np.count_nonzero(scores > target_scores, axis=1)
    return np.count_nonzero(scores >= target_scores, axis=1)


def metrics_from_ranks(
    ranks: np.ndarray, cutoffs: Sequence[int] = DEFAULT_CUTOFFS
) -> MetricsReport:
    """Average NDCG@K, HR@K and MRR over 1-based ``ranks``.

    NDCG@K of one user is ``1 / log2(1 + rank)`` when ``rank <= K``, else 0.
    """
    ranks = np.asarray(ranks, dtype=np.float64)
    if ranks.size == 0:
        raise ConfigurationError("cannot compute metrics over zero users")
    if np.any(ranks < 1):
        raise ConfigurationError("ranks are 1-based")
    gains = 1.0 / np.log2(1.0 + ranks)
    ndcg = {int(k): float(np.mean(np.where(ranks <= k, gains, 0.0))) for k in cutoffs}
    hr = {int(k): float(np.mean(ranks <= k)) for k in cutoffs}
    mrr = float(np.mean(1.0 / ranks))
    return MetricsReport(ndcg=ndcg, hr=hr, mrr=mrr, num_users=int(ranks.size))


def evaluate(
    network: NeuralNetwork,
    split: SplitSequences,
    cutoffs: Sequence[int] = DEFAULT_CUTOFFS,
    batch_size: int = 256,
    num_workers: int = 1,
    tie_policy: str = "optimistic",
) -> MetricsReport:
    """Rank each user's held-out item among all items after the last real input item.

    Users are sharded into batches scored by ``num_workers`` threads; the network is
    only read, and the results are gathered in user order so the report does not
    depend on the number of workers.

    Args:
        network: a trained model.
        split: the validation or test split, with one target per user.
        cutoffs: the ``K`` of NDCG@K and HR@K.
        batch_size: users scored per forward pass.
        num_workers: scoring threads.
        tie_policy: ``"optimistic"`` or ``"pessimistic"``.

    Returns:
        The averaged metrics.

    Raises:
        ConfigurationError: if the split and the network disagree on the item count
            or the arguments are invalid.
    """
    validate_min("batch_size", batch_size, 1)
    validate_min("num_workers", num_workers, 1)
    validate_in_set("tie_policy", tie_policy, TIE_POLICIES)
    if not cutoffs:
        raise ConfigurationError("at least one cutoff is needed")
    for cutoff in cutoffs:
        validate_min("cutoff", cutoff, 1)
    targets = np.asarray(split.targets)
    if targets.ndim != 1:
        raise ConfigurationError("evaluation needs one held-out target per user")
    if len(split) and (targets.min() < 1 or targets.max() > network.item_count):
        raise ConfigurationError(
            f"split targets fall outside the model's {network.item_count} items"
        )

    start = time.perf_counter()
    shards = [
        split.subset(np.arange(offset, min(offset + batch_size, len(split))))
        for offset in range(0, len(split), batch_size)
    ]
    if num_workers == 1 or len(shards) <= 1:
        ranks = [_batch_ranks(network, shard, tie_policy) for shard in shards]
    else:
        with ThreadPoolExecutor(max_workers=num_workers) as executor:
            ranks = list(
                executor.map(lambda shard: _batch_ranks(network, shard, tie_policy), shards)
            )
    report = metrics_from_ranks(np.concatenate(ranks) if ranks else np.empty(0), cutoffs)
    report.wall_seconds = time.perf_counter() - start
    logger.debug(
        "Evaluated %s users in %.2fs: %s",
        report.num_users,
        report.wall_seconds,
        {name: round(report[name], 4) for name in report.metric_names()},
    )
    return report
