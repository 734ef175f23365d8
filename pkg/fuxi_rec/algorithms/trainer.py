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

"""Epoch loop with early stopping on a validation metric."""

import csv
import dataclasses
import json
import logging
import math
import os
import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .evaluation import DEFAULT_CUTOFFS, MetricsReport, evaluate
from .optimizers import AdamW, LinearWarmupSchedule
from ..datasets.sequences import SplitDataset, SplitSequences
from ..exceptions import ConfigurationError, FuxiRecError, NonFiniteError
from ..neural_networks.sequential_recommender import SequentialRecommender
from ..utils.validation import validate_min

logger = logging.getLogger(__name__)

METRICS_LOG = "metrics.jsonl"
SUMMARY_CSV = "summary.csv"
DIAGNOSTICS_JSON = "diagnostics.json"


def checkpoint_path(run_dir: str, epoch: int) -> str:
    """Path of the checkpoint written after ``epoch``."""
    return os.path.join(run_dir, f"epoch{epoch}.fxb")


def train_epoch(
    network: SequentialRecommender,
    split: SplitSequences,
    optimizer: AdamW,
    rng: np.random.Generator,
    batch_size: int = 32,
) -> float:
    """One pass over the training users in a shuffled order.

    Each mini-batch draws fresh negatives, accumulates the gradient of the sampled
    softmax loss over its non-padded targets and takes one optimizer step. The shuffle
    and the negatives come from ``rng``, so the epoch is deterministic given its state.

    Returns:
        The mean of the mini-batch losses.

    Raises:
        FuxiRecError: if ``split`` is empty.
        NonFiniteError: if the loss or a gradient is not finite; ``diagnostics`` names
            the batch, its users and the optimizer step.
    """
    validate_min("batch_size", batch_size, 1)
    if len(split) == 0:
        raise FuxiRecError("cannot train on an empty split")
    order = rng.permutation(len(split))
    losses: List[float] = []
    for batch_index, offset in enumerate(range(0, len(order), batch_size)):
        indices = order[offset : offset + batch_size]
        batch = network.make_batch(split, indices, rng)
        diagnostics = {
            "batch": batch_index,
            "user_ids": [int(u) for u in split.user_ids[indices]],
            "step": optimizer.state.step + 1,
            "learning_rate": optimizer.current_learning_rate,
        }
        try:
            loss = network.backward(batch)
        except NonFiniteError as ex:
            diagnostics.update(ex.diagnostics)
            diagnostics["cause"] = ex.message
            raise NonFiniteError("training diverged", diagnostics) from ex
        if not math.isfinite(loss):
            diagnostics["loss"] = loss
            raise NonFiniteError("training loss is not finite", diagnostics)
        optimizer.step()
        losses.append(loss)
    return float(np.mean(losses))


@dataclass
class TrainerConfig:
    """Epoch loop settings.

    Training stops after ``patience`` epochs without improvement of
    ``selection_metric`` on the validation split, or after ``max_epochs``.
    """

    batch_size: int = 32
    max_epochs: int = 200
    patience: int = 10
    cutoffs: Tuple[int, ...] = DEFAULT_CUTOFFS
    selection_metric: str = "ndcg@10"
    eval_batch_size: int = 256
    num_workers: int = 1
    seed: Optional[int] = None

    def __post_init__(self) -> None:
        validate_min("batch_size", self.batch_size, 1)
        validate_min("max_epochs", self.max_epochs, 1)
        validate_min("patience", self.patience, 1)
        validate_min("eval_batch_size", self.eval_batch_size, 1)
        validate_min("num_workers", self.num_workers, 1)
        self.cutoffs = tuple(int(k) for k in self.cutoffs)
        if not self.cutoffs:
            raise ConfigurationError("at least one cutoff is needed")
        for cutoff in self.cutoffs:
            validate_min("cutoff", cutoff, 1)
        metric, _, cutoff = self.selection_metric.partition("@")
        if self.selection_metric != "mrr" and (
            metric not in ("ndcg", "hr") or not cutoff.isdigit() or int(cutoff) not in self.cutoffs
        ):
            raise ConfigurationError(
                f"selection metric {self.selection_metric!r} is not among the reported metrics"
            )

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form."""
        values = dataclasses.asdict(self)
        values["cutoffs"] = list(self.cutoffs)
        return values

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "TrainerConfig":
        """Inverse of :meth:`to_dict`.

        Raises:
            ConfigurationError: on an unknown key or invalid value.
        """
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigurationError(f"unknown trainer option(s): {', '.join(sorted(unknown))}")
        return cls(**values)

    @classmethod
    def from_json(cls, path: str, section: Optional[str] = "trainer") -> "TrainerConfig":
        """Load from a JSON file, reading ``section`` when present."""
        with open(path, "r", encoding="utf8") as file:
            values = json.load(file)
        if section:
            values = values.get(section, {})
        return cls.from_dict(values)


@dataclass
class TrainingResult:
    """Outcome of :meth:`Trainer.fit`."""

    best_epoch: int
    best_validation: MetricsReport
    test: MetricsReport
    history: List[MetricsReport]
    stopped_early: bool
    artifacts: List[str] = field(default_factory=list)


class Trainer:
    """Trains a :class:`~fuxi_rec.neural_networks.SequentialRecommender` on a
    :class:`~fuxi_rec.datasets.SplitDataset`.

    After every epoch the model is evaluated on the validation split. When ``run_dir``
    is given, each epoch appends a JSON line to ``metrics.jsonl`` and writes the
    checkpoint ``epoch{k}.fxb``; the run ends with ``summary.csv``. The parameters of
    the best validation epoch are restored before the test split is evaluated.
    """

    def __init__(
        self,
        network: SequentialRecommender,
        dataset: SplitDataset,
        config: Optional[TrainerConfig] = None,
        run_dir: Optional[str] = None,
    ) -> None:
        """
        Args:
            network: the model to train in place.
            dataset: train, validation and test splits.
            config: epoch loop settings.
            run_dir: directory for metrics and checkpoints, created if missing.

        Raises:
            ConfigurationError: if the dataset holds items the model does not know.
        """
        self._network = network
        self._dataset = dataset
        self._config = config or TrainerConfig()
        self._run_dir = run_dir
        if dataset.item_count > network.item_count:
            raise ConfigurationError(
                f"dataset has {dataset.item_count} items, model only {network.item_count}"
            )
        if dataset.max_len != network.max_len:
            raise ConfigurationError(
                f"dataset sequence length {dataset.max_len} != model max_len {network.max_len}"
            )
        model = network.config
        steps_per_epoch = math.ceil(len(dataset.train) / self._config.batch_size)
        schedule = LinearWarmupSchedule.from_fraction(
            model.learning_rate, model.warmup_fraction, steps_per_epoch * self._config.max_epochs
        )
        self._optimizer = AdamW(network.store, schedule, weight_decay=model.weight_decay)
        seed = self._config.seed if self._config.seed is not None else model.seed
        self._rng = np.random.default_rng(seed)
        self._artifacts: List[str] = []

    @property
    def optimizer(self) -> AdamW:
        """Returns the optimizer."""
        return self._optimizer

    @property
    def artifacts(self) -> List[str]:
        """Returns the paths written so far."""
        return list(self._artifacts)

    def _track(self, path: str) -> str:
        if path not in self._artifacts:
            self._artifacts.append(path)
        return path

    def _evaluate(self, split: SplitSequences) -> MetricsReport:
        return evaluate(
            self._network,
            split,
            cutoffs=self._config.cutoffs,
            batch_size=self._config.eval_batch_size,
            num_workers=self._config.num_workers,
        )

    def _log_epoch(self, report: MetricsReport) -> None:
        if self._run_dir is None:
            return
        path = self._track(os.path.join(self._run_dir, METRICS_LOG))
        with open(path, mode="a", encoding="utf8") as log_file:
            log_file.write(json.dumps(report.to_dict(), sort_keys=True) + "\n")

    def _write_summary(self, history: List[MetricsReport], test: MetricsReport) -> None:
        if self._run_dir is None:
            return
        path = self._track(os.path.join(self._run_dir, SUMMARY_CSV))
        rows = [dict(report.to_dict(), split="validation") for report in history]
        rows.append(dict(test.to_dict(), split="test"))
        fieldnames = ["split"] + [name for name in rows[-1] if name != "split"]
        with open(path, mode="w", newline="", encoding="utf8") as csv_file:
            writer = csv.DictWriter(csv_file, fieldnames=fieldnames, extrasaction="ignore")
            writer.writeheader()
            writer.writerows(rows)

    def _dump_diagnostics(self, error: NonFiniteError, epoch: int) -> None:
        if self._run_dir is None:
            return
        path = self._track(os.path.join(self._run_dir, DIAGNOSTICS_JSON))
        with open(path, mode="w", encoding="utf8") as dump:
            json.dump(dict(error.diagnostics, epoch=epoch), dump, indent=2, sort_keys=True)

    def fit(self) -> TrainingResult:
        """Train until early stopping, restore the best epoch and evaluate the test split.

        Raises:
            NonFiniteError: if training diverges; ``diagnostics.json`` is written first
                when the trainer has a run directory.
        """
        config = self._config
        if self._run_dir is not None:
            os.makedirs(self._run_dir, exist_ok=True)
            metrics_log = os.path.join(self._run_dir, METRICS_LOG)
            if os.path.exists(metrics_log):
                os.remove(metrics_log)

        history: List[MetricsReport] = []
        best_epoch, best_value = 0, -math.inf
        best_state: Optional[Dict[str, np.ndarray]] = None
        stale = 0
        for epoch in range(1, config.max_epochs + 1):
            start = time.perf_counter()
            try:
                loss = train_epoch(
                    self._network,
                    self._dataset.train,
                    self._optimizer,
                    self._rng,
                    config.batch_size,
                )
            except NonFiniteError as ex:
                self._dump_diagnostics(ex, epoch)
                raise
            report = self._evaluate(self._dataset.validation)
            report.epoch = epoch
            report.loss = loss
            report.wall_seconds = time.perf_counter() - start
            history.append(report)
            self._log_epoch(report)
            if self._run_dir is not None:
                self._network.save(self._track(checkpoint_path(self._run_dir, epoch)))

            value = report[config.selection_metric]
            logger.debug("Epoch %s/%s...", epoch, config.max_epochs)
            logger.debug("Loss: %s", np.around(loss, 4))
            logger.debug("Validation %s: %s", config.selection_metric, np.around(value, 4))
            if value > best_value:
                best_epoch, best_value, stale = epoch, value, 0
                if self._run_dir is None:
                    best_state = self._network.store.state_dict()
            else:
                stale += 1
                if stale >= config.patience:
                    logger.info(
                        "No improvement for %s epochs; stopping after epoch %s", stale, epoch
                    )
                    break

        if self._run_dir is not None:
            self._network.load(checkpoint_path(self._run_dir, best_epoch))
        elif best_state is not None:
            self._network.store.load_state_dict(best_state)
        test = self._evaluate(self._dataset.test)
        test.epoch = best_epoch
        self._write_summary(history, test)
        logger.info(
            "Best epoch %s: validation %s %.4f, test %s %.4f",
            best_epoch,
            config.selection_metric,
            best_value,
            config.selection_metric,
            test[config.selection_metric],
        )
        return TrainingResult(
            best_epoch=best_epoch,
            best_validation=select_best(history, config.selection_metric),
            test=test,
            history=history,
            stopped_early=len(history) < config.max_epochs,
            artifacts=self.artifacts,
        )


def select_best(history: Sequence[MetricsReport], metric: str = "ndcg@10") -> MetricsReport:
    """Earliest report with the highest ``metric``."""
    if not history:
        raise FuxiRecError("no epochs were evaluated")
    best = history[0]
    for report in history[1:]:
        if report[metric] > best[metric]:
            best = report
    return best
