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

"""The FuXi-β sequential recommender."""

import logging
from typing import Callable, List, Optional

import numpy as np

from .block import FuxiBlock
from .embedding import ITEM_EMBEDDING, EmbeddingTables, predict_scores
from .model_config import ModelConfig
from .neural_network import NeuralNetwork, TrainingBatch
from ..bias.bias_functions import BiasFunctionSpec
from ..datasets.negative_sampling import sample_negative_matrix
from ..datasets.sequences import PADDING_ITEM, SplitSequences
from ..numerics.checkpoint import load_checkpoint, save_checkpoint
from ..numerics.counters import KernelCounter
from ..numerics.param_store import ParamStore
from ..numerics.tape import Tape, Variable

logger = logging.getLogger(__name__)


class SequentialRecommender(NeuralNetwork):
    """Embedding layer, a stack of :class:`FuxiBlock`, and tied-embedding prediction
    trained with a sampled softmax over ``num_negatives`` uniform negatives.

    All learnable arrays live in :attr:`store`, initialized from ``config.seed``.
    """

    def __init__(self, config: ModelConfig) -> None:
        """
        Args:
            config: model hyperparameters.
        """
        super().__init__(config.item_count, config.max_len)
        self._config = config
        self._store = ParamStore(config.np_dtype)
        rng = np.random.default_rng(config.seed)
        self._tables = EmbeddingTables(config.item_count, config.max_len, config.embed_dim)
        self._tables.register(self._store, rng, config.init_std)
        self._blocks = [FuxiBlock(index, config) for index in range(config.num_blocks)]
        for block in self._blocks:
            block.register(self._store, rng)
        logger.debug(
            "Built model with %s blocks and %s trainable scalars",
            config.num_blocks,
            self._store.num_parameters(),
        )

    @property
    def config(self) -> ModelConfig:
        """Returns the model configuration."""
        return self._config

    @property
    def store(self) -> ParamStore:
        """Returns the parameter store."""
        return self._store

    @property
    def blocks(self) -> List[FuxiBlock]:
        """Returns the blocks in order."""
        return list(self._blocks)

    @property
    def num_weights(self) -> int:
        return self._store.num_parameters()

    def encode(self, tape: Tape, items: np.ndarray, timestamps: np.ndarray) -> Variable:
        """Final hidden states ``(batch, n, d)`` recorded on ``tape``."""
        hidden = self._tables.forward(tape, items)
        for block in self._blocks:
            hidden = block.forward(tape, hidden, timestamps)
        return hidden

    def training_loss(self, tape: Tape, batch: TrainingBatch) -> Variable:
        """Sampled softmax loss averaged over non-padded target positions."""
        hidden = self.encode(tape, batch.items, batch.timestamps)
        scores = tape.candidate_scores(hidden, tape.param(ITEM_EMBEDDING), batch.candidates)
        return tape.sampled_softmax_loss(scores, batch.targets != PADDING_ITEM)

    def _forward(self, items: np.ndarray, timestamps: np.ndarray) -> np.ndarray:
        return self.encode(Tape(self._store, record=False), items, timestamps).value

    def _backward(self, batch: TrainingBatch) -> float:
        self._store.zero_grad()
        tape = Tape(self._store)
        loss = self.training_loss(tape, batch)
        tape.backward(loss)
        return float(loss.value)

    def loss(self, batch: TrainingBatch) -> float:
        """Loss without gradients."""
        return float(self.training_loss(Tape(self._store, record=False), batch).value)

    def loss_closure(self, batch: TrainingBatch) -> Callable[[bool], float]:
        """A closure over a fixed batch for :func:`~fuxi_rec.numerics.grad_check`."""

        def closure(with_grad: bool) -> float:
            return self.backward(batch) if with_grad else self.loss(batch)

        return closure

    def predict_scores(self, items: np.ndarray, timestamps: np.ndarray) -> np.ndarray:
        """Scores of every item after every prefix, ``(..., n, item_count + 1)``."""
        return predict_scores(self.forward(items, timestamps), self._store[ITEM_EMBEDDING].value)

    def _score_last(
        self, items: np.ndarray, timestamps: np.ndarray, lengths: np.ndarray
    ) -> np.ndarray:
        hidden = self._forward(items, timestamps)
        last = hidden[np.arange(hidden.shape[0]), lengths - 1]
        return predict_scores(last, self._store[ITEM_EMBEDDING].value)

    def count_operations(self, items: np.ndarray, timestamps: np.ndarray) -> KernelCounter:
        """Multiplies and gathers of one forward pass."""
        counter = KernelCounter()
        items_, times_, _ = self._validate_input(items, timestamps)
        self.encode(Tape(self._store, counter=counter, record=False), items_, times_)
        return counter

    def make_batch(
        self, split: SplitSequences, indices: np.ndarray, rng: np.random.Generator
    ) -> TrainingBatch:
        """Training batch for the users at ``indices`` with freshly sampled negatives."""
        rows = split.subset(indices)
        negatives = sample_negative_matrix(
            rng, self._config.item_count, rows.targets, self._config.num_negatives
        )
        candidates = np.concatenate([rows.targets[..., None], negatives], axis=-1)
        return TrainingBatch(rows.items, rows.timestamps, rows.targets, candidates)

    def bias_specs(self) -> List[Optional[BiasFunctionSpec]]:
        """Current temporal bias function of each block, ``None`` where disabled."""
        return [
            block.temporal_bias.spec(self._store) if block.temporal_bias is not None else None
            for block in self._blocks
        ]

    def save(self, path: str) -> None:
        """Write every parameter value to a checkpoint file."""
        save_checkpoint(path, self._store.state_dict())

    def load(self, path: str) -> None:
        """Read parameter values from a checkpoint file.

        Raises:
            CheckpointError: if the file is malformed or does not match this model.
        """
        self._store.load_state_dict(load_checkpoint(path))
