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

"""Item and position embeddings, shared with the prediction layer."""

import numpy as np

from ..datasets.sequences import PADDING_ITEM, InteractionSequence
from ..exceptions import ShapeMismatchError
from ..numerics.param_store import ParamStore
from ..numerics.tape import Tape, Variable

ITEM_EMBEDDING = "item_embedding"
POSITION_EMBEDDING = "position_embedding"


class EmbeddingTables:
    """Item table ``E`` of shape ``(item_count + 1, d)`` with row 0 held at zero for
    padding, and learnable positional table ``P`` of shape ``(n, d)``."""

    def __init__(self, item_count: int, max_len: int, embed_dim: int) -> None:
        self._item_count = item_count
        self._max_len = max_len
        self._embed_dim = embed_dim

    @property
    def item_count(self) -> int:
        """Returns the number of real items."""
        return self._item_count

    @property
    def num_parameters(self) -> int:
        """Returns the scalar count of both tables, padding row included."""
        return (self._item_count + 1 + self._max_len) * self._embed_dim

    def register(self, store: ParamStore, rng: np.random.Generator, std: float) -> None:
        """Add both tables, drawn from ``normal(0, std)``."""
        store.add(
            ITEM_EMBEDDING,
            rng.normal(0.0, std, size=(self._item_count + 1, self._embed_dim)),
            pinned_rows=(PADDING_ITEM,),
        )
        store.add(POSITION_EMBEDDING, rng.normal(0.0, std, size=(self._max_len, self._embed_dim)))

    def check_items(self, items: np.ndarray) -> None:
        """Raises :class:`ShapeMismatchError` if an item index is out of range."""
        if items.size and (items.min() < 0 or items.max() > self._item_count):
            raise ShapeMismatchError(
                f"item index out of range [0, {self._item_count}]: "
                f"min {items.min()}, max {items.max()}"
            )

    def forward(self, tape: Tape, items: np.ndarray) -> Variable:
        """``E[item_k] + P[k]`` for real items and zero rows at padding, ``(..., n, d)``."""
        items = np.asarray(items)
        self.check_items(items)
        summed = tape.add(
            tape.gather(tape.param(ITEM_EMBEDDING), items, tag="embedding"),
            tape.param(POSITION_EMBEDDING),
        )
        return tape.mask(summed, (items != PADDING_ITEM)[..., None], 0.0)


def embed(seq: InteractionSequence, store: ParamStore) -> np.ndarray:
    """Embedded ``(n, d)`` matrix of one sequence with the values held in ``store``.

    Raises:
        ShapeMismatchError: if an item index is out of range.
    """
    item_table = store[ITEM_EMBEDDING].value
    tables = EmbeddingTables(
        item_table.shape[0] - 1, store[POSITION_EMBEDDING].shape[0], item_table.shape[1]
    )
    tape = Tape(store, record=False)
    return tables.forward(tape, np.asarray(seq.items)).value


def predict_scores(x_final: np.ndarray, item_table: np.ndarray) -> np.ndarray:
    """``X · Eᵀ``: row ``j`` scores every item, padding column included, as the
    next item after prefix ``j``."""
    return np.matmul(x_final, item_table.T)
