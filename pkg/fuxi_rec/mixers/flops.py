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

"""Leading-order multiply counts of one block, counted on instrumented kernels."""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict

import numpy as np

from .mixer_config import MixerConfig, MixerLayout, MixerMode
from ..numerics.counters import TERM_FFN, TERM_N2D, TERM_ND2, KernelCounter
from ..numerics.param_store import ParamStore
from ..numerics.tape import Tape


@dataclass(frozen=True)
class FlopTerms:
    """Coefficients of ``n d²``, ``n² d`` and ``n d_ffn d`` plus raw tallies."""

    nd2: Fraction
    n2d: Fraction
    ffn: Fraction
    multiplies: Dict[str, int]
    gathers: Dict[str, int]

    @property
    def mixer_terms(self) -> Fraction:
        """``nd2 + n2d`` coefficient sum, the mixer-and-projection cost at ``n = d``."""
        return self.nd2 + self.n2d


def closed_form_terms(config: MixerConfig) -> Dict[str, int]:
    """Coefficients the block should count for ``config``.

    Projections contribute ``W_v`` and ``W_u`` (``c`` channels wide), ``W_q`` and
    ``W_k`` when the query-key map is on, and ``W_down`` from the mixer width back
    to ``d``. Every channel applies one ``n x n`` map to the values and the
    query-key map adds its own product.
    """
    qk = 2 if config.use_qk_map else 0
    maps = int(config.use_positional_map) + int(config.use_temporal_map)
    if config.mode is MixerMode.QK_BASELINE and config.layout is MixerLayout.HSTU:
        return {TERM_ND2: qk + 3, TERM_N2D: 2 if config.use_qk_map else 1, TERM_FFN: 3}
    channels = config.channels
    return {TERM_ND2: qk + 1 + 2 * channels, TERM_N2D: qk // 2 + channels, TERM_FFN: 3}


def flop_count(config: MixerConfig, n: int, d: int, d_ffn: int, seed: int = 0) -> FlopTerms:
    """Run one block forward on a single random sequence and count its multiplies.

    Args:
        config: mixer switches; ``config.d`` and ``config.n`` are replaced by ``d``, ``n``.
        n: sequence length.
        d: embedding width.
        d_ffn: feed-forward width.
        seed: seed for weights and inputs.

    Returns:
        Counted coefficients as exact fractions.
    """
    # pylint: disable=cyclic-import
    from ..neural_networks.block import FuxiBlock
    from ..neural_networks.model_config import ModelConfig

    values = config.to_dict()
    values.update(d=d, n=n)
    model_config = ModelConfig(
        item_count=2,
        max_len=n,
        embed_dim=d,
        d_ffn=d_ffn,
        num_blocks=1,
        mixer=values,
        seed=seed,
    )
    rng = np.random.default_rng(seed)
    store = ParamStore()
    block = FuxiBlock(0, model_config)
    block.register(store, rng)
    counter = KernelCounter()
    tape = Tape(store, counter=counter, record=False)
    x = tape.constant(rng.normal(size=(1, n, d)))
    timestamps = np.cumsum(rng.integers(0, 86_400, size=(1, n)), axis=1)
    block.forward(tape, x, timestamps)
    multiplies = counter.multiplies
    return FlopTerms(
        nd2=Fraction(multiplies.get(TERM_ND2, 0), n * d * d),
        n2d=Fraction(multiplies.get(TERM_N2D, 0), n * n * d),
        ffn=Fraction(multiplies.get(TERM_FFN, 0), n * d_ffn * d),
        multiplies=multiplies,
        gathers=counter.gathers,
    )
