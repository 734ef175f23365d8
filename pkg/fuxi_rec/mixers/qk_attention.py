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

"""Query-key self-attention with additive relative biases, the baseline the token mixer replaces."""

import math
from typing import Optional

from .aftm import apply_map, check_map, check_projection
from .mixer_config import MixerConfig, MixerLayout, MixerMode, MixerParams
from ..bias.bias_matrix import causal_mask
from ..exceptions import ConfigurationError, ShapeMismatchError
from ..numerics.counters import TERM_N2D, TERM_ND2
from ..numerics.tape import Tape, Variable


def _split_heads(tape: Tape, x: Variable, heads: int) -> Variable:
    # (..., n, d) -> (..., heads, n, d / heads)
    shape = x.shape[:-1] + (heads, x.shape[-1] // heads)
    return tape.swapaxes(tape.reshape(x, shape), -2, -3)


def _merge_heads(tape: Tape, x: Variable) -> Variable:
    merged = tape.swapaxes(x, -2, -3)
    return tape.reshape(merged, merged.shape[:-2] + (merged.shape[-2] * merged.shape[-1],))


def _per_head(tape: Tape, bias: Variable) -> Variable:
    # a batched (batch, n, n) map broadcasts over the head axis
    if bias.ndim == 3:
        return tape.reshape(bias, (bias.shape[0], 1) + bias.shape[1:])
    return bias


def _silu_attention(tape: Tape, logits: Variable, config: MixerConfig) -> Variable:
    """``mask(SiLU(logits)) / n``; masked entries are exactly zero."""
    attention = tape.mask(tape.silu(logits), causal_mask(config.n), 0.0)
    if config.apply_length_scale:
        attention = tape.scale(attention, 1.0 / config.n)
    return attention


def qk_attention_channels(
    tape: Tape,
    x: Variable,
    positional: Optional[Variable],
    temporal: Optional[Variable],
    params: MixerParams,
    config: MixerConfig,
) -> Variable:
    """Gated attention output before the output projection.

    With the ``fuxi`` layout each enabled map is its own channel: the per-head
    ``mask(SiLU(Q Kᵀ / √d_h)) / n``, ``B / n`` and ``Bᵗ / n`` each multiply the shared
    ``V``, and ``U`` (``c * d`` wide) gates the concatenation. Positional and temporal
    maps are expected with zeros above the diagonal.

    With the ``hstu`` layout the enabled maps are summed inside one attention,
    ``mask(SiLU(Q Kᵀ / √d_h + B + Bᵗ)) / n`` per head, and a ``d``-wide ``U`` gates
    the result.

    Q, K, V and U are all ``SiLU`` of their projections.

    Raises:
        ConfigurationError: if ``config`` is not in query-key mode or a map is missing.
        ShapeMismatchError: if shapes disagree.
    """
    if config.mode is not MixerMode.QK_BASELINE:
        raise ConfigurationError("qk_attention_forward needs a QK_BASELINE mode config")
    n = x.shape[-2]
    if n != config.n or x.shape[-1] != config.d:
        raise ShapeMismatchError(
            f"input {x.shape} does not match mixer n={config.n}, d={config.d}"
        )
    check_projection("W_v", x, params.W_v, config.d)
    check_projection("W_u", x, params.W_u, config.output_width)
    if config.use_positional_map:
        if positional is None:
            raise ConfigurationError("positional map is enabled but was not given")
        check_map("positional", positional, n)
    if config.use_temporal_map:
        if temporal is None:
            raise ConfigurationError("temporal map is enabled but was not given")
        check_map("temporal", temporal, n)

    v = tape.silu(tape.matmul(x, params.W_v, term=TERM_ND2))
    u = tape.silu(tape.matmul(x, params.W_u, term=TERM_ND2))
    logits = None
    if config.use_qk_map:
        check_projection("W_q", x, params.W_q, config.d)
        check_projection("W_k", x, params.W_k, config.d)
        q = _split_heads(tape, tape.silu(tape.matmul(x, params.W_q, term=TERM_ND2)), config.heads)
        k = _split_heads(tape, tape.silu(tape.matmul(x, params.W_k, term=TERM_ND2)), config.heads)
        logits = tape.scale(
            tape.matmul(q, tape.transpose(k), term=TERM_N2D), 1.0 / math.sqrt(config.head_dim)
        )

    if config.layout is MixerLayout.HSTU:
        if logits is None:
            for bias, enabled in (
                (positional, config.use_positional_map),
                (temporal, config.use_temporal_map),
            ):
                if enabled:
                    logits = bias if logits is None else tape.add(logits, bias)
            attention = _silu_attention(tape, logits, config)
            return tape.mul(u, tape.matmul(attention, v, term=TERM_N2D))
        if config.use_positional_map:
            logits = tape.add(logits, positional)
        if config.use_temporal_map:
            logits = tape.add(logits, _per_head(tape, temporal))
        attention = _silu_attention(tape, logits, config)
        heads_out = tape.matmul(attention, _split_heads(tape, v, config.heads), term=TERM_N2D)
        return tape.mul(u, _merge_heads(tape, heads_out))

    channels = []
    if logits is not None:
        attention = _silu_attention(tape, logits, config)
        heads_out = tape.matmul(attention, _split_heads(tape, v, config.heads), term=TERM_N2D)
        channels.append(_merge_heads(tape, heads_out))
    if config.use_positional_map:
        channels.append(apply_map(tape, positional, v, config))
    if config.use_temporal_map:
        channels.append(apply_map(tape, temporal, v, config))
    mixed = channels[0] if len(channels) == 1 else tape.concat(channels, axis=-1)
    return tape.mul(u, mixed)


def qk_attention_forward(
    tape: Tape,
    x: Variable,
    positional: Optional[Variable],
    temporal: Optional[Variable],
    params: MixerParams,
    config: MixerConfig,
) -> Variable:
    """:func:`qk_attention_channels` followed by the output projection ``W_o``.

    This is the standalone summed-attention baseline. :class:`~fuxi_rec.neural_networks.FuxiBlock`
    never calls it: a block feeds the channels of :func:`qk_attention_channels` to its
    multistage FFN, whose ``W_down`` takes the place of ``W_o``.

    Returns:
        ``(..., n, d)``.

    Raises:
        ConfigurationError: if ``W_o`` is missing.
        ShapeMismatchError: if shapes disagree.
    """
    channels = qk_attention_channels(tape, x, positional, temporal, params, config)
    if params.W_o is None:
        raise ConfigurationError("qk_attention_forward needs an output projection W_o")
    if params.W_o.shape != (config.output_width, config.d):
        raise ShapeMismatchError(
            f"W_o has shape {params.W_o.shape}, expected {(config.output_width, config.d)}"
        )
    return tape.matmul(channels, params.W_o, term=TERM_ND2)
