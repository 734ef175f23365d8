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

"""Analytic parameter count and the parameter audit printed by ``describe``."""

from collections import OrderedDict
from typing import Dict, Optional

from .model_config import ModelConfig
from ..bias.bias_functions import default_parameters
from ..mixers.mixer_config import MixerMode
from ..numerics.param_store import ParamStore


def block_parameter_breakdown(config: ModelConfig) -> Dict[str, int]:
    """Per-block scalar counts by component."""
    d, d_ffn = config.embed_dim, config.ffn_width
    mixer = config.mixer_config
    width = mixer.output_width
    breakdown: Dict[str, int] = OrderedDict()
    breakdown["W_u"] = d * width
    breakdown["W_v"] = d * d
    if mixer.use_qk_map:
        breakdown["W_q + W_k"] = 2 * d * d
    breakdown["W_down"] = width * d
    breakdown["SwiGLU FFN"] = 2 * d * d_ffn + d_ffn * d
    breakdown["norm gains"] = 2 * d
    if mixer.use_positional_map:
        breakdown["positional table"] = config.rab_size
    if mixer.use_temporal_map:
        initial = default_parameters(config.bias_kind, max_bucket=config.max_bucket)
        breakdown[f"temporal {config.bias_function}"] = sum(v.size for v in initial.values())
    return breakdown


def count_parameters(config: ModelConfig) -> int:
    """Trainable scalars implied by ``config``.

    For the token mixer with both maps this is
    ``(item_count + 1) d + n d + L (2d² + d² + 2d² + 2 d d_ffn + d_ffn d + 2d + f + d_rab)``
    where ``f`` counts the temporal function's parameters; the padding row is included.
    """
    embeddings = (config.item_count + 1) * config.embed_dim + config.max_len * config.embed_dim
    return embeddings + config.num_blocks * sum(block_parameter_breakdown(config).values())


def describe(config: ModelConfig, store: Optional[ParamStore] = None) -> str:
    """Human-readable parameter audit; when ``store`` is given the analytic total is
    compared with the registered scalars."""
    mixer = config.mixer_config
    if mixer.mode is MixerMode.AFTM:
        mode = "attention-free token mixer"
    else:
        mode = f"query-key attention ({mixer.layout.value} layout, {mixer.heads} heads)"
    lines = [
        f"items: {config.item_count}  n: {config.max_len}  d: {config.embed_dim}  "
        f"blocks: {config.num_blocks}  d_ffn: {config.ffn_width}",
        f"mixer: {mode}; maps: {', '.join(mixer.channel_names)}",
        f"temporal bias: {config.bias_function}  negatives: {config.num_negatives}  "
        f"dtype: {config.dtype}",
        f"item embedding: {(config.item_count + 1) * config.embed_dim}",
        f"position embedding: {config.max_len * config.embed_dim}",
        "per block:",
    ]
    breakdown = block_parameter_breakdown(config)
    for name, count in breakdown.items():
        lines.append(f"  {name}: {count}")
    total = count_parameters(config)
    lines.append(f"total trainable parameters: {total}")
    if store is not None:
        registered = store.num_parameters()
        status = "matches" if registered == total else "DIFFERS"
        lines.append(f"registered in store: {registered} ({status})")
    return "\n".join(lines)
