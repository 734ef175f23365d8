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

"""The attention-free token mixer."""

from typing import Optional

from .mixer_config import MixerConfig, MixerMode, MixerParams
from ..exceptions import ConfigurationError, ShapeMismatchError
from ..numerics.counters import TERM_N2D, TERM_ND2
from ..numerics.tape import Tape, Variable


def check_map(name: str, bias: Optional[Variable], n: int) -> None:
    """Raise unless ``bias`` is ``(n, n)`` or ``(batch, n, n)``."""
    if bias is not None and (bias.ndim not in (2, 3) or bias.shape[-2:] != (n, n)):
        raise ShapeMismatchError(f"{name} map has shape {bias.shape}, expected (..., {n}, {n})")


def check_projection(name: str, x: Variable, weight: Optional[Variable], width: int) -> None:
    """Raise unless ``weight`` maps the last axis of ``x`` to ``width``."""
    if weight is None:
        raise ConfigurationError(f"mixer parameter {name} is missing")
    if weight.shape != (x.shape[-1], width):
        raise ShapeMismatchError(
            f"{name} has shape {weight.shape}, expected {(x.shape[-1], width)}"
        )


def apply_map(
    tape: Tape, bias: Variable, values: Variable, config: MixerConfig
) -> Variable:
    """``bias @ values``, scaled by ``1/n`` when the config asks for it."""
    if config.apply_length_scale:
        bias = tape.scale(bias, 1.0 / config.n)
    return tape.matmul(bias, values, term=TERM_N2D)


def aftm_forward(
    tape: Tape,
    x: Variable,
    positional: Optional[Variable],
    temporal: Optional[Variable],
    params: MixerParams,
    config: MixerConfig,
) -> Variable:
    """Mix tokens through the bias maps alone.

    ``U = SiLU(X W_u)`` and ``V = SiLU(X W_v)``; the result is
    ``U ⊙ concat(B V, Bᵗ V)`` over the enabled maps. Both maps must be causally
    masked with zeros above the diagonal. No query or key is computed.

    Args:
        tape: tape recording the operations.
        x: ``(..., n, d)`` normalized block input.
        positional: positional map ``B``, ``(n, n)``; ignored when disabled.
        temporal: temporal map ``Bᵗ``, ``(n, n)`` or ``(batch, n, n)``; ignored when disabled.
        params: ``W_u`` of shape ``(d, c * d)`` and ``W_v`` of shape ``(d, d)``.
        config: an ``AFTM`` mode config.

    Returns:
        ``(..., n, c * d)`` where ``c`` counts the enabled maps.

    Raises:
        ConfigurationError: if ``config`` is not in AFTM mode or a map is missing.
        ShapeMismatchError: if shapes disagree.
    """
    if config.mode is not MixerMode.AFTM:
        raise ConfigurationError("aftm_forward needs an AFTM mode config")
    n = x.shape[-2]
    if n != config.n or x.shape[-1] != config.d:
        raise ShapeMismatchError(
            f"input {x.shape} does not match mixer n={config.n}, d={config.d}"
        )
    check_projection("W_u", x, params.W_u, config.output_width)
    check_projection("W_v", x, params.W_v, config.d)

    u = tape.silu(tape.matmul(x, params.W_u, term=TERM_ND2))
    v = tape.silu(tape.matmul(x, params.W_v, term=TERM_ND2))
    channels = []
    for enabled, name, bias in (
        (config.use_positional_map, "positional", positional),
        (config.use_temporal_map, "temporal", temporal),
    ):
        if not enabled:
            continue
        if bias is None:
            raise ConfigurationError(f"{name} map is enabled but was not given")
        check_map(name, bias, n)
        channels.append(apply_map(tape, bias, v, config))
    mixed = channels[0] if len(channels) == 1 else tape.concat(channels, axis=-1)
    return tape.mul(u, mixed)
