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

"""The FuXi-β block: RMSNorm, token mixer, then the multistage feed-forward network."""

from typing import Dict, List, Optional, Tuple

import numpy as np

from .model_config import ModelConfig
from ..bias.bias_functions import BiasFunctionKind, default_parameters
from ..bias.bias_matrix import ADDITIVE_MASK, MULTIPLICATIVE_MASK, BiasKind
from ..bias.bucketed_bias import BucketedRelativeBias
from ..bias.functional_bias import FunctionalRelativeBias
from ..mixers.aftm import aftm_forward
from ..mixers.mixer_config import MixerConfig, MixerLayout, MixerMode, MixerParams
from ..mixers.qk_attention import qk_attention_channels
from ..numerics.counters import TERM_FFN, TERM_ND2
from ..numerics.param_store import ParamStore
from ..numerics.tape import Tape, Variable


class FuxiBlock:
    """One decoder block.

    ``M = mixer(RMSNorm(X), t)``, then ``H = X + M W_down`` and
    ``out = H + (SiLU(R W_gate) ⊙ (R W_in)) W_out`` with ``R = RMSNorm(H)``.
    ``W_down`` maps the mixer width back to ``d``, so with the query-key mixer it
    plays the role of the attention output projection.

    Parameters are named ``block{index}.<scope>.<name>``.
    """

    def __init__(self, index: int, config: ModelConfig) -> None:
        self._prefix = f"block{index}"
        self._config = config
        mixer = config.mixer_config
        self._mixer = mixer
        self._positional: Optional[BucketedRelativeBias] = None
        self._temporal: Optional[FunctionalRelativeBias] = None
        if mixer.use_positional_map:
            self._positional = BucketedRelativeBias(
                f"{self._prefix}.rab.beta", BiasKind.POSITIONAL, config.rab_size
            )
        if mixer.use_temporal_map:
            kind = config.bias_kind
            bucketed = kind is BiasFunctionKind.BUCKET
            scale = config.bucket_time_scale if bucketed else config.time_scale
            self._temporal = FunctionalRelativeBias(
                f"{self._prefix}.frab", kind, scale, config.max_bucket
            )

    @property
    def prefix(self) -> str:
        """Returns the parameter name prefix."""
        return self._prefix

    @property
    def mixer(self) -> MixerConfig:
        """Returns the mixer configuration."""
        return self._mixer

    @property
    def temporal_bias(self) -> Optional[FunctionalRelativeBias]:
        """Returns the temporal bias module, ``None`` when the map is disabled."""
        return self._temporal

    @property
    def mask_value(self) -> float:
        """Returns the upper-triangle value of this block's bias maps."""
        if self._mixer.mode is MixerMode.QK_BASELINE and self._mixer.layout is MixerLayout.HSTU:
            return ADDITIVE_MASK
        return MULTIPLICATIVE_MASK

    def _name(self, scope: str, name: str) -> str:
        return f"{self._prefix}.{scope}.{name}"

    def weight_shapes(self) -> Dict[str, Tuple[int, ...]]:
        """Shapes of every projection and gain, keyed by full parameter name."""
        d, d_ffn = self._config.embed_dim, self._config.ffn_width
        shapes: Dict[str, Tuple[int, ...]] = {self._name("norm_mixer", "gain"): (d,)}
        for name, shape in self._mixer.parameter_shapes().items():
            shapes[self._name(self._mixer.scope, name)] = shape
        shapes[self._name("mffn", "W_down")] = (self._mixer.output_width, d)
        shapes[self._name("norm_ffn", "gain")] = (d,)
        shapes[self._name("mffn", "W_gate")] = (d, d_ffn)
        shapes[self._name("mffn", "W_in")] = (d, d_ffn)
        shapes[self._name("mffn", "W_out")] = (d_ffn, d)
        return shapes

    def bias_parameter_count(self) -> int:
        """Scalars held by the positional table and the temporal function."""
        count = self._positional.num_parameters if self._positional is not None else 0
        if self._temporal is not None:
            count += sum(
                v.size
                for v in default_parameters(
                    self._temporal.kind, max_bucket=self._config.max_bucket
                ).values()
            )
        return count

    def register(self, store: ParamStore, rng: np.random.Generator) -> None:
        """Add this block's parameters: projections from ``normal(0, init_std)``,
        gains at one, bias tables at zero and bias functions at their defaults."""
        for name, shape in self.weight_shapes().items():
            if name.endswith(".gain"):
                store.add(name, np.ones(shape))
            else:
                store.add(name, rng.normal(0.0, self._config.init_std, size=shape))
        if self._positional is not None:
            self._positional.register(store)
        if self._temporal is not None:
            self._temporal.register(store, rng)

    def mixer_params(self, tape: Tape) -> MixerParams:
        """Tape variables of the mixer projections."""
        scope = self._mixer.scope
        names = self._mixer.parameter_shapes()
        return MixerParams(
            W_u=tape.param(self._name(scope, "W_u")),
            W_v=tape.param(self._name(scope, "W_v")),
            W_q=tape.param(self._name(scope, "W_q")) if "W_q" in names else None,
            W_k=tape.param(self._name(scope, "W_k")) if "W_k" in names else None,
        )

    def bias_maps(
        self, tape: Tape, timestamps: np.ndarray
    ) -> Tuple[Optional[Variable], Optional[Variable]]:
        """Positional ``(n, n)`` and temporal ``(batch, n, n)`` maps, ``None`` when disabled."""
        positional = temporal = None
        if self._positional is not None:
            positional = self._positional.forward(tape, timestamps, self.mask_value)
        if self._temporal is not None:
            temporal = self._temporal.forward(tape, timestamps, self.mask_value)
        return positional, temporal

    def forward(self, tape: Tape, x: Variable, timestamps: np.ndarray) -> Variable:
        """Apply the block to ``x`` of shape ``(..., n, d)``."""
        normed = tape.rmsnorm(x, tape.param(self._name("norm_mixer", "gain")))
        positional, temporal = self.bias_maps(tape, timestamps)
        params = self.mixer_params(tape)
        if self._mixer.mode is MixerMode.AFTM:
            mixed = aftm_forward(tape, normed, positional, temporal, params, self._mixer)
        else:
            mixed = qk_attention_channels(tape, normed, positional, temporal, params, self._mixer)
        hidden = tape.add(
            x, tape.matmul(mixed, tape.param(self._name("mffn", "W_down")), term=TERM_ND2)
        )
        return tape.add(hidden, self._ffn(tape, hidden))

    def _ffn(self, tape: Tape, hidden: Variable) -> Variable:
        normed = tape.rmsnorm(hidden, tape.param(self._name("norm_ffn", "gain")))
        gate = tape.silu(
            tape.matmul(normed, tape.param(self._name("mffn", "W_gate")), term=TERM_FFN)
        )
        inner = tape.matmul(normed, tape.param(self._name("mffn", "W_in")), term=TERM_FFN)
        return tape.matmul(
            tape.mul(gate, inner), tape.param(self._name("mffn", "W_out")), term=TERM_FFN
        )

    def parameter_names(self, store: ParamStore) -> List[str]:
        """Names in ``store`` that belong to this block."""
        return [name for name in store.names() if name.startswith(self._prefix + ".")]


def fuxi_beta_block(
    tape: Tape, x: Variable, timestamps: np.ndarray, block: FuxiBlock
) -> Variable:
    """Functional form of :meth:`FuxiBlock.forward`."""
    return block.forward(tape, x, timestamps)
