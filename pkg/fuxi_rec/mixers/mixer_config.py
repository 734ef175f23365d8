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

"""Token mixer configuration and parameters."""

import logging
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from ..exceptions import ConfigurationError
from ..numerics.tape import Variable
from ..utils.validation import validate_min

logger = logging.getLogger(__name__)


class MixerMode(Enum):
    """How tokens exchange information."""

    AFTM = "aftm"
    QK_BASELINE = "qk_baseline"


class MixerLayout(Enum):
    """How attention maps are combined in query-key mode.

    ``fuxi`` keeps one channel per map, each applied to the shared values and the
    channels gated by a wide ``U``. ``hstu`` sums the maps inside one SiLU
    attention and gates the result with a ``d``-wide ``U``.
    """

    FUXI = "fuxi"
    HSTU = "hstu"


CHANNEL_QK = "qk"
CHANNEL_POSITIONAL = "positional"
CHANNEL_TEMPORAL = "temporal"


@dataclass
class MixerConfig:
    """Mixer switches and dimensions.

    ``AFTM`` mode never computes a query-key map; ``use_qk_map`` is forced off.
    At least one map must be enabled, and in ``QK_BASELINE`` mode ``heads`` must
    divide ``d``.
    """

    d: int
    n: int
    mode: MixerMode = MixerMode.AFTM
    layout: MixerLayout = MixerLayout.FUXI
    use_qk_map: bool = False
    use_positional_map: bool = True
    use_temporal_map: bool = True
    heads: int = 4
    apply_length_scale: bool = True

    def __post_init__(self) -> None:
        self.mode = MixerMode(self.mode)
        self.layout = MixerLayout(self.layout)
        validate_min("d", self.d, 1)
        validate_min("n", self.n, 1)
        validate_min("heads", self.heads, 1)
        if self.mode is MixerMode.AFTM and self.use_qk_map:
            logger.debug("AFTM mode has no query-key map; use_qk_map turned off")
            self.use_qk_map = False
        if not (self.use_qk_map or self.use_positional_map or self.use_temporal_map):
            raise ConfigurationError("at least one attention map must be enabled")
        if self.mode is MixerMode.QK_BASELINE and self.d % self.heads:
            raise ConfigurationError(f"heads ({self.heads}) must divide d ({self.d})")

    @property
    def head_dim(self) -> int:
        """Returns the per-head width."""
        return self.d // self.heads

    @property
    def channel_names(self) -> List[str]:
        """Returns the enabled maps in the order their channels are concatenated."""
        names = []
        if self.use_qk_map:
            names.append(CHANNEL_QK)
        if self.use_positional_map:
            names.append(CHANNEL_POSITIONAL)
        if self.use_temporal_map:
            names.append(CHANNEL_TEMPORAL)
        return names

    @property
    def channels(self) -> int:
        """Returns how many ``d``-wide channels the mixer emits."""
        if self.mode is MixerMode.QK_BASELINE and self.layout is MixerLayout.HSTU:
            return 1
        return len(self.channel_names)

    @property
    def output_width(self) -> int:
        """Returns the width of the mixer output before projection back to ``d``."""
        return self.channels * self.d

    @property
    def scope(self) -> str:
        """Returns the parameter scope, ``aftm`` or ``attn``."""
        return "aftm" if self.mode is MixerMode.AFTM else "attn"

    def parameter_shapes(self) -> Dict[str, Tuple[int, int]]:
        """Local parameter names and shapes, excluding the output projection."""
        shapes: Dict[str, Tuple[int, int]] = {}
        if self.use_qk_map:
            shapes["W_q"] = (self.d, self.d)
            shapes["W_k"] = (self.d, self.d)
        shapes["W_v"] = (self.d, self.d)
        shapes["W_u"] = (self.d, self.output_width)
        return shapes

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form."""
        values = asdict(self)
        values["mode"] = self.mode.value
        values["layout"] = self.layout.value
        return values

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "MixerConfig":
        """Inverse of :meth:`to_dict`.

        Raises:
            ConfigurationError: on an unknown key or value.
        """
        known = set(cls.__dataclass_fields__)  # pylint: disable=no-member
        unknown = set(values) - known
        if unknown:
            raise ConfigurationError(f"unknown mixer option(s): {', '.join(sorted(unknown))}")
        try:
            return cls(**values)
        except ValueError as ex:
            if isinstance(ex, ConfigurationError):
                raise
            raise ConfigurationError(str(ex)) from ex


@dataclass
class MixerParams:
    """Tape variables of one mixer. Query-key weights are absent in AFTM mode."""

    W_u: Variable  # pylint: disable=invalid-name
    W_v: Variable  # pylint: disable=invalid-name
    W_q: Optional[Variable] = None  # pylint: disable=invalid-name
    W_k: Optional[Variable] = None  # pylint: disable=invalid-name
    W_o: Optional[Variable] = None  # pylint: disable=invalid-name
