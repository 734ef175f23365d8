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

"""Model hyperparameters."""

import dataclasses
import json
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional, Union

import numpy as np

from ..bias.bias_functions import BiasFunctionKind
from ..exceptions import ConfigurationError
from ..mixers.mixer_config import MixerConfig
from ..utils.validation import validate_in_set, validate_min, validate_range

DTYPES = ("float64", "float32")


@dataclass
class ModelConfig:
    """Everything needed to build a :class:`~fuxi_rec.neural_networks.SequentialRecommender`.

    ``d_ffn`` defaults to ``embed_dim`` and ``d_rab`` to ``max_len``. The mixer's
    ``d`` and ``n`` always follow ``embed_dim`` and ``max_len``; ``mixer`` may be
    given as a :class:`~fuxi_rec.mixers.MixerConfig` or as a dict of its other
    fields. ``bias_function`` selects the temporal map: a closed-form kind, or
    ``bucket`` for the bucketed table, which then uses ``bucket_time_scale``.
    """

    item_count: int
    max_len: int = 200
    embed_dim: int = 50
    num_blocks: int = 2
    d_ffn: Optional[int] = None
    num_negatives: int = 64
    mixer: Union[MixerConfig, Dict[str, Any], None] = None
    bias_function: str = "pow"
    time_scale: float = 86_400.0
    bucket_time_scale: float = 1.0
    max_bucket: int = 128
    d_rab: Optional[int] = None
    dtype: str = "float64"
    init_std: float = 0.02
    seed: int = 0
    learning_rate: float = 1e-3
    warmup_fraction: float = 0.02
    weight_decay: float = 0.0

    def __post_init__(self) -> None:
        validate_min("item_count", self.item_count, 2)
        validate_min("max_len", self.max_len, 2)
        validate_min("embed_dim", self.embed_dim, 1)
        validate_min("num_blocks", self.num_blocks, 1)
        if self.d_ffn is None:
            self.d_ffn = self.embed_dim
        validate_min("d_ffn", self.d_ffn, self.embed_dim)
        validate_min("num_negatives", self.num_negatives, 1)
        self.bias_function = BiasFunctionKind.parse(self.bias_function).value
        validate_range("time_scale", self.time_scale, 0.0, float("inf"), exclusive_min=True)
        validate_range(
            "bucket_time_scale", self.bucket_time_scale, 0.0, float("inf"), exclusive_min=True
        )
        validate_min("max_bucket", self.max_bucket, 1)
        if self.d_rab is None:
            self.d_rab = self.max_len
        validate_min("d_rab", self.d_rab, 1)
        validate_in_set("dtype", self.dtype, DTYPES)
        validate_range("init_std", self.init_std, 0.0, float("inf"), exclusive_min=True)
        validate_min("learning_rate", self.learning_rate, 0.0)
        validate_range("warmup_fraction", self.warmup_fraction, 0.0, 1.0)
        validate_min("weight_decay", self.weight_decay, 0.0)

        if self.mixer is None:
            self.mixer = MixerConfig(d=self.embed_dim, n=self.max_len)
        elif isinstance(self.mixer, dict):
            values = {k: v for k, v in self.mixer.items() if k not in ("d", "n")}
            self.mixer = MixerConfig.from_dict(
                dict(values, d=self.embed_dim, n=self.max_len)
            )
        elif (self.mixer.d, self.mixer.n) != (self.embed_dim, self.max_len):
            self.mixer = dataclasses.replace(self.mixer, d=self.embed_dim, n=self.max_len)

    @property
    def mixer_config(self) -> MixerConfig:
        """Returns the mixer configuration."""
        assert isinstance(self.mixer, MixerConfig)
        return self.mixer

    @property
    def ffn_width(self) -> int:
        """Returns the feed-forward hidden width."""
        assert self.d_ffn is not None
        return self.d_ffn

    @property
    def rab_size(self) -> int:
        """Returns the positional table length."""
        assert self.d_rab is not None
        return self.d_rab

    @property
    def np_dtype(self) -> np.dtype:
        """Returns the numpy floating point type."""
        return np.dtype(self.dtype)

    @property
    def bias_kind(self) -> BiasFunctionKind:
        """Returns the temporal bias function kind."""
        return BiasFunctionKind.parse(self.bias_function)

    def replace(self, **changes: Any) -> "ModelConfig":
        """A validated copy with ``changes`` applied; mixer changes may be given as a dict."""
        values = self.to_dict()
        mixer_changes = changes.pop("mixer", None)
        values.update(changes)
        if isinstance(mixer_changes, MixerConfig):
            values["mixer"] = mixer_changes.to_dict()
        elif mixer_changes:
            values["mixer"].update(mixer_changes)
        return ModelConfig.from_dict(values)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form."""
        values = asdict(self)
        values["mixer"] = self.mixer_config.to_dict()
        return values

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "ModelConfig":
        """Inverse of :meth:`to_dict`.

        Raises:
            ConfigurationError: on an unknown key or invalid value.
        """
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(values) - known
        if unknown:
            raise ConfigurationError(f"unknown model option(s): {', '.join(sorted(unknown))}")
        values = dict(values)
        if isinstance(values.get("mixer"), dict):
            values["mixer"] = dict(values["mixer"])
        try:
            return cls(**values)
        except TypeError as ex:
            raise ConfigurationError(str(ex)) from ex

    @classmethod
    def from_json(cls, path: str, section: Optional[str] = "model") -> "ModelConfig":
        """Load from a JSON file, reading ``section`` when present."""
        with open(path, "r", encoding="utf8") as file:
            values = json.load(file)
        if section and section in values:
            values = values[section]
        return cls.from_dict(values)
