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

"""
Learnable functions of elapsed time used as the temporal attention bias.

Each kind has a closed form over elapsed time ``x >= 0`` (in units of the
model's ``time_scale``)::

    linear   a * x + b
    log      a * log(1 + exp(b) * x) + c
    exp      a * exp(-exp(b) * x)
    sin      c * sin(a * x + b) + d
    pow      a * (1 + x) ** -softplus(b_raw)
    mixed    mean of the five kinds above, each with its own parameters
    nn       1 -> 16 -> 16 -> 1 perceptron, sine then SiLU activations
    zero     0
    bucket   beta_t[floor(log2(1 + x))], the bucketed table lookup

The formulas are written once against the operation surface shared by
:class:`~fuxi_rec.numerics.Tape` and :class:`~fuxi_rec.numerics.EagerOps`, so the
training path and the reference evaluation cannot drift apart.
"""

import math
from collections import OrderedDict
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Mapping, Optional, Union

import numpy as np

from ..exceptions import ConfigurationError, NonFiniteError
from ..numerics.kernels import inverse_softplus, softplus
from ..numerics.tape import EagerOps

MLP_WIDTH = 16
DEFAULT_MAX_BUCKET = 128
CLOSED_FORM_KINDS = ("linear", "log", "exp", "sin", "pow")


class BiasFunctionKind(Enum):
    """The temporal bias function families."""

    LINEAR = "linear"
    LOG = "log"
    EXP = "exp"
    SIN = "sin"
    POW = "pow"
    MIXED = "mixed"
    NN = "nn"
    ZERO = "zero"
    BUCKET = "bucket"

    @classmethod
    def parse(cls, name: Union[str, "BiasFunctionKind"]) -> "BiasFunctionKind":
        """Look a kind up by name.

        Raises:
            ConfigurationError: listing the valid names if ``name`` is unknown.
        """
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError as ex:
            raise ConfigurationError(
                f"unknown bias function kind {name!r}; valid kinds: {', '.join(valid_kinds())}"
            ) from ex


def valid_kinds() -> List[str]:
    """Names of every bias function kind."""
    return [kind.value for kind in BiasFunctionKind]


def _closed_form_defaults(kind: str) -> Dict[str, float]:
    return {
        "linear": {"a": -0.01, "b": 1.0},
        "log": {"a": -0.1, "b": 0.0, "c": 1.0},
        "exp": {"a": 1.0, "b": 0.0},
        "sin": {"a": 1.0, "b": 0.0, "c": 1.0, "d": 0.0},
        "pow": {"a": 1.0, "b_raw": inverse_softplus(1.0)},
    }[kind]


def default_parameters(
    kind: BiasFunctionKind,
    rng: Optional[np.random.Generator] = None,
    max_bucket: int = DEFAULT_MAX_BUCKET,
) -> "OrderedDict[str, np.ndarray]":
    """Initial parameters for ``kind``.

    Closed forms start from a decaying curve (``pow`` with ``a = 1`` and an effective
    exponent of 1). The perceptron draws its weights from ``rng``. The bucket table
    starts at zero.
    """
    params: "OrderedDict[str, np.ndarray]" = OrderedDict()
    if kind.value in CLOSED_FORM_KINDS:
        for name, value in _closed_form_defaults(kind.value).items():
            params[name] = np.array(value)
    elif kind is BiasFunctionKind.MIXED:
        for sub in CLOSED_FORM_KINDS:
            for name, value in _closed_form_defaults(sub).items():
                params[f"{sub}.{name}"] = np.array(value)
    elif kind is BiasFunctionKind.NN:
        rng = rng if rng is not None else np.random.default_rng(0)
        params["W1"] = rng.normal(0.0, 1.0, size=(1, MLP_WIDTH))
        params["b1"] = rng.uniform(-math.pi, math.pi, size=MLP_WIDTH)
        params["W2"] = rng.normal(0.0, 1.0 / math.sqrt(MLP_WIDTH), size=(MLP_WIDTH, MLP_WIDTH))
        params["b2"] = np.zeros(MLP_WIDTH)
        params["W3"] = rng.normal(0.0, 1.0 / math.sqrt(MLP_WIDTH), size=(MLP_WIDTH, 1))
        params["b3"] = np.zeros(1)
    elif kind is BiasFunctionKind.BUCKET:
        params["beta_t"] = np.zeros(max_bucket)
    return params


@dataclass
class BiasFunctionSpec:
    """A bias function kind and its current parameter values.

    ``pow`` stores its exponent as ``b_raw`` with effective exponent
    ``softplus(b_raw) > 0``; ``exp`` uses the rate ``exp(b) > 0``. Use the
    :meth:`pow` and :meth:`exp` factories to build a spec from effective values.
    """

    kind: BiasFunctionKind
    params: Dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.kind = BiasFunctionKind.parse(self.kind)
        expected = default_parameters(self.kind)
        if not self.params:
            self.params = expected
        self.params = OrderedDict(
            (name, np.asarray(value, dtype=np.float64)) for name, value in self.params.items()
        )
        if set(self.params) != set(expected):
            raise ConfigurationError(
                f"{self.kind.value} bias expects parameters {sorted(expected)}, "
                f"got {sorted(self.params)}"
            )

    @classmethod
    def default(
        cls, kind: Union[str, "BiasFunctionKind"], rng: Optional[np.random.Generator] = None
    ) -> "BiasFunctionSpec":
        """Spec with :func:`default_parameters`."""
        kind = BiasFunctionKind.parse(kind)
        return cls(kind, default_parameters(kind, rng))

    @classmethod
    def pow(cls, a: float, b: float) -> "BiasFunctionSpec":
        """``a * (1 + x) ** -b`` for an effective exponent ``b > 0``."""
        if b <= 0:
            raise ConfigurationError(f"pow exponent must be > 0, was {b}")
        return cls(BiasFunctionKind.POW, {"a": a, "b_raw": inverse_softplus(b)})

    @classmethod
    def exp(cls, a: float, rate: float) -> "BiasFunctionSpec":
        """``a * exp(-rate * x)`` for ``rate > 0``."""
        if rate <= 0:
            raise ConfigurationError(f"exp rate must be > 0, was {rate}")
        return cls(BiasFunctionKind.EXP, {"a": a, "b": math.log(rate)})

    @property
    def num_parameters(self) -> int:
        """Returns the scalar count over every parameter."""
        return int(sum(v.size for v in self.params.values()))

    def effective(self) -> Dict[str, float]:
        """Scalar parameters with positivity transforms applied, for reporting."""
        values = {k: float(v) for k, v in self.params.items() if v.size == 1}
        if self.kind is BiasFunctionKind.POW:
            values["b"] = float(softplus(values.pop("b_raw")))
        return values

    def check_finite(self) -> None:
        """Raises :class:`NonFiniteError` if a parameter is NaN or infinite."""
        for name, value in self.params.items():
            if not np.all(np.isfinite(value)):
                raise NonFiniteError(f"{self.kind.value} bias parameter {name} is not finite")

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form."""
        return {"kind": self.kind.value, "params": {k: v.tolist() for k, v in self.params.items()}}


# ---- shared formulas ----------------------------------------------------------


def bucket_indices(x: np.ndarray, max_bucket: int) -> np.ndarray:
    """``floor(log2(1 + x))`` clipped to ``[0, max_bucket - 1]``."""
    buckets = np.floor(np.log2(1.0 + np.maximum(x, 0.0)))
    return np.clip(buckets, 0, max_bucket - 1).astype(np.int64)


def _linear(ops: Any, p: Mapping[str, Any], x: np.ndarray) -> Any:
    return ops.add(ops.mul(p["a"], ops.constant(x)), p["b"])


def _log(ops: Any, p: Mapping[str, Any], x: np.ndarray) -> Any:
    inner = ops.add_scalar(ops.mul(ops.exp(p["b"]), ops.constant(x)), 1.0)
    return ops.add(ops.mul(p["a"], ops.log(inner)), p["c"])


def _exp(ops: Any, p: Mapping[str, Any], x: np.ndarray) -> Any:
    rate = ops.scale(ops.exp(p["b"]), -1.0)
    return ops.mul(p["a"], ops.exp(ops.mul(rate, ops.constant(x))))


def _sin(ops: Any, p: Mapping[str, Any], x: np.ndarray) -> Any:
    phase = ops.add(ops.mul(p["a"], ops.constant(x)), p["b"])
    return ops.add(ops.mul(p["c"], ops.sin(phase)), p["d"])


def _pow(ops: Any, p: Mapping[str, Any], x: np.ndarray) -> Any:
    exponent = ops.scale(ops.softplus(p["b_raw"]), -1.0)
    return ops.mul(p["a"], ops.exp(ops.mul(exponent, ops.constant(np.log1p(x)))))


_CLOSED_FORMS: Dict[str, Callable[[Any, Mapping[str, Any], np.ndarray], Any]] = {
    "linear": _linear,
    "log": _log,
    "exp": _exp,
    "sin": _sin,
    "pow": _pow,
}


def _mixed(ops: Any, p: Mapping[str, Any], x: np.ndarray) -> Any:
    total = None
    for sub in CLOSED_FORM_KINDS:
        sub_params = {k.split(".", 1)[1]: v for k, v in p.items() if k.startswith(sub + ".")}
        value = _CLOSED_FORMS[sub](ops, sub_params, x)
        total = value if total is None else ops.add(total, value)
    return ops.scale(total, 1.0 / len(CLOSED_FORM_KINDS))


def _nn(ops: Any, p: Mapping[str, Any], x: np.ndarray) -> Any:
    column = ops.constant(x.reshape(-1, 1))
    hidden = ops.sin(ops.add(ops.matmul(column, p["W1"], term="bias_fn"), p["b1"]))
    hidden = ops.silu(ops.add(ops.matmul(hidden, p["W2"], term="bias_fn"), p["b2"]))
    out = ops.add(ops.matmul(hidden, p["W3"], term="bias_fn"), p["b3"])
    return ops.reshape(out, x.shape)


def bias_formula(
    ops: Any, kind: BiasFunctionKind, params: Mapping[str, Any], x: np.ndarray
) -> Any:
    """Evaluate the gather-free kinds on elapsed times ``x`` through ``ops``.

    ``params`` maps parameter names to whatever ``ops`` operates on: plain arrays
    for :class:`EagerOps`, variables for a tape.

    Raises:
        ConfigurationError: for ``bucket``, which reads a table and is built by
            :func:`~fuxi_rec.bias.bucketed_rab_temporal` instead.
    """
    x = np.asarray(x, dtype=np.float64)
    if kind.value in _CLOSED_FORMS:
        return _CLOSED_FORMS[kind.value](ops, params, x)
    if kind is BiasFunctionKind.MIXED:
        return _mixed(ops, params, x)
    if kind is BiasFunctionKind.NN:
        return _nn(ops, params, x)
    if kind is BiasFunctionKind.ZERO:
        return ops.constant(np.zeros_like(x))
    raise ConfigurationError(f"{kind.value} is not a closed-form bias function")


def eval_bias_function(spec: BiasFunctionSpec, x: float) -> float:
    """Value of ``spec`` at elapsed time ``x >= 0``.

    Raises:
        ConfigurationError: if ``x`` is negative.
    """
    if x < 0:
        raise ConfigurationError(f"elapsed time must be >= 0, was {x}")
    if spec.kind is BiasFunctionKind.BUCKET:
        table = spec.params["beta_t"]
        return float(table[bucket_indices(np.array(x), table.size)])
    return float(bias_formula(EagerOps(), spec.kind, spec.params, np.array(float(x))))
