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

"""Named learnable arrays with paired gradient buffers."""

import hashlib
from collections import OrderedDict
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from ..exceptions import CheckpointError, ConfigurationError


class Parameter:
    """A learnable array and its gradient buffer.

    Rows listed in ``pinned_rows`` are held at zero: their gradient is cleared
    on every accumulation and optimizers never move them.
    """

    def __init__(
        self,
        name: str,
        value: np.ndarray,
        trainable: bool = True,
        pinned_rows: Sequence[int] = (),
    ) -> None:
        self._name = name
        self.value = np.array(value, copy=True)
        self.grad = np.zeros_like(self.value)
        self._trainable = trainable
        self._pinned_rows = tuple(int(r) for r in pinned_rows)
        if self._pinned_rows:
            self.value[list(self._pinned_rows)] = 0.0

    @property
    def name(self) -> str:
        """Returns the unique parameter name."""
        return self._name

    @property
    def trainable(self) -> bool:
        """Returns whether optimizers and gradient checks consider this parameter."""
        return self._trainable

    @trainable.setter
    def trainable(self, trainable: bool) -> None:
        self._trainable = trainable

    @property
    def pinned_rows(self) -> Tuple[int, ...]:
        """Returns the rows held at zero."""
        return self._pinned_rows

    @property
    def shape(self) -> Tuple[int, ...]:
        """Returns the value shape."""
        return self.value.shape

    @property
    def size(self) -> int:
        """Returns the number of scalars."""
        return int(self.value.size)

    def accumulate(self, grad: np.ndarray) -> None:
        """Add ``grad`` into the buffer, keeping pinned rows at zero."""
        self.grad += grad
        if self._pinned_rows:
            self.grad[list(self._pinned_rows)] = 0.0

    def __repr__(self) -> str:
        return f"Parameter({self._name!r}, shape={self.shape}, trainable={self._trainable})"


class ParamStore:
    """Ordered map from name to :class:`Parameter`; iteration follows insertion order."""

    def __init__(self, dtype: np.dtype = np.float64) -> None:
        self._params: "OrderedDict[str, Parameter]" = OrderedDict()
        self._dtype = np.dtype(dtype)

    @property
    def dtype(self) -> np.dtype:
        """Returns the floating point type of every stored value."""
        return self._dtype

    def add(
        self,
        name: str,
        value: np.ndarray,
        trainable: bool = True,
        pinned_rows: Sequence[int] = (),
    ) -> Parameter:
        """Register a new parameter.

        Raises:
            ConfigurationError: if ``name`` is already registered.
        """
        if name in self._params:
            raise ConfigurationError(f"Duplicate parameter name '{name}'")
        param = Parameter(name, np.asarray(value, dtype=self._dtype), trainable, pinned_rows)
        self._params[name] = param
        return param

    def __getitem__(self, name: str) -> Parameter:
        return self._params[name]

    def __contains__(self, name: object) -> bool:
        return name in self._params

    def __iter__(self) -> Iterator[Parameter]:
        return iter(self._params.values())

    def __len__(self) -> int:
        return len(self._params)

    def names(self) -> List[str]:
        """Returns parameter names in iteration order."""
        return list(self._params)

    def trainable(self) -> List[Parameter]:
        """Returns trainable parameters in iteration order."""
        return [p for p in self._params.values() if p.trainable]

    def zero_grad(self) -> None:
        """Clear every gradient buffer."""
        for param in self._params.values():
            param.grad.fill(0.0)

    def num_parameters(self, trainable_only: bool = True) -> int:
        """Returns the scalar count, optionally restricted to trainable parameters."""
        params = self.trainable() if trainable_only else list(self._params.values())
        return sum(p.size for p in params)

    def checksum(self) -> str:
        """SHA-256 over names, shapes and value bytes, in iteration order."""
        digest = hashlib.sha256()
        for param in self._params.values():
            digest.update(param.name.encode("utf8"))
            digest.update(str(param.shape).encode("ascii"))
            digest.update(np.ascontiguousarray(param.value, dtype="<f8").tobytes())
        return digest.hexdigest()

    def state_dict(self) -> Dict[str, np.ndarray]:
        """Returns copies of every value keyed by name."""
        return OrderedDict((name, p.value.copy()) for name, p in self._params.items())

    def load_state_dict(self, state: Dict[str, np.ndarray], strict: bool = True) -> None:
        """Copy values from ``state`` into the registered parameters.

        Raises:
            CheckpointError: if names or shapes disagree with the registered parameters.
        """
        if strict:
            missing = set(self._params) - set(state)
            extra = set(state) - set(self._params)
            if missing or extra:
                raise CheckpointError(
                    f"Parameter names differ; missing {sorted(missing)}, unexpected {sorted(extra)}"
                )
        for name, value in state.items():
            param: Optional[Parameter] = self._params.get(name)
            if param is None:
                continue
            if tuple(value.shape) != param.shape:
                raise CheckpointError(
                    f"Shape of '{name}' is {tuple(value.shape)}, expected {param.shape}"
                )
            param.value[...] = value

    def __repr__(self) -> str:
        count = self.num_parameters()
        return f"ParamStore({len(self._params)} parameters, {count} trainable scalars)"
