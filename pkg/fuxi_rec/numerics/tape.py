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
Reverse-mode differentiation over the fixed set of operations the models use.

A :class:`Tape` evaluates each operation eagerly with numpy, records a node
holding the backward closure, and :meth:`Tape.backward` replays the nodes in
exact reverse order. Gradients of parameters are accumulated into the
:class:`~fuxi_rec.numerics.ParamStore` the tape was created with.
"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import kernels
from .counters import KernelCounter
from .param_store import ParamStore
from ..exceptions import FuxiRecError, NonFiniteError, ShapeMismatchError
from ..utils.loss_functions import SampledSoftmaxLoss

logger = logging.getLogger(__name__)
_SAMPLED_SOFTMAX = SampledSoftmaxLoss()

ArrayLike = Union[np.ndarray, float]
BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]


def reduce_to(grad: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
    """Sum ``grad`` over the axes that broadcasting expanded from ``shape``."""
    if grad.shape == shape:
        return grad
    extra = grad.ndim - len(shape)
    if extra > 0:
        grad = grad.sum(axis=tuple(range(extra)))
    axes = tuple(i for i, size in enumerate(shape) if size == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True)
    return grad.reshape(shape)


class Variable:
    """A value produced on a tape, with the gradient filled in by the backward pass."""

    __slots__ = ("value", "grad", "requires_grad", "param_name")

    def __init__(
        self, value: np.ndarray, requires_grad: bool = False, param_name: Optional[str] = None
    ) -> None:
        self.value = value
        self.grad: Optional[np.ndarray] = None
        self.requires_grad = requires_grad
        self.param_name = param_name

    @property
    def shape(self) -> Tuple[int, ...]:
        """Returns the value shape."""
        return self.value.shape

    @property
    def ndim(self) -> int:
        """Returns the number of axes."""
        return self.value.ndim

    def __repr__(self) -> str:
        return f"Variable(shape={self.shape}, requires_grad={self.requires_grad})"


class _Node:
    __slots__ = ("output", "parents", "backward")

    def __init__(self, output: Variable, parents: Tuple[Variable, ...], backward: BackwardFn):
        self.output = output
        self.parents = parents
        self.backward = backward


class Tape:
    """Records operations for one forward pass and differentiates them.

    Args:
        store: parameter store read by :meth:`param` and written by :meth:`backward`.
        counter: optional counter receiving multiply and gather tallies.
        dtype: floating point type for constants.
        check_finite: raise :class:`~fuxi_rec.exceptions.NonFiniteError` as soon as an
            operation produces a NaN or infinity.
        record: when false nothing is recorded and :meth:`backward` is unavailable,
            for inference.
    """

    def __init__(
        self,
        store: Optional[ParamStore] = None,
        counter: Optional[KernelCounter] = None,
        dtype: np.dtype = np.float64,
        check_finite: bool = True,
        record: bool = True,
    ) -> None:
        self._store = store
        self._recording = record
        self._counter = counter
        self._dtype = np.dtype(store.dtype if store is not None else dtype)
        self._check_finite = check_finite
        self._nodes: List[_Node] = []
        self._params: Dict[str, Variable] = {}

    @property
    def counter(self) -> Optional[KernelCounter]:
        """Returns the attached counter, if any."""
        return self._counter

    @property
    def dtype(self) -> np.dtype:
        """Returns the floating point type of constants."""
        return self._dtype

    @property
    def num_nodes(self) -> int:
        """Returns the number of recorded nodes."""
        return len(self._nodes)

    # ---- leaves ---------------------------------------------------------------

    def param(self, name: str) -> Variable:
        """Returns the variable bound to the stored parameter ``name``.

        Raises:
            FuxiRecError: if the tape has no store or the name is unknown.
        """
        if self._store is None:
            raise FuxiRecError("Tape has no parameter store")
        if name not in self._params:
            if name not in self._store:
                raise FuxiRecError(f"Unknown parameter '{name}'")
            self._params[name] = Variable(self._store[name].value, self._recording, name)
        return self._params[name]

    def constant(self, value: ArrayLike) -> Variable:
        """Wrap a value that receives no gradient."""
        return Variable(np.asarray(value, dtype=self._dtype))

    def leaf(self, value: ArrayLike) -> Variable:
        """Wrap a value whose gradient is wanted but which is not a stored parameter."""
        return Variable(np.array(value, dtype=self._dtype), True)

    # ---- recording ------------------------------------------------------------

    def _record(
        self, op: str, value: np.ndarray, parents: Tuple[Variable, ...], backward: BackwardFn
    ) -> Variable:
        if self._check_finite:
            kernels.check_finite(op, value)
        out = Variable(value, self._recording and any(p.requires_grad for p in parents))
        if out.requires_grad:
            self._nodes.append(_Node(out, parents, backward))
        return out

    def _count(self, tag: str, count: int) -> None:
        if self._counter is not None:
            self._counter.add_multiplies(tag, count)

    def _count_gathers(self, tag: str, count: int) -> None:
        if self._counter is not None:
            self._counter.add_gathers(tag, count)

    # ---- elementwise ----------------------------------------------------------

    def add(self, a: Variable, b: Variable) -> Variable:
        """``a + b`` with broadcasting of the smaller operand."""
        return self._record(
            "add",
            a.value + b.value,
            (a, b),
            lambda g: (reduce_to(g, a.shape), reduce_to(g, b.shape)),
        )

    def sub(self, a: Variable, b: Variable) -> Variable:
        """``a - b``."""
        return self._record(
            "sub",
            a.value - b.value,
            (a, b),
            lambda g: (reduce_to(g, a.shape), -reduce_to(g, b.shape)),
        )

    def mul(self, a: Variable, b: Variable) -> Variable:
        """Elementwise product."""
        return self._record(
            "mul",
            a.value * b.value,
            (a, b),
            lambda g: (reduce_to(g * b.value, a.shape), reduce_to(g * a.value, b.shape)),
        )

    def scale(self, a: Variable, factor: float) -> Variable:
        """``factor * a`` for a constant ``factor``."""
        return self._record("scale", a.value * factor, (a,), lambda g: (g * factor,))

    def add_scalar(self, a: Variable, offset: float) -> Variable:
        """``a + offset`` for a constant ``offset``."""
        return self._record("add_scalar", a.value + offset, (a,), lambda g: (g,))

    def silu(self, a: Variable) -> Variable:
        """``a * sigmoid(a)``."""
        return self._record(
            "silu", kernels.silu(a.value), (a,), lambda g: (g * kernels.silu_grad(a.value),)
        )

    def sigmoid(self, a: Variable) -> Variable:
        """Logistic function."""
        out = kernels.sigmoid(a.value)
        return self._record("sigmoid", out, (a,), lambda g: (g * out * (1.0 - out),))

    def softplus(self, a: Variable) -> Variable:
        """``log(1 + exp(a))``."""
        return self._record(
            "softplus", kernels.softplus(a.value), (a,), lambda g: (g * kernels.sigmoid(a.value),)
        )

    def exp(self, a: Variable) -> Variable:
        """Elementwise exponential."""
        out = np.exp(a.value)
        return self._record("exp", out, (a,), lambda g: (g * out,))

    def log(self, a: Variable) -> Variable:
        """Elementwise natural logarithm."""
        return self._record("log", np.log(a.value), (a,), lambda g: (g / a.value,))

    def sin(self, a: Variable) -> Variable:
        """Elementwise sine."""
        return self._record("sin", np.sin(a.value), (a,), lambda g: (g * np.cos(a.value),))

    def mask(self, a: Variable, keep: np.ndarray, fill: float = 0.0) -> Variable:
        """Replace entries where ``keep`` is false by ``fill``; they pass no gradient."""
        keep = np.asarray(keep, dtype=bool)
        return self._record(
            "mask",
            np.where(keep, a.value, fill).astype(self._dtype, copy=False),
            (a,),
            lambda g: (reduce_to(np.where(keep, g, 0.0), a.shape),),
        )

    # ---- linear algebra and shape --------------------------------------------

    def matmul(self, a: Variable, b: Variable, term: str = "other") -> Variable:
        """Matrix product over the last two axes, counted under ``term``.

        Raises:
            ShapeMismatchError: if the inner dimensions differ.
        """
        out = kernels.matmul(a.value, b.value)
        self._count(term, kernels.matmul_multiplies(a.shape, b.shape))

        def backward(g: np.ndarray) -> Tuple[Optional[np.ndarray], Optional[np.ndarray]]:
            d_a = reduce_to(np.matmul(g, np.swapaxes(b.value, -1, -2)), a.shape)
            d_b = (
                reduce_to(np.matmul(np.swapaxes(a.value, -1, -2), g), b.shape)
                if b.requires_grad
                else None
            )
            return d_a if a.requires_grad else None, d_b

        return self._record("matmul", out, (a, b), backward)

    def transpose(self, a: Variable) -> Variable:
        """Swap the last two axes."""
        return self._record(
            "transpose", np.swapaxes(a.value, -1, -2), (a,), lambda g: (np.swapaxes(g, -1, -2),)
        )

    def swapaxes(self, a: Variable, axis1: int, axis2: int) -> Variable:
        """Swap two axes."""
        return self._record(
            "swapaxes",
            np.swapaxes(a.value, axis1, axis2),
            (a,),
            lambda g: (np.swapaxes(g, axis1, axis2),),
        )

    def reshape(self, a: Variable, shape: Tuple[int, ...]) -> Variable:
        """Reshape without copying data order."""
        return self._record(
            "reshape", a.value.reshape(shape), (a,), lambda g: (g.reshape(a.shape),)
        )

    def concat(self, parts: Sequence[Variable], axis: int = -1) -> Variable:
        """Concatenate along ``axis``."""
        parts = tuple(parts)
        sizes = np.cumsum([p.shape[axis] for p in parts])[:-1]
        return self._record(
            "concat",
            np.concatenate([p.value for p in parts], axis=axis),
            parts,
            lambda g: tuple(np.split(g, sizes, axis=axis)),
        )

    def sum(self, a: Variable) -> Variable:
        """Sum of every entry, as a 0-d variable."""
        return self._record(
            "sum", np.asarray(a.value.sum()), (a,), lambda g: (np.broadcast_to(g, a.shape),)
        )

    def rmsnorm(self, x: Variable, gain: Variable) -> Variable:
        """Root-mean-square normalization of the last axis scaled by ``gain``."""

        def backward(g: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
            return kernels.rmsnorm_backward(x.value, gain.value, g)

        return self._record("rmsnorm", kernels.rmsnorm(x.value, gain.value), (x, gain), backward)

    # ---- gathers --------------------------------------------------------------

    def gather(self, table: Variable, indices: np.ndarray, tag: str = "embedding") -> Variable:
        """Rows of ``table`` selected by integer ``indices``, counted as gathers.

        Raises:
            ShapeMismatchError: if an index is outside the table.
        """
        indices = np.asarray(indices)
        if indices.size and (indices.min() < 0 or indices.max() >= table.shape[0]):
            raise ShapeMismatchError(
                f"gather index out of range for table with {table.shape[0]} rows"
            )
        self._count_gathers(tag, indices.size)

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            d_table = np.zeros_like(table.value)
            np.add.at(d_table, indices, g)
            return (d_table,)

        return self._record("gather", table.value[indices], (table,), backward)

    def gather_lower(
        self, table: Variable, indices: np.ndarray, fill: float = 0.0, tag: str = "bias"
    ) -> Variable:
        """Build square matrices whose lower triangle reads ``table[indices]``.

        Only the ``n(n+1)/2`` entries on or below the diagonal of each ``n x n``
        index matrix are read; the rest are set to ``fill``.
        """
        indices = np.asarray(indices)
        n = indices.shape[-1]
        rows, cols = np.tril_indices(n)
        lower = indices[..., rows, cols]
        self._count_gathers(tag, lower.size)
        out = np.full(indices.shape, fill, dtype=self._dtype)
        out[..., rows, cols] = table.value[lower]

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            d_table = np.zeros_like(table.value)
            np.add.at(d_table, lower, g[..., rows, cols])
            return (d_table,)

        return self._record("gather_lower", out, (table,), backward)

    def candidate_scores(
        self, x: Variable, table: Variable, candidates: np.ndarray, term: str = "head"
    ) -> Variable:
        """Dot products of each row of ``x`` with its own candidate rows of ``table``.

        ``x`` is ``(..., d)``, ``candidates`` is ``(..., K)``; the result is ``(..., K)``.
        """
        candidates = np.asarray(candidates)
        if candidates.shape[:-1] != x.shape[:-1]:
            raise ShapeMismatchError(
                f"candidates {candidates.shape} do not match inputs {x.shape}"
            )
        rows = table.value[candidates]
        self._count_gathers("candidates", candidates.size)
        self._count(term, rows.size)
        width = table.shape[-1]

        def backward(g: np.ndarray) -> Tuple[Optional[np.ndarray], Optional[np.ndarray]]:
            d_x = np.einsum("...k,...kd->...d", g, rows) if x.requires_grad else None
            d_table = None
            if table.requires_grad:
                d_table = np.zeros_like(table.value)
                contrib = g[..., None] * x.value[..., None, :]
                np.add.at(d_table, candidates.reshape(-1), contrib.reshape(-1, width))
            return d_x, d_table

        return self._record(
            "candidate_scores", np.einsum("...d,...kd->...k", x.value, rows), (x, table), backward
        )

    # ---- losses ---------------------------------------------------------------

    def sampled_softmax_loss(self, scores: Variable, weights: np.ndarray) -> Variable:
        """Mean over weighted positions of the softmax loss of candidate 0.

        ``scores`` is ``(..., K)`` with the positive item's score in column 0 and the
        sampled negatives after it; ``weights`` is ``(...)`` and is zero at padding.

        Raises:
            FuxiRecError: if every weight is zero.
        """
        weights = np.asarray(weights, dtype=self._dtype)
        loss = np.asarray(_SAMPLED_SOFTMAX.evaluate(scores.value, weights), dtype=self._dtype)

        def backward(g: np.ndarray) -> Tuple[np.ndarray]:
            grad = _SAMPLED_SOFTMAX.gradient(scores.value, weights) * g
            return (grad.astype(self._dtype, copy=False),)

        return self._record("sampled_softmax_loss", loss, (scores,), backward)

    # ---- backward -------------------------------------------------------------

    def backward(self, output: Variable) -> None:
        """Differentiate the scalar ``output`` and accumulate parameter gradients.

        Raises:
            FuxiRecError: if the tape does not record.
            ShapeMismatchError: if ``output`` is not a scalar.
            NonFiniteError: if a parameter gradient is not finite.
        """
        if not self._recording:
            raise FuxiRecError("backward called on a tape created with record=False")
        if output.value.size != 1:
            raise ShapeMismatchError(f"backward needs a scalar output, got shape {output.shape}")
        output.grad = np.ones_like(output.value)
        for node in reversed(self._nodes):
            grad = node.output.grad
            if grad is None:
                continue
            for parent, parent_grad in zip(node.parents, node.backward(grad)):
                if parent_grad is None or not parent.requires_grad:
                    continue
                parent.grad = parent_grad if parent.grad is None else parent.grad + parent_grad
        if self._store is None:
            return
        for name, var in self._params.items():
            if var.grad is None:
                continue
            if self._check_finite and not np.all(np.isfinite(var.grad)):
                raise NonFiniteError(f"gradient of '{name}' is not finite", {"parameter": name})
            self._store[name].accumulate(reduce_to(var.grad, var.shape))
        logger.debug("Backward pass replayed %s nodes", len(self._nodes))


class EagerOps:
    """Evaluates the arithmetic subset of :class:`Tape` operations on plain arrays.

    Formulas written against this surface run unchanged on a tape, which is how the
    bias functions share one definition between training and reference evaluation.
    """

    def __init__(self, dtype: np.dtype = np.float64) -> None:
        self._dtype = np.dtype(dtype)

    def constant(self, value: ArrayLike) -> np.ndarray:
        """Returns ``value`` as an array."""
        return np.asarray(value, dtype=self._dtype)

    @staticmethod
    def add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """``a + b``."""
        return a + b

    @staticmethod
    def sub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """``a - b``."""
        return a - b

    @staticmethod
    def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise product."""
        return a * b

    @staticmethod
    def scale(a: np.ndarray, factor: float) -> np.ndarray:
        """``factor * a``."""
        return a * factor

    @staticmethod
    def add_scalar(a: np.ndarray, offset: float) -> np.ndarray:
        """``a + offset``."""
        return a + offset

    @staticmethod
    def exp(a: np.ndarray) -> np.ndarray:
        """Elementwise exponential."""
        return np.exp(a)

    @staticmethod
    def log(a: np.ndarray) -> np.ndarray:
        """Elementwise natural logarithm."""
        return np.log(a)

    @staticmethod
    def sin(a: np.ndarray) -> np.ndarray:
        """Elementwise sine."""
        return np.sin(a)

    @staticmethod
    def silu(a: np.ndarray) -> np.ndarray:
        """``a * sigmoid(a)``."""
        return kernels.silu(a)

    @staticmethod
    def softplus(a: np.ndarray) -> np.ndarray:
        """``log(1 + exp(a))``."""
        return kernels.softplus(a)

    @staticmethod
    def matmul(a: np.ndarray, b: np.ndarray, term: str = "other") -> np.ndarray:
        """Matrix product over the last two axes."""
        # pylint: disable=unused-argument
        return kernels.matmul(a, b)

    @staticmethod
    def reshape(a: np.ndarray, shape: Tuple[int, ...]) -> np.ndarray:
        """Reshape."""
        return a.reshape(shape)
