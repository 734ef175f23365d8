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

"""Benchmark suites: temporal bias construction, block cost and mixer cost coefficients."""

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .timing import BenchConfig, BenchRecord, percentiles, pinned_cpu, time_kernel
from ..bias.bias_functions import BiasFunctionKind, BiasFunctionSpec
from ..bias.bucketed_bias import BucketTable, bucketed_rab_temporal
from ..bias.functional_bias import SECONDS_PER_DAY, frab_matrix
from ..exceptions import ConfigurationError
from ..mixers.flops import closed_form_terms, flop_count
from ..mixers.mixer_config import MixerConfig, MixerLayout, MixerMode
from ..neural_networks.block import FuxiBlock
from ..neural_networks.model_config import ModelConfig
from ..numerics.counters import TERM_FFN, TERM_N2D, TERM_ND2, KernelCounter
from ..numerics.param_store import ParamStore
from ..numerics.tape import Tape

logger = logging.getLogger(__name__)

BIAS_KERNELS = ("frab_pow", "bucketed_temporal")
BLOCK_MODES = ("fuxi_beta", "fuxi_alpha_style")


def _check_sweep(name: str, values: Sequence[int]) -> List[int]:
    values = [int(v) for v in values]
    if not values:
        raise ConfigurationError(f"{name} sweep is empty")
    if any(v < 1 for v in values):
        raise ConfigurationError(f"{name} sweep values must be positive: {values}")
    if values != sorted(values):
        raise ConfigurationError(f"{name} sweep must be ascending: {values}")
    return values


def _heads_for(d: int) -> int:
    return next(h for h in (4, 2, 1) if d % h == 0)


def mixer_for_mode(mode: str, d: int, n: int) -> MixerConfig:
    """Mixer of a benchmarked block: the attention-free mixer for ``fuxi_beta`` and
    query-key attention with all three maps, one channel each, for ``fuxi_alpha_style``."""
    if mode == "fuxi_beta":
        return MixerConfig(d=d, n=n, mode=MixerMode.AFTM)
    if mode == "fuxi_alpha_style":
        return MixerConfig(
            d=d,
            n=n,
            mode=MixerMode.QK_BASELINE,
            layout=MixerLayout.FUXI,
            use_qk_map=True,
            heads=_heads_for(d),
        )
    raise ConfigurationError(f"unknown block mode {mode!r}; valid modes: {', '.join(BLOCK_MODES)}")


def _timestamps(rng: np.random.Generator, n: int, batch: Tuple[int, ...] = ()) -> np.ndarray:
    gaps = rng.integers(0, 3 * int(SECONDS_PER_DAY), size=batch + (n,))
    return 1_000_000_000 + np.cumsum(gaps, axis=-1)


def _bias_kernel(
    kind: str,
    timestamps: np.ndarray,
    spec: BiasFunctionSpec,
    table: BucketTable,
    counter: Optional[KernelCounter] = None,
) -> None:
    if kind == "frab_pow":
        frab_matrix(timestamps, spec, SECONDS_PER_DAY, counter=counter)
    else:
        bucketed_rab_temporal(timestamps, table, counter=counter)


def _record(
    name: str,
    n: int,
    d: int,
    kernel: Callable[[], object],
    config: BenchConfig,
    counter: KernelCounter,
) -> BenchRecord:
    samples, inner = time_kernel(kernel, config)
    p10, median, p90 = percentiles(samples)
    logger.debug("%s n=%s d=%s: median %.0f ns", name, n, d, median)
    return BenchRecord(
        name,
        n,
        d,
        len(samples),
        median,
        p10,
        p90,
        counter.total_multiplies(),
        counter.total_gathers(),
        inner,
    )


def bench_bias_construction(
    n_sweep: Sequence[int],
    kinds: Sequence[str] = BIAS_KERNELS,
    config: Optional[BenchConfig] = None,
) -> List[BenchRecord]:
    """Time building the temporal bias of one sequence by the power-law function and by
    bucket lookups, on identical timestamps.

    Raises:
        ConfigurationError: if the sweep is not ascending or a kind is unknown.
    """
    config = config or BenchConfig()
    n_sweep = _check_sweep("n", n_sweep)
    for kind in kinds:
        if kind not in BIAS_KERNELS:
            raise ConfigurationError(
                f"unknown bias kernel {kind!r}; valid kernels: {', '.join(BIAS_KERNELS)}"
            )
    rng = np.random.default_rng(config.seed)
    spec = BiasFunctionSpec.default(BiasFunctionKind.POW)
    table = BucketTable(np.zeros(1), rng.normal(size=128))
    records = []
    with pinned_cpu(config.pin_cpu):
        for n in n_sweep:
            timestamps = _timestamps(rng, n)
            for kind in kinds:
                counter = KernelCounter()
                _bias_kernel(kind, timestamps, spec, table, counter)
                kernel = functools.partial(_bias_kernel, kind, timestamps, spec, table)
                records.append(_record(kind, n, 0, kernel, config, counter))
    return records


def _block_step(
    block: FuxiBlock, store: ParamStore, x: np.ndarray, timestamps: np.ndarray
) -> Callable[[], None]:
    def step() -> None:
        store.zero_grad()
        tape = Tape(store, check_finite=False)
        out = block.forward(tape, tape.constant(x), timestamps)
        tape.backward(tape.sum(out))

    return step


def block_model_config(mode: str, n: int, d: int, d_ffn: Optional[int] = None) -> ModelConfig:
    """One-block model configuration of a benchmarked mode."""
    return ModelConfig(
        item_count=2,
        max_len=n,
        embed_dim=d,
        d_ffn=d_ffn or d,
        num_blocks=1,
        mixer=mixer_for_mode(mode, d, n),
    )


def bench_block(
    n_sweep: Sequence[int],
    d_sweep: Sequence[int],
    modes: Sequence[str] = BLOCK_MODES,
    config: Optional[BenchConfig] = None,
    d_ffn: Optional[int] = None,
) -> List[BenchRecord]:
    """Time forward plus backward of one block per mode on identical inputs.

    ``flops`` is the counted multiply total of the forward pass.
    """
    config = config or BenchConfig()
    n_sweep = _check_sweep("n", n_sweep)
    d_sweep = _check_sweep("d", d_sweep)
    records = []
    with pinned_cpu(config.pin_cpu):
        for n in n_sweep:
            for d in d_sweep:
                rng = np.random.default_rng(config.seed)
                x = rng.normal(size=(1, n, d))
                timestamps = _timestamps(rng, n, (1,))
                for mode in modes:
                    model_config = block_model_config(mode, n, d, d_ffn)
                    store = ParamStore()
                    block = FuxiBlock(0, model_config)
                    block.register(store, np.random.default_rng(config.seed))
                    counter = KernelCounter()
                    tape = Tape(store, counter=counter, record=False)
                    block.forward(tape, tape.constant(x), timestamps)
                    step = _block_step(block, store, x, timestamps)
                    records.append(_record(mode, n, d, step, config, counter))
    return records


def speedup_ratios(
    records: Sequence[BenchRecord], numerator: str, denominator: str
) -> List[Tuple[str, int, int, float]]:
    """Median wall-time ratio ``numerator / denominator`` at every shared ``(n, d)``."""
    by_key: Dict[Tuple[str, int, int], BenchRecord] = {(r.kernel, r.n, r.d): r for r in records}
    ratios = []
    for (kernel, n, d), record in by_key.items():
        other = by_key.get((denominator, n, d))
        if kernel == numerator and other is not None:
            ratios.append((f"{numerator}/{denominator}", n, d, record.median_ns / other.median_ns))
    return ratios


@dataclass
class CostRow:
    """Counted and closed-form cost coefficients of one mixer variant."""

    model: str
    counted: Dict[str, Fraction]
    expected: Dict[str, int]

    @property
    def matches(self) -> bool:
        """Returns whether every counted coefficient equals its closed form."""
        return all(self.counted[term] == self.expected[term] for term in self.expected)

    def formula(self, counted: bool = True) -> str:
        """``"5nd² + 2n²d + 3nd_FFN·d"`` style rendering."""
        terms = self.counted if counted else self.expected
        return (
            f"{terms[TERM_ND2]}nd² + {terms[TERM_N2D]}n²d + "
            f"{terms[TERM_FFN]}nd_FFN·d"
        )


def cost_variants(d: int, n: int) -> Dict[str, MixerConfig]:
    """The mixer variants whose cost coefficients are checked."""
    hstu = {"d": d, "n": n, "mode": MixerMode.QK_BASELINE, "layout": MixerLayout.HSTU}
    return {
        "HSTU": MixerConfig(**hstu, use_qk_map=True, heads=_heads_for(d)),
        "HSTU-beta": MixerConfig(**hstu, use_qk_map=False, heads=_heads_for(d)),
        "FuXi-alpha": mixer_for_mode("fuxi_alpha_style", d, n),
        "FuXi-beta": mixer_for_mode("fuxi_beta", d, n),
    }


def bench_cost_coefficients(
    n: int = 64, d: int = 32, d_ffn: Optional[int] = None
) -> List[CostRow]:
    """Count the multiplies of one block of every variant and compare with its closed form."""
    d_ffn = d_ffn or d
    rows = []
    for model, mixer in cost_variants(d, n).items():
        terms = flop_count(mixer, n, d, d_ffn)
        counted = {TERM_ND2: terms.nd2, TERM_N2D: terms.n2d, TERM_FFN: terms.ffn}
        row = CostRow(model, counted, closed_form_terms(mixer))
        if not row.matches:
            logger.warning("%s counted %s, expected %s", model, row.formula(), row.formula(False))
        rows.append(row)
    return rows


def cost_table_markdown(rows: Sequence[CostRow]) -> str:
    """Markdown table of :func:`bench_cost_coefficients` rows."""
    lines = ["| model | counted | closed form | match |", "|---|---|---|---|"]
    for row in rows:
        lines.append(
            f"| {row.model} | {row.formula()} | {row.formula(False)} | "
            f"{'yes' if row.matches else 'NO'} |"
        )
    return "\n".join(lines) + "\n"
