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

"""Wall-clock timing of kernels with warmup, percentiles and a machine fingerprint."""

import contextlib
import csv
import dataclasses
import logging
import os
import platform
import sys
import time
from dataclasses import dataclass
from typing import Any, Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import psutil

from ..exceptions import ConfigurationError
from ..utils.validation import validate_min
from ..version import __version__

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["kernel", "n", "d", "median_ns", "p10_ns", "p90_ns", "flops", "gathers"]
MAX_INNER_LOOPS = 1 << 20


@dataclass
class BenchConfig:
    """Timing settings.

    ``warmup`` calls are discarded before ``repetitions`` timed samples are taken.
    A sample whose median is below ``min_ticks`` timer ticks is retaken with more
    calls per sample.
    """

    warmup: int = 5
    repetitions: int = 30
    min_ticks: int = 100
    pin_cpu: bool = True
    seed: int = 0

    def __post_init__(self) -> None:
        validate_min("warmup", self.warmup, 5)
        validate_min("repetitions", self.repetitions, 30)
        validate_min("min_ticks", self.min_ticks, 1)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form."""
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> "BenchConfig":
        """Inverse of :meth:`to_dict`.

        Raises:
            ConfigurationError: on an unknown key or invalid value.
        """
        unknown = set(values) - {f.name for f in dataclasses.fields(cls)}
        if unknown:
            raise ConfigurationError(f"unknown bench option(s): {', '.join(sorted(unknown))}")
        return cls(**values)


@dataclass
class BenchRecord:
    """Timing percentiles of one kernel at one size, with its counted work."""

    kernel: str
    n: int
    d: int
    repetitions: int
    median_ns: float
    p10_ns: float
    p90_ns: float
    flops: int
    gathers: int
    inner_loops: int = 1

    def __post_init__(self) -> None:
        if not self.p10_ns <= self.median_ns <= self.p90_ns:
            raise ConfigurationError(
                f"percentiles out of order for {self.kernel}: "
                f"{self.p10_ns} / {self.median_ns} / {self.p90_ns}"
            )

    def to_row(self) -> Dict[str, Any]:
        """The CSV columns of this record."""
        return {name: getattr(self, name) for name in CSV_COLUMNS}


def timer_resolution_ns() -> float:
    """Resolution of :func:`time.perf_counter_ns`, at least one nanosecond."""
    return max(1.0, time.get_clock_info("perf_counter").resolution * 1e9)


def percentiles(samples: Sequence[float]) -> Tuple[float, float, float]:
    """``(p10, median, p90)`` of ``samples``."""
    p10, median, p90 = np.percentile(np.asarray(samples, dtype=np.float64), [10, 50, 90])
    return float(p10), float(median), float(p90)


def _sample(kernel: Callable[[], Any], repetitions: int, inner: int) -> np.ndarray:
    samples = np.empty(repetitions, dtype=np.float64)
    for rep in range(repetitions):
        start = time.perf_counter_ns()
        for _ in range(inner):
            kernel()
        samples[rep] = (time.perf_counter_ns() - start) / inner
    return samples


def time_kernel(
    kernel: Callable[[], Any], config: Optional[BenchConfig] = None
) -> Tuple[np.ndarray, int]:
    """Time ``kernel`` after discarding ``config.warmup`` calls.

    Returns:
        Per-call nanoseconds of each repetition, and the number of calls per sample.
        When a sample's median is shorter than ``config.min_ticks`` timer ticks the
        calls per sample double until it is not.
    """
    config = config or BenchConfig()
    for _ in range(config.warmup):
        kernel()
    threshold = config.min_ticks * timer_resolution_ns()
    inner = 1
    samples = _sample(kernel, config.repetitions, inner)
    while np.median(samples) * inner < threshold and inner < MAX_INNER_LOOPS:
        inner *= 2
        samples = _sample(kernel, config.repetitions, inner)
    if inner > 1:
        logger.warning(
            "Kernel runs below %s timer ticks; widened to %s calls per sample",
            config.min_ticks,
            inner,
        )
    return samples, inner


@contextlib.contextmanager
def pinned_cpu(enabled: bool = True) -> Iterator[Optional[int]]:
    """Restrict the process to a single CPU while timing, where the platform allows it.

    Yields the pinned CPU index, or ``None`` when affinity is unavailable.
    """
    process = psutil.Process()
    if not enabled or not hasattr(process, "cpu_affinity"):
        yield None
        return
    try:
        previous = process.cpu_affinity()
        process.cpu_affinity(previous[:1])
    except (psutil.Error, OSError, ValueError) as ex:
        logger.debug("CPU affinity unavailable: %s", ex)
        yield None
        return
    try:
        yield previous[0]
    finally:
        process.cpu_affinity(previous)


def machine_fingerprint() -> Dict[str, Any]:
    """Hardware and software description stored with every benchmark result."""
    frequency = None
    try:
        freq = psutil.cpu_freq()
        if freq is not None:
            frequency = freq.max or freq.current
    except (NotImplementedError, OSError, FileNotFoundError):
        pass
    return {
        "platform": platform.platform(),
        "machine": platform.machine(),
        "processor": platform.processor(),
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "fuxi_rec": __version__,
        "cpu_count_logical": psutil.cpu_count(logical=True),
        "cpu_count_physical": psutil.cpu_count(logical=False),
        "cpu_freq_mhz": frequency,
        "memory_total_bytes": psutil.virtual_memory().total,
        "timer_resolution_ns": timer_resolution_ns(),
    }


def write_bench_csv(path: str, records: Sequence[BenchRecord]) -> None:
    """Write ``kernel,n,d,median_ns,p10_ns,p90_ns,flops,gathers`` rows."""
    with open(path, mode="w", newline="", encoding="utf8") as csv_file:
        writer = csv.DictWriter(csv_file, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for record in records:
            writer.writerow(record.to_row())


def read_bench_csv(path: str) -> List[Dict[str, str]]:
    """Rows of a file written by :func:`write_bench_csv`."""
    with open(path, mode="r", newline="", encoding="utf8") as csv_file:
        return list(csv.DictReader(csv_file))


def markdown_summary(
    records: Sequence[BenchRecord],
    fingerprint: Dict[str, Any],
    ratios: Optional[Sequence[Tuple[str, int, int, float]]] = None,
) -> str:
    """Markdown table of the records, the machine and any wall-time ratios."""
    lines = [
        "| kernel | n | d | reps | median (us) | p10 (us) | p90 (us) | flops | gathers |",
        "|---|---|---|---|---|---|---|---|---|",
    ]
    for r in records:
        lines.append(
            f"| {r.kernel} | {r.n} | {r.d} | {r.repetitions}x{r.inner_loops} "
            f"| {r.median_ns / 1e3:.1f} | {r.p10_ns / 1e3:.1f} | {r.p90_ns / 1e3:.1f} "
            f"| {r.flops} | {r.gathers} |"
        )
    if ratios:
        lines += ["", "| comparison | n | d | median ratio |", "|---|---|---|---|"]
        lines += [f"| {name} | {n} | {d} | {ratio:.3f} |" for name, n, d, ratio in ratios]
    lines += ["", "Machine:", ""]
    lines += [f"- {key}: {value}" for key, value in sorted(fingerprint.items())]
    return "\n".join(lines) + "\n"


def write_markdown_summary(path: str, text: str) -> None:
    """Write ``text`` next to the CSV, replacing an existing file atomically."""
    temp = path + ".tmp"
    with open(temp, mode="w", encoding="utf8") as summary:
        summary.write(text)
    os.replace(temp, path)
