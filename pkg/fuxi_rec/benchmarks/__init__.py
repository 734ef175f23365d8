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
Benchmarks (:mod:`fuxi_rec.benchmarks`)
=======================================

.. currentmodule:: fuxi_rec.benchmarks

Microbenchmarks of temporal bias construction and of single blocks, and the check of
counted cost coefficients against their closed forms. Timed regions run on one
pinned CPU; results carry a machine fingerprint.

Timing
======

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   BenchConfig
   BenchRecord
   time_kernel
   machine_fingerprint
   write_bench_csv
   markdown_summary

Suites
======

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   bench_bias_construction
   bench_block
   bench_cost_coefficients
   CostRow

"""

from .timing import (
    CSV_COLUMNS,
    BenchConfig,
    BenchRecord,
    machine_fingerprint,
    markdown_summary,
    percentiles,
    pinned_cpu,
    read_bench_csv,
    time_kernel,
    timer_resolution_ns,
    write_bench_csv,
    write_markdown_summary,
)
from .suites import (
    BIAS_KERNELS,
    BLOCK_MODES,
    CostRow,
    bench_bias_construction,
    bench_block,
    bench_cost_coefficients,
    block_model_config,
    cost_table_markdown,
    cost_variants,
    mixer_for_mode,
    speedup_ratios,
)

__all__ = [
    "CSV_COLUMNS",
    "BenchConfig",
    "BenchRecord",
    "machine_fingerprint",
    "markdown_summary",
    "percentiles",
    "pinned_cpu",
    "read_bench_csv",
    "time_kernel",
    "timer_resolution_ns",
    "write_bench_csv",
    "write_markdown_summary",
    "BIAS_KERNELS",
    "BLOCK_MODES",
    "CostRow",
    "bench_bias_construction",
    "bench_block",
    "bench_cost_coefficients",
    "block_model_config",
    "cost_table_markdown",
    "cost_variants",
    "mixer_for_mode",
    "speedup_ratios",
]
