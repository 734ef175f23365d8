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

"""Bias-curve export: how each temporal function weighs elapsed time."""

import csv
import logging
import os
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .bias_functions import BiasFunctionSpec, eval_bias_function
from ..exceptions import ConfigurationError, MissingOptionalLibraryError

logger = logging.getLogger(__name__)


def curve_samples(
    spec: BiasFunctionSpec, max_delta: float, num: int = 64
) -> Tuple[np.ndarray, np.ndarray]:
    """Evaluate ``spec`` at 0 and ``num - 1`` log-uniform points up to ``max_delta``.

    Returns:
        ``(deltas, weights)``, deltas ascending.
    """
    if max_delta <= 0:
        raise ConfigurationError(f"max_delta must be > 0, was {max_delta}")
    if num < 2:
        raise ConfigurationError(f"num must be >= 2, was {num}")
    deltas = np.concatenate(([0.0], np.geomspace(max_delta * 1e-4, max_delta, num - 1)))
    weights = np.array([eval_bias_function(spec, float(x)) for x in deltas])
    return deltas, weights


def is_monotone_decreasing(weights: Sequence[float], strict: bool = False) -> bool:
    """Whether ``weights`` never increases (or always decreases when ``strict``)."""
    steps = np.diff(np.asarray(weights, dtype=np.float64))
    return bool(np.all(steps < 0) if strict else np.all(steps <= 0))


def write_curve_csv(path: str, deltas: np.ndarray, weights: np.ndarray) -> None:
    """Write ``delta_t,weight`` rows."""
    with open(path, "w", newline="", encoding="utf8") as file:
        writer = csv.DictWriter(file, fieldnames=["delta_t", "weight"])
        writer.writeheader()
        for delta, weight in zip(deltas, weights):
            writer.writerow({"delta_t": repr(float(delta)), "weight": repr(float(weight))})


def export_bias_curves(
    out_dir: str, specs: Sequence[BiasFunctionSpec], max_delta: float, num: int = 64
) -> Dict[str, str]:
    """Write ``bias_curve_<kind>.csv`` for every spec; returns kind to path."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {}
    for spec in specs:
        deltas, weights = curve_samples(spec, max_delta, num)
        path = os.path.join(out_dir, f"bias_curve_{spec.kind.value}.csv")
        write_curve_csv(path, deltas, weights)
        paths[spec.kind.value] = path
        logger.info("Wrote %s curve to %s", spec.kind.value, path)
    return paths


def render_curves(
    path: str, curves: Dict[str, Tuple[np.ndarray, np.ndarray]], title: str = "Temporal bias"
) -> None:
    """Plot curves keyed by label to an image file.

    Raises:
        MissingOptionalLibraryError: if matplotlib is not installed.
    """
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as ex:
        raise MissingOptionalLibraryError(
            libname="Matplotlib", name="render_curves", pip_install="pip install matplotlib"
        ) from ex

    fig, axis = plt.subplots(figsize=(6, 4))
    for label, (deltas, weights) in curves.items():
        axis.plot(deltas[1:], weights[1:], label=label)
    axis.set_xscale("log")
    axis.set_xlabel("elapsed time")
    axis.set_ylabel("weight")
    axis.set_title(title)
    axis.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def read_curve_csv(path: str) -> Tuple[List[float], List[float]]:
    """Read back a file written by :func:`write_curve_csv`."""
    deltas, weights = [], []
    with open(path, "r", newline="", encoding="utf8") as file:
        for row in csv.DictReader(file):
            deltas.append(float(row["delta_t"]))
            weights.append(float(row["weight"]))
    return deltas, weights
