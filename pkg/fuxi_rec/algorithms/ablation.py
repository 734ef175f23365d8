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

"""Sweeps over temporal bias functions and attention-map switches.

The function sweep trains one model per bias function kind. The map sweep trains a
query-key baseline with every map enabled and one model with each map removed; the
row without the query-key map is the attention-free mixer.
"""

import csv
import logging
import os
import time
from collections import OrderedDict
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

from .trainer import Trainer, TrainerConfig
from ..bias.bias_functions import BiasFunctionKind
from ..datasets.sequences import SplitDataset
from ..exceptions import ConfigurationError, NonFiniteError
from ..mixers.mixer_config import MixerMode
from ..neural_networks.model_config import ModelConfig
from ..neural_networks.sequential_recommender import SequentialRecommender

logger = logging.getLogger(__name__)

ABLATION_CSV = "ablation.csv"

_ALL_MAPS = {"use_qk_map": True, "use_positional_map": True, "use_temporal_map": True}

MAP_ABLATIONS: "OrderedDict[str, Dict[str, Any]]" = OrderedDict(
    [
        ("full", dict(_ALL_MAPS, mode=MixerMode.QK_BASELINE.value)),
        ("no-qk", dict(_ALL_MAPS, mode=MixerMode.AFTM.value, use_qk_map=False)),
        (
            "no-positional",
            dict(_ALL_MAPS, mode=MixerMode.QK_BASELINE.value, use_positional_map=False),
        ),
        ("no-temporal", dict(_ALL_MAPS, mode=MixerMode.QK_BASELINE.value, use_temporal_map=False)),
    ]
)


def valid_map_ablations() -> List[str]:
    """Names of the map-switch rows."""
    return list(MAP_ABLATIONS)


@dataclass
class AblationRun:
    """One trained configuration of a sweep."""

    name: str
    bias_function: str
    maps: str
    best_epoch: int
    validation: Dict[str, Any]
    test: Dict[str, Any]
    wall_seconds: float
    diverged: bool = False

    def to_row(self) -> Dict[str, Any]:
        """Flat CSV row; test metrics are prefixed with ``test_``."""
        row: Dict[str, Any] = {
            "name": self.name,
            "bias_function": self.bias_function,
            "maps": self.maps,
            "best_epoch": self.best_epoch,
            "diverged": self.diverged,
            "wall_seconds": round(self.wall_seconds, 3),
        }
        for key, value in self.validation.items():
            if "@" in key or key == "mrr":
                row[f"val_{key}"] = value
        for key, value in self.test.items():
            if "@" in key or key == "mrr":
                row[f"test_{key}"] = value
        return row


def ablation_matrix(
    functions: Optional[Sequence[str]] = None, maps: Optional[Sequence[str]] = None
) -> List[Dict[str, Any]]:
    """The configurations of a sweep, functions varying fastest.

    Omitting ``functions`` keeps the base model's bias function; omitting ``maps``
    keeps its mixer.

    Raises:
        ConfigurationError: on an unknown function kind or map row, listing the valid names.
    """
    kinds: List[Optional[str]] = (
        [BiasFunctionKind.parse(name).value for name in functions] if functions else [None]
    )
    rows: List[Optional[str]] = list(maps) if maps else [None]
    for row in rows:
        if row is not None and row not in MAP_ABLATIONS:
            raise ConfigurationError(
                f"unknown map ablation {row!r}; valid rows: {', '.join(valid_map_ablations())}"
            )
    return [{"bias_function": kind, "maps": row} for row in rows for kind in kinds]


def run_ablation(
    dataset: SplitDataset,
    model_config: ModelConfig,
    trainer_config: Optional[TrainerConfig] = None,
    functions: Optional[Sequence[str]] = None,
    maps: Optional[Sequence[str]] = None,
    output_dir: Optional[str] = None,
) -> List[AblationRun]:
    """Train every configuration of :func:`ablation_matrix` in turn with the same seed.

    A run that diverges is recorded with ``diverged=True`` and the sweep continues.
    When ``output_dir`` is given each run keeps its own subdirectory and the sweep
    writes ``ablation.csv`` with one row per run.

    Returns:
        One :class:`AblationRun` per configuration, in sweep order.
    """
    trainer_config = trainer_config or TrainerConfig()
    runs: List[AblationRun] = []
    matrix = ablation_matrix(functions, maps)
    for index, entry in enumerate(matrix):
        changes: Dict[str, Any] = {}
        if entry["bias_function"] is not None:
            changes["bias_function"] = entry["bias_function"]
        if entry["maps"] is not None:
            changes["mixer"] = dict(MAP_ABLATIONS[entry["maps"]])
        config = model_config.replace(**changes)
        maps_name = entry["maps"] or "base"
        name = f"{config.bias_function}/{maps_name}"
        run_dir = None
        if output_dir is not None:
            run_dir = os.path.join(output_dir, f"{index:02d}_{config.bias_function}_{maps_name}")
        logger.info("Ablation run %s/%s: %s", index + 1, len(matrix), name)

        start = time.perf_counter()
        network = SequentialRecommender(config)
        try:
            result = Trainer(network, dataset, trainer_config, run_dir).fit()
        except NonFiniteError as ex:
            logger.warning("Ablation run %s diverged: %s", name, ex.message)
            runs.append(
                AblationRun(
                    name,
                    config.bias_function,
                    maps_name,
                    best_epoch=0,
                    validation={},
                    test={},
                    wall_seconds=time.perf_counter() - start,
                    diverged=True,
                )
            )
            continue
        runs.append(
            AblationRun(
                name,
                config.bias_function,
                maps_name,
                result.best_epoch,
                result.best_validation.to_dict(),
                result.test.to_dict(),
                time.perf_counter() - start,
            )
        )

    if output_dir is not None:
        write_ablation_csv(os.path.join(output_dir, ABLATION_CSV), runs)
    return runs


def write_ablation_csv(path: str, runs: Sequence[AblationRun]) -> None:
    """One row per run; columns are the union over runs in first-seen order."""
    rows = [run.to_row() for run in runs]
    fieldnames: List[str] = []
    for row in rows:
        fieldnames.extend(key for key in row if key not in fieldnames)
    with open(path, mode="w", newline="", encoding="utf8") as csv_file:
        writer = csv.DictWriter(csv_file, fieldnames=fieldnames)
        writer.writeheader()
        writer.writerows(rows)
