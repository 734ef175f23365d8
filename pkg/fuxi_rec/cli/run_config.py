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

"""JSON run configurations with command-line overrides."""

import copy
import json
import os
from typing import Any, Dict, Optional

from ..exceptions import ConfigurationError

CONFIG_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "configs")
OUTPUT_ROOT_ENV = "FUXI_REC_OUTPUT_ROOT"
DEFAULT_OUTPUT_ROOT = "runs"
SECTIONS = ("model", "trainer", "data", "bench")


def packaged_configs() -> Dict[str, str]:
    """Names of the shipped configurations mapped to their paths."""
    return {
        name[: -len(".json")]: os.path.join(CONFIG_DIR, name)
        for name in sorted(os.listdir(CONFIG_DIR))
        if name.endswith(".json")
    }


def resolve_config_path(name_or_path: str) -> str:
    """A file path as given, else the shipped configuration of that name.

    Raises:
        ConfigurationError: if neither exists.
    """
    if os.path.isfile(name_or_path):
        return name_or_path
    stem = os.path.basename(name_or_path)
    stem = stem[: -len(".json")] if stem.endswith(".json") else stem
    shipped = packaged_configs()
    if stem in shipped:
        return shipped[stem]
    raise ConfigurationError(
        f"config {name_or_path!r} not found; shipped configs: {', '.join(shipped)}"
    )


def load_run_config(name_or_path: Optional[str]) -> Dict[str, Dict[str, Any]]:
    """Read a configuration file into its sections; missing sections are empty.

    Raises:
        ConfigurationError: on a missing file, invalid JSON or an unknown section.
    """
    if name_or_path is None:
        return {section: {} for section in SECTIONS}
    path = resolve_config_path(name_or_path)
    try:
        with open(path, "r", encoding="utf8") as file:
            values = json.load(file)
    except json.JSONDecodeError as ex:
        raise ConfigurationError(f"{path} is not valid JSON: {ex}") from ex
    if not isinstance(values, dict):
        raise ConfigurationError(f"{path} must hold a JSON object")
    unknown = set(values) - set(SECTIONS)
    if unknown:
        raise ConfigurationError(f"unknown config section(s): {', '.join(sorted(unknown))}")
    return {section: dict(values.get(section, {})) for section in SECTIONS}


def apply_overrides(
    config: Dict[str, Dict[str, Any]], section: str, overrides: Dict[str, Any]
) -> Dict[str, Dict[str, Any]]:
    """Copy of ``config`` with the non-``None`` ``overrides`` set in ``section``.

    Keys containing a dot address nested dicts, e.g. ``mixer.mode``.
    """
    merged = copy.deepcopy(config)
    target = merged.setdefault(section, {})
    for key, value in overrides.items():
        if value is None:
            continue
        node = target
        *parents, leaf = key.split(".")
        for parent in parents:
            node = node.setdefault(parent, {})
        node[leaf] = value
    return merged


def output_root(flag: Optional[str] = None) -> str:
    """The ``--output-root`` flag, else ``$FUXI_REC_OUTPUT_ROOT``, else ``./runs``."""
    return flag or os.environ.get(OUTPUT_ROOT_ENV) or DEFAULT_OUTPUT_ROOT
