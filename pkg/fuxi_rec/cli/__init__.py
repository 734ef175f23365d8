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
Command Line (:mod:`fuxi_rec.cli`)
==================================

.. currentmodule:: fuxi_rec.cli

The ``fuxi-rec`` program: ``prepare``, ``train``, ``eval``, ``bench``, ``ablate``,
``plot-bias`` and ``describe``. Exit codes are 0 on success, 1 on a runtime failure
and 2 on a usage, configuration or parse error. The default output root is
``$FUXI_REC_OUTPUT_ROOT``, else ``./runs``.

.. autosummary::
   :toctree: ../stubs/
   :nosignatures:

   main
   build_parser
   RunManifest

"""

from .main import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, build_parser, main
from .manifest import MANIFEST_NAME, RunManifest, write_json_atomic
from .run_config import (
    OUTPUT_ROOT_ENV,
    apply_overrides,
    load_run_config,
    output_root,
    packaged_configs,
    resolve_config_path,
)

__all__ = [
    "EXIT_FAILURE",
    "EXIT_OK",
    "EXIT_USAGE",
    "build_parser",
    "main",
    "MANIFEST_NAME",
    "RunManifest",
    "write_json_atomic",
    "OUTPUT_ROOT_ENV",
    "apply_overrides",
    "load_run_config",
    "output_root",
    "packaged_configs",
    "resolve_config_path",
]
