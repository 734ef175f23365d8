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

"""Run manifests: everything needed to reproduce a command and every file it wrote."""

import datetime
import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional

from ..exceptions import FuxiRecError
from ..utils.hashing import config_hash
from ..version import __version__, git_version

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"


def _now() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def write_json_atomic(path: str, payload: Dict[str, Any]) -> None:
    """Write ``payload`` to a temporary file in the target directory, then rename it."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    handle, temp = tempfile.mkstemp(prefix=".manifest-", dir=directory)
    try:
        with os.fdopen(handle, "w", encoding="utf8") as file:
            json.dump(payload, file, indent=2, sort_keys=True)
            file.write("\n")
        os.replace(temp, path)
    except BaseException:
        if os.path.exists(temp):
            os.remove(temp)
        raise


@dataclass
class RunManifest:
    """Configuration snapshot, source revision, seed and dataset hash of one command,
    with its start and end times and the artifacts it emitted."""

    command: str
    config: Dict[str, Any]
    seed: Optional[int] = None
    dataset_hash: Optional[str] = None
    argv: List[str] = field(default_factory=list)
    source_revision: str = field(default_factory=git_version)
    version: str = __version__
    started_at: str = field(default_factory=_now)
    finished_at: Optional[str] = None
    status: str = "running"
    artifacts: List[str] = field(default_factory=list)
    path: Optional[str] = None

    @property
    def config_hash(self) -> str:
        """Returns the SHA-256 of the canonical configuration."""
        return config_hash(self.config)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready form."""
        values = asdict(self)
        values.pop("path")
        values["config_hash"] = self.config_hash
        return values

    @classmethod
    def load(cls, path: str) -> "RunManifest":
        """Read a manifest written by :meth:`write`."""
        with open(path, "r", encoding="utf8") as file:
            values = json.load(file)
        values.pop("config_hash", None)
        return cls(path=path, **values)

    def add_artifact(self, path: str) -> None:
        """Record an emitted file."""
        if path not in self.artifacts:
            self.artifacts.append(path)

    def write(self, path: Optional[str] = None) -> str:
        """Write the manifest atomically; returns its path."""
        self.path = path or self.path
        if self.path is None:
            raise FuxiRecError("manifest has no path")
        write_json_atomic(self.path, self.to_dict())
        return self.path

    def finalize(self, status: str = "succeeded") -> str:
        """Stamp the end time and status, then rewrite the manifest."""
        self.finished_at = _now()
        self.status = status
        logger.info("Run %s %s; manifest %s", self.command, status, self.path)
        return self.write()
