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

"""Package version and source revision, recorded in every run manifest."""

import os
import subprocess
from typing import List

ROOT_DIR = os.path.dirname(os.path.abspath(__file__))
REPO_DIR = os.path.dirname(ROOT_DIR)


def _git(args: List[str]) -> bytes:
    env = {k: os.environ[k] for k in ("SYSTEMROOT", "PATH") if k in os.environ}
    env.update({"LANGUAGE": "C", "LANG": "C", "LC_ALL": "C"})
    with subprocess.Popen(
        ["git"] + args,
        stdout=subprocess.PIPE,
        stderr=subprocess.PIPE,
        env=env,
        cwd=REPO_DIR,
    ) as proc:
        stdout, stderr = proc.communicate()
        if proc.returncode > 0:
            raise OSError(
                f"git {' '.join(args)} exited with code {proc.returncode}: "
                f"{stderr.strip().decode('ascii', errors='replace')}"
            )
        return stdout


def git_version() -> str:
    """Return the sha1 of the checked-out revision, or ``"unknown"`` outside a work tree."""
    try:
        return _git(["rev-parse", "HEAD"]).strip().decode("ascii")
    except OSError:
        return "unknown"


with open(os.path.join(ROOT_DIR, "VERSION.txt"), "r", encoding="utf8") as version_file:
    VERSION = version_file.read().strip()


def get_version_info() -> str:
    """Get the full version string, with a ``.dev0+<sha>`` suffix for untagged checkouts."""
    full_version = VERSION
    if not os.path.exists(os.path.join(REPO_DIR, ".git")):
        return full_version
    try:
        release = _git(["tag", "-l", "--points-at", "HEAD"])
    except Exception:  # pylint: disable=broad-except
        return full_version
    if not release:
        full_version += ".dev0+" + git_version()[:7]
    return full_version


__version__ = get_version_info()
