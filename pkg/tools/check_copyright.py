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

""" Check copyright headers of Python sources """

from typing import List, NamedTuple, Optional
import argparse
import os
import subprocess
import sys

SCANNED_DIRS = ("fuxi_rec", "test", "tools")


class HeaderReport(NamedTuple):
    """Result of checking one file."""

    path: str
    has_header: bool
    has_utf8_line: bool
    stale_year: Optional[int]


class CopyrightChecker:
    """Check that every Python source carries the project header with a current year."""

    _UTF_STRING = "# -*- coding: utf-8 -*-"
    _COPYRIGHT_STRING = "# (C) Copyright FuXi-Rec Developers "

    def __init__(self, root_dir: str) -> None:
        self._root_dir = root_dir

    def _last_commit_year(self, relative_path: str) -> Optional[int]:
        env = {k: os.environ[k] for k in ("SYSTEMROOT", "PATH") if k in os.environ}
        env.update({"LANGUAGE": "C", "LANG": "C", "LC_ALL": "C"})
        try:
            with subprocess.Popen(
                ["git", "log", "-1", "--format=%aI", relative_path],
                cwd=self._root_dir,
                env=env,
                stdin=subprocess.DEVNULL,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
            ) as popen:
                out, _ = popen.communicate()
        except OSError:
            return None
        date = out.decode("utf-8").strip()
        return int(date[:4]) if len(date) >= 4 and date[:4].isdigit() else None

    @staticmethod
    def _header_years(line: str) -> List[int]:
        years = []
        for word in line.strip().split():
            for year in word.strip(".").split(","):
                if year.startswith("20") and len(year) >= 4 and year[:4].isdigit():
                    years.append(int(year[:4]))
        return years

    def check_file(self, file_path: str) -> HeaderReport:
        """Check one file."""
        relative_path = os.path.relpath(file_path, self._root_dir)
        has_header = False
        has_utf8 = False
        stale_year = None
        with open(file_path, "rt", encoding="utf8") as file:
            for line in file:
                if line.startswith(self._UTF_STRING):
                    has_utf8 = True
                if not line.startswith(self._COPYRIGHT_STRING):
                    continue
                has_header = True
                years = self._header_years(line)
                last_year = self._last_commit_year(relative_path)
                if years and last_year and years[-1] < last_year:
                    stale_year = years[-1]
                break
        return HeaderReport(relative_path, has_header, has_utf8, stale_year)

    def check(self) -> List[HeaderReport]:
        """Check every ``.py`` file below the scanned directories."""
        reports = []
        for directory in SCANNED_DIRS:
            for root, dirs, files in os.walk(os.path.join(self._root_dir, directory)):
                dirs[:] = sorted(d for d in dirs if not d.startswith("."))
                for name in sorted(files):
                    if name.endswith(".py"):
                        reports.append(self.check_file(os.path.join(root, name)))
        return reports


def check_path(path):
    """valid path argument"""
    if not path or os.path.isdir(path):
        return path

    raise argparse.ArgumentTypeError("readable_dir:{} is not a valid path".format(path))


if __name__ == "__main__":
    PARSER = argparse.ArgumentParser(description="Check Copyright Tool")
    PARSER.add_argument("-path", type=check_path, metavar="path", help="Root path of project.")

    ARGS = PARSER.parse_args()
    if not ARGS.path:
        ARGS.path = os.getcwd()

    ARGS.path = os.path.abspath(os.path.realpath(os.path.expanduser(ARGS.path)))
    REPORTS = CopyrightChecker(ARGS.path).check()
    FAILED = 0
    for report in REPORTS:
        if report.has_utf8_line:
            print(f"File contains utf-8 header: '{report.path}'")
        if not report.has_header:
            print(f"Missing copyright header: '{report.path}'")
        if report.stale_year is not None:
            print(f"Stale copyright year {report.stale_year}: '{report.path}'")
        FAILED += report.has_utf8_line or not report.has_header or report.stale_year is not None
    print(f"{FAILED} of {len(REPORTS)} files need attention.")

    sys.exit(os.EX_OK if FAILED == 0 else os.EX_SOFTWARE)
