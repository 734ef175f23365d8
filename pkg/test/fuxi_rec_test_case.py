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


"""FuXi-Rec Test Case"""

from typing import Optional
from abc import ABC
import functools
import inspect
import logging
import os
import shutil
import tempfile
import time
import unittest
import warnings

import numpy as np

from fuxi_rec.datasets import SplitDataset, build_sequences, synthetic_cyclic
from fuxi_rec.exceptions import MissingOptionalLibraryError
from fuxi_rec.neural_networks import ModelConfig, SequentialRecommender


def requires_extra_library(test_item):
    """Decorator that skips test if an extra library is not available

    Args:
        test_item (callable): function to be decorated.

    Returns:
        callable: the decorated function.
    """

    @functools.wraps(test_item)
    def wrapper(self, *args, **kwargs):
        try:
            test_item(self, *args, **kwargs)
        except MissingOptionalLibraryError as ex:
            self.skipTest(str(ex))

    return wrapper


class FuxiRecTestCase(unittest.TestCase, ABC):
    """FuXi-Rec Test Case"""

    moduleName = None
    log = None

    def setUp(self) -> None:
        warnings.filterwarnings("default", category=DeprecationWarning)
        self._started_at = time.time()
        self._class_location = __file__

    def tearDown(self) -> None:
        elapsed = time.time() - self._started_at
        if elapsed > 5.0:
            print("({:.2f}s)".format(round(elapsed, 2)), flush=True)

    @classmethod
    def setUpClass(cls) -> None:
        cls.moduleName = os.path.splitext(inspect.getfile(cls))[0]
        cls.log = logging.getLogger(cls.__name__)

        # Set logging to file and stdout if the LOG_LEVEL environment variable
        # is set.
        if os.getenv("LOG_LEVEL"):
            # Set up formatter.
            log_fmt = "{}.%(funcName)s:%(levelname)s:%(asctime)s:" " %(message)s".format(
                cls.__name__
            )
            formatter = logging.Formatter(log_fmt)

            # Set up the file handler.
            log_file_name = "%s.log" % cls.moduleName
            file_handler = logging.FileHandler(log_file_name)
            file_handler.setFormatter(formatter)
            cls.log.addHandler(file_handler)

            # Set the logging level from the environment variable, defaulting
            # to INFO if it is not a valid level.
            level = logging.getLevelName(os.getenv("LOG_LEVEL"))
            cls.log.setLevel(level if isinstance(level, int) else logging.INFO)

    def get_resource_path(self, filename: str, path: Optional[str] = None) -> str:
        """Get the absolute path to a resource.
        Args:
            filename: filename or relative path to the resource.
            path: path used as relative to the filename.
        Returns:
            str: the absolute path to the resource.
        """
        root = os.path.dirname(self._class_location)
        path = root if path is None else os.path.join(root, path)
        return os.path.normpath(os.path.join(path, filename))

    def make_temp_dir(self) -> str:
        """A fresh directory removed when the test finishes."""
        path = tempfile.mkdtemp(prefix="fuxi_rec_test_")
        self.addCleanup(shutil.rmtree, path, ignore_errors=True)
        return path

    @staticmethod
    def cyclic_dataset(
        num_users: int = 40, cycle_length: int = 12, seq_len: int = 10, max_len: int = 8
    ) -> SplitDataset:
        """A small noise-free dataset where the next item follows from the current one."""
        users = synthetic_cyclic(num_users=num_users, cycle_length=cycle_length, seq_len=seq_len)
        return build_sequences(users, max_len)

    @staticmethod
    def small_model(item_count: int = 12, max_len: int = 8, **changes) -> SequentialRecommender:
        """A one-block FuXi-β model with narrow layers."""
        values = dict(
            item_count=item_count,
            max_len=max_len,
            embed_dim=8,
            num_blocks=1,
            d_ffn=8,
            num_negatives=4,
            time_scale=86_400.0,
            seed=0,
        )
        values.update(changes)
        return SequentialRecommender(ModelConfig(**values))

    @staticmethod
    def increasing_timestamps(rng: np.random.Generator, batch: int, n: int) -> np.ndarray:
        """Non-decreasing timestamps, up to two days apart, shaped ``(batch, n)``."""
        gaps = rng.integers(0, 2 * 86_400, size=(batch, n))
        return 1_600_000_000 + np.cumsum(gaps, axis=1)
