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

"""Global random state shared by data preparation, initialization and training."""

import logging
from typing import List, Optional

import numpy as np

logger = logging.getLogger(__name__)


class FuxiRecGlobals:
    """Holds the package-wide seed and the generator derived from it.

    Setting :attr:`random_seed` rebuilds :attr:`random`, so a run that sets the
    seed once at start reproduces every draw made through this object. Components
    that run in parallel take independent streams from :meth:`spawn` instead of
    sharing one generator.
    """

    def __init__(self) -> None:
        self._random_seed: Optional[int] = None
        self._random: Optional[np.random.Generator] = None
        self._seed_sequence: Optional[np.random.SeedSequence] = None

    @property
    def random_seed(self) -> Optional[int]:
        """Return the seed, ``None`` when the generator is unseeded."""
        return self._random_seed

    @random_seed.setter
    def random_seed(self, seed: Optional[int]) -> None:
        self._random_seed = seed
        self._random = None
        self._seed_sequence = None
        logger.debug("Global random seed set to %s", seed)

    @property
    def random(self) -> np.random.Generator:
        """Return the global generator, creating it from the seed on first use."""
        if self._random is None:
            self._random = np.random.default_rng(self._sequence())
        return self._random

    def spawn(self, count: int) -> List[np.random.Generator]:
        """Return ``count`` statistically independent generators for workers."""
        return [np.random.default_rng(s) for s in self._sequence().spawn(count)]

    def _sequence(self) -> np.random.SeedSequence:
        if self._seed_sequence is None:
            self._seed_sequence = np.random.SeedSequence(self._random_seed)
        return self._seed_sequence


# pylint: disable=invalid-name
algorithm_globals = FuxiRecGlobals()
