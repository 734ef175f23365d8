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

"""A noise-free cyclic interaction log for learning checks."""

from typing import List

import numpy as np

from .movielens import RawInteraction
from ..utils.validation import validate_min

SECONDS_PER_DAY = 86_400


def synthetic_cyclic(
    num_users: int = 500, cycle_length: int = 50, seq_len: int = 20, seed: int = 0
) -> List[List[RawInteraction]]:
    """Users walking a fixed cycle of items from a random starting phase.

    User ``u`` with phase ``p`` interacts with items ``(p + k) % cycle_length + 1``
    for ``k = 0..seq_len-1``, one day apart from a random start time, so the next
    item is always determined by the current one.
    """
    validate_min("num_users", num_users, 1)
    validate_min("cycle_length", cycle_length, 2)
    validate_min("seq_len", seq_len, 3)
    rng = np.random.default_rng(seed)
    phases = rng.integers(0, cycle_length, size=num_users)
    starts = rng.integers(0, 365 * SECONDS_PER_DAY, size=num_users)
    users = []
    for user, (phase, start) in enumerate(zip(phases, starts), start=1):
        users.append(
            [
                RawInteraction(
                    user,
                    int((phase + k) % cycle_length + 1),
                    5.0,
                    int(start + k * SECONDS_PER_DAY),
                )
                for k in range(seq_len)
            ]
        )
    return users
