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

"""Multiply and gather counters fed by instrumented kernels."""

from collections import Counter
from typing import Dict

# Term families of the per-block cost model. Anything else is counted but not
# part of the leading-order block terms.
TERM_ND2 = "nd2"
TERM_N2D = "n2d"
TERM_FFN = "ffn"


class KernelCounter:
    """Tallies scalar multiplies by term tag and table gathers by tag."""

    def __init__(self) -> None:
        self._multiplies: Counter = Counter()
        self._gathers: Counter = Counter()

    def add_multiplies(self, tag: str, count: int) -> None:
        """Record ``count`` multiplies under ``tag``."""
        self._multiplies[tag] += int(count)

    def add_gathers(self, tag: str, count: int) -> None:
        """Record ``count`` data-dependent reads from a learnable table under ``tag``."""
        self._gathers[tag] += int(count)

    @property
    def multiplies(self) -> Dict[str, int]:
        """Returns multiplies by tag."""
        return dict(self._multiplies)

    @property
    def gathers(self) -> Dict[str, int]:
        """Returns gathers by tag."""
        return dict(self._gathers)

    def total_multiplies(self) -> int:
        """Returns all multiplies regardless of tag."""
        return sum(self._multiplies.values())

    def total_gathers(self) -> int:
        """Returns all gathers regardless of tag."""
        return sum(self._gathers.values())

    def reset(self) -> None:
        """Clear every tally."""
        self._multiplies.clear()
        self._gathers.clear()

    def __repr__(self) -> str:
        return f"KernelCounter(multiplies={dict(self._multiplies)}, gathers={dict(self._gathers)})"
