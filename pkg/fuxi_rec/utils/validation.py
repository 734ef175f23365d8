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

"""Argument validation helpers raising :class:`~fuxi_rec.exceptions.ConfigurationError`."""

from typing import Any, Collection, Union

from ..exceptions import ConfigurationError

Number = Union[int, float]


def validate_min(name: str, value: Number, minimum: Number) -> None:
    """
    Args:
        name: value name.
        value: value to check.
        minimum: minimum value allowed.

    Raises:
        ConfigurationError: if ``value`` is below ``minimum``.
    """
    if value < minimum:
        raise ConfigurationError(f"{name} must have value >= {minimum}, was {value}")


def validate_range(
    name: str, value: Number, minimum: Number, maximum: Number, exclusive_min: bool = False
) -> None:
    """
    Args:
        name: value name.
        value: value to check.
        minimum: lower bound.
        maximum: upper bound, inclusive.
        exclusive_min: whether ``minimum`` itself is rejected.

    Raises:
        ConfigurationError: if ``value`` lies outside the range.
    """
    too_small = value <= minimum if exclusive_min else value < minimum
    if too_small or value > maximum:
        lower = "(" if exclusive_min else "["
        raise ConfigurationError(
            f"{name} must be in {lower}{minimum}, {maximum}], was {value}"
        )


def validate_in_set(name: str, value: Any, allowed: Collection[Any]) -> None:
    """
    Args:
        name: value name.
        value: value to check.
        allowed: the accepted values.

    Raises:
        ConfigurationError: if ``value`` is not one of ``allowed``.
    """
    if value not in allowed:
        raise ConfigurationError(
            f"{name} must be one of {', '.join(str(a) for a in allowed)}; got {value!r}"
        )
