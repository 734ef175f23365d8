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

"""MovieLens interaction logs."""

import logging
import os
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, Iterator, List, Tuple

import numpy as np
from sklearn.preprocessing import LabelEncoder

from ..exceptions import DatasetParseError, EmptyDatasetError
from ..utils.validation import validate_min

logger = logging.getLogger(__name__)

CSV_HEADER = "userId,movieId,rating,timestamp"


@dataclass(frozen=True)
class RawInteraction:
    """One rating event.

    ``rating`` is a float because the ``.csv`` releases carry half stars; it is not
    used by the models.
    """

    user_id: int
    item_id: int
    rating: float
    timestamp: int


def _split_fields(line: str, separator: str, line_number: int) -> Tuple[str, str, str, str]:
    fields = line.split(separator)
    if len(fields) != 4:
        raise DatasetParseError(
            f"expected 4 fields separated by {separator!r}, found {len(fields)}", line_number
        )
    return fields[0], fields[1], fields[2], fields[3]


def _parse_line(line: str, separator: str, line_number: int) -> RawInteraction:
    user, item, rating, timestamp = _split_fields(line, separator, line_number)
    try:
        interaction = RawInteraction(int(user), int(item), float(rating), int(timestamp))
    except ValueError as ex:
        raise DatasetParseError(f"non-numeric field in {line!r}", line_number) from ex
    if interaction.user_id < 1 or interaction.item_id < 1:
        raise DatasetParseError("user and item ids must be >= 1", line_number)
    if interaction.timestamp < 0:
        raise DatasetParseError("timestamp must be >= 0", line_number)
    return interaction


def iter_interactions(path: str) -> Iterator[RawInteraction]:
    """Yield interactions in file order from a ``::`` separated ``.dat`` or a ``.csv`` file.

    Raises:
        DatasetParseError: naming the first malformed line.
    """
    is_csv = os.path.splitext(path)[1].lower() == ".csv"
    separator = "," if is_csv else "::"
    with open(path, "r", encoding="latin-1") as file:
        for line_number, line in enumerate(file, start=1):
            line = line.strip()
            if not line:
                continue
            if is_csv and line_number == 1 and line.replace(" ", "") == CSV_HEADER:
                continue
            yield _parse_line(line, separator, line_number)


def parse_movielens(path: str, min_interactions: int = 5) -> List[List[RawInteraction]]:
    """Read a MovieLens log into chronological per-user interaction lists.

    Args:
        path: ``ratings.dat`` (``UserID::MovieID::Rating::Timestamp``) or ``ratings.csv``.
        min_interactions: users with fewer interactions are dropped.

    Returns:
        One list per surviving user, users in ascending id order, each sorted by
        timestamp with ties kept in file order. Item ids are remapped to the dense
        range ``1..item_count`` over the surviving users.

    Raises:
        DatasetParseError: on a malformed line.
        EmptyDatasetError: if no user has ``min_interactions`` interactions.
        FileNotFoundError: if ``path`` does not exist.
    """
    validate_min("min_interactions", min_interactions, 1)
    by_user: Dict[int, List[RawInteraction]] = OrderedDict()
    for interaction in iter_interactions(path):
        by_user.setdefault(interaction.user_id, []).append(interaction)

    kept = [
        sorted(by_user[user], key=lambda r: r.timestamp)
        for user in sorted(by_user)
        if len(by_user[user]) >= min_interactions
    ]
    if not kept:
        raise EmptyDatasetError(
            f"no user in {path} has at least {min_interactions} interactions"
        )

    encoder = LabelEncoder()
    encoder.fit(np.fromiter((r.item_id for user in kept for r in user), dtype=np.int64))
    remapped = []
    for user in kept:
        dense = encoder.transform([r.item_id for r in user]) + 1
        remapped.append(
            [
                RawInteraction(r.user_id, int(item), r.rating, r.timestamp)
                for r, item in zip(user, dense)
            ]
        )
    logger.info(
        "Parsed %s: %s users, %s items, %s interactions",
        path,
        len(remapped),
        len(encoder.classes_),
        sum(len(u) for u in remapped),
    )
    return remapped


def item_count_of(users: List[List[RawInteraction]]) -> int:
    """Largest item id in ``users``."""
    return max(r.item_id for user in users for r in user)
