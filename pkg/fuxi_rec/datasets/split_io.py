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
Split files.

A split file stores every user's full chronological history so that the
leave-one-out sequences can be rebuilt for any length. Layout, all integers
little-endian::

    b"FXB1"  u32 user_count  u32 item_count  u32 max_len
    user_count x [ u32 user_id  u32 length  length x u32 item  length x i64 timestamp ]

A JSON sidecar ``<path>.json`` records the counts, the preparation config, its
hash and the SHA-256 of the split file.
"""

import json
import logging
import os
import struct
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from .sequences import SplitDataset, UserHistory, build_split
from ..exceptions import CheckpointError
from ..utils.hashing import config_hash, file_hash

logger = logging.getLogger(__name__)

MAGIC = b"FXB1"


def sidecar_path(path: str) -> str:
    """Path of the JSON sidecar for a split file."""
    return path + ".json"


def encode_split(histories: List[UserHistory], item_count: int, max_len: int) -> bytes:
    """Serialize histories in the given order."""
    chunks = [MAGIC, struct.pack("<III", len(histories), item_count, max_len)]
    for history in histories:
        chunks.append(struct.pack("<II", history.user_id, len(history.items)))
        chunks.append(np.asarray(history.items, dtype="<u4").tobytes())
        chunks.append(np.asarray(history.timestamps, dtype="<i8").tobytes())
    return b"".join(chunks)


def decode_split(data: bytes) -> Tuple[List[UserHistory], int, int]:
    """Parse bytes from :func:`encode_split` into ``(histories, item_count, max_len)``.

    Raises:
        CheckpointError: on a bad magic or truncated record.
    """
    if data[:4] != MAGIC:
        raise CheckpointError("Not a split file (bad magic)")
    try:
        user_count, item_count, max_len = struct.unpack_from("<III", data, 4)
        offset = 16
        histories = []
        for _ in range(user_count):
            user_id, length = struct.unpack_from("<II", data, offset)
            offset += 8
            items = np.frombuffer(data, dtype="<u4", count=length, offset=offset)
            offset += 4 * length
            times = np.frombuffer(data, dtype="<i8", count=length, offset=offset)
            offset += 8 * length
            histories.append(
                UserHistory(user_id, items.astype(np.int64), times.astype(np.int64))
            )
    except (struct.error, ValueError) as ex:
        raise CheckpointError(f"Split file truncated: {ex}") from ex
    if offset != len(data):
        raise CheckpointError("Trailing bytes after the last user record")
    return histories, item_count, max_len


def save_split(
    path: str, dataset: SplitDataset, config: Optional[Dict[str, Any]] = None
) -> Dict[str, Any]:
    """Write the split file and its sidecar; returns the sidecar contents."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "wb") as file:
        file.write(encode_split(dataset.histories, dataset.item_count, dataset.max_len))
    config = config or {}
    sidecar = {
        "format": MAGIC.decode("ascii"),
        "user_count": dataset.user_count,
        "item_count": dataset.item_count,
        "max_len": dataset.max_len,
        "interactions": int(sum(len(h.items) for h in dataset.histories)),
        "mean_train_length": float(np.mean(dataset.train.lengths)),
        "config": config,
        "config_hash": config_hash(config),
        "dataset_hash": file_hash(path),
    }
    with open(sidecar_path(path), "w", encoding="utf8") as file:
        json.dump(sidecar, file, indent=2, sort_keys=True)
        file.write("\n")
    logger.info("Wrote split %s (%s users, %s items)", path, dataset.user_count, dataset.item_count)
    return sidecar


def load_split(path: str, max_len: Optional[int] = None) -> SplitDataset:
    """Read a split file and rebuild the sequences.

    Args:
        path: split file written by :func:`save_split`.
        max_len: rebuild with this length instead of the stored one.

    Raises:
        CheckpointError: if the file is malformed.
    """
    with open(path, "rb") as file:
        histories, item_count, stored_len = decode_split(file.read())
    if max_len and max_len != stored_len:
        logger.warning(
            "Split %s was prepared with max_len %s; rebuilding its sequences with max_len %s",
            path,
            stored_len,
            max_len,
        )
    dataset = build_split(histories, max_len or stored_len)
    dataset.item_count = max(dataset.item_count, item_count)
    return dataset
