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
Binary checkpoint files.

Layout, all integers little-endian::

    b"FXCK"  u32 version  u32 record_count
    record_count x [ u32 name_length  name (utf-8)  u8 dtype_tag
                     u32 ndim  ndim x u32 dim  raw values ]
    u32 crc32 of every preceding byte

dtype tags: 0 = float64, 1 = float32.
"""

import logging
import os
import struct
import tempfile
import zlib
from collections import OrderedDict
from typing import Dict

import numpy as np

from ..exceptions import CheckpointError

logger = logging.getLogger(__name__)

MAGIC = b"FXCK"
FORMAT_VERSION = 1
_DTYPE_TAGS = {np.dtype("float64"): 0, np.dtype("float32"): 1}
_TAG_DTYPES = {tag: dtype.newbyteorder("<") for dtype, tag in _DTYPE_TAGS.items()}


def encode_checkpoint(arrays: Dict[str, np.ndarray]) -> bytes:
    """Serialize named arrays in iteration order.

    Raises:
        CheckpointError: if an array has an unsupported dtype.
    """
    chunks = [MAGIC, struct.pack("<II", FORMAT_VERSION, len(arrays))]
    for name, array in arrays.items():
        array = np.asarray(array)
        tag = _DTYPE_TAGS.get(array.dtype)
        if tag is None:
            raise CheckpointError(f"Unsupported dtype {array.dtype} for '{name}'")
        encoded = name.encode("utf8")
        chunks.append(struct.pack("<I", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<BI", tag, array.ndim))
        chunks.append(struct.pack(f"<{array.ndim}I", *array.shape))
        chunks.append(np.ascontiguousarray(array, dtype=_TAG_DTYPES[tag]).tobytes())
    body = b"".join(chunks)
    return body + struct.pack("<I", zlib.crc32(body))


def decode_checkpoint(data: bytes) -> Dict[str, np.ndarray]:
    """Parse bytes produced by :func:`encode_checkpoint`.

    Raises:
        CheckpointError: on a bad magic, version, CRC or truncated record.
    """
    if len(data) < 16 or data[:4] != MAGIC:
        raise CheckpointError("Not a checkpoint file (bad magic)")
    body, (crc,) = data[:-4], struct.unpack("<I", data[-4:])
    if zlib.crc32(body) != crc:
        raise CheckpointError("Checkpoint CRC mismatch")
    version, count = struct.unpack_from("<II", body, 4)
    if version != FORMAT_VERSION:
        raise CheckpointError(f"Unsupported checkpoint version {version}")
    offset = 12
    arrays: Dict[str, np.ndarray] = OrderedDict()
    try:
        for _ in range(count):
            (name_length,) = struct.unpack_from("<I", body, offset)
            offset += 4
            name = body[offset : offset + name_length].decode("utf8")
            offset += name_length
            tag, ndim = struct.unpack_from("<BI", body, offset)
            offset += 5
            shape = struct.unpack_from(f"<{ndim}I", body, offset)
            offset += 4 * ndim
            dtype = _TAG_DTYPES[tag]
            nbytes = int(np.prod(shape, dtype=np.int64)) * dtype.itemsize
            if offset + nbytes > len(body):
                raise CheckpointError(f"Checkpoint truncated in '{name}'")
            values = np.frombuffer(body, dtype=dtype, count=nbytes // dtype.itemsize, offset=offset)
            arrays[name] = values.reshape(shape).astype(dtype.newbyteorder("="))
            offset += nbytes
    except (struct.error, KeyError, UnicodeDecodeError) as ex:
        raise CheckpointError(f"Malformed checkpoint record: {ex}") from ex
    if offset != len(body):
        raise CheckpointError("Trailing bytes after the last checkpoint record")
    return arrays


def save_checkpoint(path: str, arrays: Dict[str, np.ndarray]) -> None:
    """Write a checkpoint atomically."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    handle, tmp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(handle, "wb") as file:
            file.write(encode_checkpoint(arrays))
        os.replace(tmp_path, path)
    except BaseException:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    logger.debug("Saved %s arrays to %s", len(arrays), path)


def load_checkpoint(path: str) -> Dict[str, np.ndarray]:
    """Read a checkpoint file.

    Raises:
        CheckpointError: if the file is malformed.
    """
    with open(path, "rb") as file:
        return decode_checkpoint(file.read())
