"""Reader and writer for the binary tensor files the dataset generator emits.

Layout, all little endian: 4-byte magic "MRT1", one dtype code byte
(1 = float64, 2 = complex128, 3 = float32), one rank byte, rank u32
dimensions, then the row-major payload. Implemented here independently
so this package needs nothing from the generator at runtime; the test
suite cross-reads files produced by its CLI.
"""

import struct
from pathlib import Path

import numpy as np

__all__ = ["TensorFormatError", "load_tensor", "save_tensor"]

MAGIC = b"MRT1"

_CODE_TO_DTYPE = {1: "<f8", 2: "<c16", 3: "<f4"}
_DTYPE_TO_CODE = {np.dtype(d): c for c, d in _CODE_TO_DTYPE.items()}


class TensorFormatError(ValueError):
    """Malformed tensor file: bad magic, unknown dtype, or wrong length."""


def load_tensor(path) -> np.ndarray:
    blob = Path(path).read_bytes()
    if len(blob) < 6 or blob[:4] != MAGIC:
        raise TensorFormatError(f"{path}: not a tensor file (bad magic)")
    code, ndim = blob[4], blob[5]
    if code not in _CODE_TO_DTYPE:
        raise TensorFormatError(f"{path}: unknown dtype code {code}")
    header_end = 6 + 4 * ndim
    if len(blob) < header_end:
        raise TensorFormatError(f"{path}: truncated dimension list")
    dims = struct.unpack_from(f"<{ndim}I", blob, 6)
    dtype = np.dtype(_CODE_TO_DTYPE[code])
    expected = header_end + int(np.prod(dims, dtype=np.int64)) * dtype.itemsize
    if len(blob) != expected:
        raise TensorFormatError(
            f"{path}: payload is {len(blob) - header_end} bytes, "
            f"expected {expected - header_end}"
        )
    data = np.frombuffer(blob, dtype=dtype, offset=header_end).reshape(dims)
    return data.astype(dtype.newbyteorder("="))


def save_tensor(path, array) -> None:
    arr = np.asarray(array)
    if arr.dtype not in _DTYPE_TO_CODE:
        arr = arr.astype(
            np.complex128 if np.iscomplexobj(arr) else np.float64
        )
    if arr.ndim < 1 or arr.ndim > 255:
        raise ValueError(f"rank {arr.ndim} not serializable")
    if not np.all(np.isfinite(arr)):
        raise ValueError("refusing to serialize non-finite values")
    dtype = arr.dtype.newbyteorder("<")
    header = MAGIC + bytes([_DTYPE_TO_CODE[arr.dtype], arr.ndim])
    header += struct.pack(f"<{arr.ndim}I", *arr.shape)
    Path(path).write_bytes(header + np.ascontiguousarray(arr, dtype).tobytes())
