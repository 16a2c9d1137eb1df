"""Bit-exact binary tensor files and grayscale PNG export.

File layout (little-endian throughout):

    bytes 0..3   magic "MRT1"
    byte  4      dtype code: 1 = real64, 2 = complex128, 3 = real32
    byte  5      ndim
    next 4*ndim  dims as unsigned 32-bit
    rest         payload, row-major IEEE-754 elements

The payload length must equal element-size * product(dims); a write
followed by a read returns the identical bits.
"""

import numpy as np
from PIL import Image

MAGIC = b"MRT1"

_CODE_TO_DTYPE = {1: np.dtype("<f8"), 2: np.dtype("<c16"), 3: np.dtype("<f4")}


class TensorFormatError(ValueError):
    """A tensor file violates the binary layout."""


class BadMagicError(TensorFormatError):
    """Leading magic bytes are not 'MRT1'."""


class BadDtypeError(TensorFormatError):
    """Unknown dtype code byte."""


class TruncatedPayloadError(TensorFormatError):
    """File ends before the declared payload (or header) is complete."""


def _storage_dtype(arr: np.ndarray) -> tuple[int, np.dtype]:
    if np.iscomplexobj(arr):
        return 2, _CODE_TO_DTYPE[2]
    if arr.dtype == np.float32:
        return 3, _CODE_TO_DTYPE[3]
    return 1, _CODE_TO_DTYPE[1]


def save_tensor(path, tensor) -> None:
    """Write a real or complex tensor of rank >= 1 to `path`.

    Integer and float64 data are stored as real64, float32 as real32, and
    any complex data as complex128. Non-finite values are rejected.
    """
    arr = np.asarray(tensor)
    if arr.ndim == 0:
        raise ValueError("cannot save a scalar: dims list would be empty")
    if arr.ndim > 255:
        raise ValueError(f"rank {arr.ndim} exceeds the 255 limit of the format")
    if any(d == 0 for d in arr.shape):
        raise ValueError(f"zero-length dimension in shape {arr.shape}")
    if any(d > 0xFFFFFFFF for d in arr.shape):
        raise ValueError(f"dimension exceeds uint32 range in shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("tensor contains non-finite values")

    code, dtype = _storage_dtype(arr)
    payload = np.ascontiguousarray(arr, dtype=dtype)
    header = MAGIC + bytes([code, arr.ndim])
    dims = np.asarray(arr.shape, dtype="<u4").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(dims)
        fh.write(payload.tobytes(order="C"))


def load_tensor(path) -> np.ndarray:
    """Read a tensor written by :func:`save_tensor`, bit-for-bit."""
    with open(path, "rb") as fh:
        blob = fh.read()

    if len(blob) < 4 or blob[:4] != MAGIC:
        if len(blob) >= 4:
            raise BadMagicError(f"{path}: bad magic {blob[:4]!r}")
        raise TruncatedPayloadError(f"{path}: file shorter than the 4-byte magic")
    if len(blob) < 6:
        raise TruncatedPayloadError(f"{path}: header truncated")

    code, ndim = blob[4], blob[5]
    if code not in _CODE_TO_DTYPE:
        raise BadDtypeError(f"{path}: unknown dtype code {code}")
    if ndim == 0:
        raise TensorFormatError(f"{path}: empty dims list")

    dims_end = 6 + 4 * ndim
    if len(blob) < dims_end:
        raise TruncatedPayloadError(f"{path}: dims truncated")
    dims = np.frombuffer(blob[6:dims_end], dtype="<u4")

    dtype = _CODE_TO_DTYPE[code]
    expected = int(np.prod(dims, dtype=np.uint64)) * dtype.itemsize
    payload = blob[dims_end:]
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"{path}: payload is {len(payload)} bytes, expected {expected}"
        )
    if len(payload) > expected:
        raise TensorFormatError(
            f"{path}: {len(payload) - expected} trailing bytes after payload"
        )

    arr = np.frombuffer(payload, dtype=dtype).reshape(tuple(int(d) for d in dims))
    return arr.astype(dtype.newbyteorder("="))


def export_png(image, path) -> None:
    """Write an 8-bit grayscale PNG of the magnitude of a 2D image.

    Pixels are scaled by (v - min) / (max - min) * 255; a constant image
    maps to all zeros.
    """
    arr = np.asarray(image)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D image, got rank {arr.ndim}")
    mag = np.abs(arr).astype(np.float64)
    lo, hi = mag.min(), mag.max()
    if hi > lo:
        scaled = (mag - lo) / (hi - lo) * 255.0
    else:
        scaled = np.zeros_like(mag)
    Image.fromarray(np.rint(scaled).astype(np.uint8), mode="L").save(path, format="PNG")


def as_real_image(image) -> np.ndarray:
    """Validate and return a finite 2D float64 image."""
    arr = np.asarray(image, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D real image, got rank {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    return arr


def as_complex_image(image) -> np.ndarray:
    """Validate and return a finite 2D complex128 image."""
    arr = np.asarray(image, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2D complex image, got rank {arr.ndim}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("image contains non-finite values")
    return arr
