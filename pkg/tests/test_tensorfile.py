import numpy as np
import pytest
from PIL import Image

from mrmotion.tensorfile import (
    BadDtypeError,
    BadMagicError,
    TensorFormatError,
    TruncatedPayloadError,
    export_png,
    load_tensor,
    save_tensor,
)


def roundtrip(tmp_path, arr):
    path = tmp_path / "t.mrt"
    save_tensor(path, arr)
    return load_tensor(path)


@pytest.mark.parametrize("dtype", [np.float64, np.complex128, np.float32])
@pytest.mark.parametrize("shape", [(5,), (3, 4), (2, 3, 4), (2, 2, 3, 2)])
def test_roundtrip_bit_exact(tmp_path, dtype, shape):
    rng = np.random.default_rng(hash((np.dtype(dtype).name, shape)) % 2**32)
    arr = rng.standard_normal(shape).astype(dtype)
    if np.issubdtype(dtype, np.complexfloating):
        arr = arr + 1j * rng.standard_normal(shape)
    back = roundtrip(tmp_path, arr)
    assert back.dtype == np.dtype(dtype)
    assert back.shape == shape
    assert back.tobytes() == arr.tobytes()


def test_known_byte_layout(tmp_path):
    path = tmp_path / "t.mrt"
    save_tensor(path, np.array([[1.0, 2.0], [3.0, 4.0]]))
    blob = path.read_bytes()
    assert len(blob) == 46  # 4 magic + 1 dtype + 1 ndim + 8 dims + 32 payload
    assert blob[:4] == b"MRT1"
    assert blob[4] == 1
    assert blob[5] == 2
    assert np.frombuffer(blob[6:14], dtype="<u4").tolist() == [2, 2]
    assert np.frombuffer(blob[14:], dtype="<f8").tolist() == [1.0, 2.0, 3.0, 4.0]


def test_int_input_stored_as_real64(tmp_path):
    back = roundtrip(tmp_path, np.array([1, 2, 3]))
    assert back.dtype == np.float64
    assert back.tolist() == [1.0, 2.0, 3.0]


def test_scalar_rejected(tmp_path):
    with pytest.raises(ValueError):
        save_tensor(tmp_path / "t.mrt", np.float64(3.0))


def test_zero_length_dim_rejected(tmp_path):
    with pytest.raises(ValueError):
        save_tensor(tmp_path / "t.mrt", np.zeros((2, 0)))


def test_non_finite_rejected(tmp_path):
    with pytest.raises(ValueError):
        save_tensor(tmp_path / "t.mrt", np.array([1.0, np.nan]))
    with pytest.raises(ValueError):
        save_tensor(tmp_path / "t.mrt", np.array([np.inf, 1.0]))


def test_bad_magic(tmp_path):
    path = tmp_path / "t.mrt"
    save_tensor(path, np.ones(3))
    blob = path.read_bytes()
    path.write_bytes(b"XXXX" + blob[4:])
    with pytest.raises(BadMagicError):
        load_tensor(path)


def test_bad_dtype_code(tmp_path):
    path = tmp_path / "t.mrt"
    save_tensor(path, np.ones(3))
    blob = bytearray(path.read_bytes())
    blob[4] = 9
    path.write_bytes(bytes(blob))
    with pytest.raises(BadDtypeError):
        load_tensor(path)


def test_truncated_payload(tmp_path):
    path = tmp_path / "t.mrt"
    save_tensor(path, np.ones((2, 2)))
    blob = path.read_bytes()
    path.write_bytes(blob[:-1])
    with pytest.raises(TruncatedPayloadError):
        load_tensor(path)


def test_truncated_header(tmp_path):
    path = tmp_path / "t.mrt"
    path.write_bytes(b"MR")
    with pytest.raises(TruncatedPayloadError):
        load_tensor(path)
    path.write_bytes(b"MRT1\x01")
    with pytest.raises(TruncatedPayloadError):
        load_tensor(path)
    path.write_bytes(b"MRT1\x01\x02\x02\x00")  # dims cut short
    with pytest.raises(TruncatedPayloadError):
        load_tensor(path)


def test_trailing_bytes_rejected(tmp_path):
    path = tmp_path / "t.mrt"
    save_tensor(path, np.ones((2, 2)))
    path.write_bytes(path.read_bytes() + b"\x00")
    with pytest.raises(TensorFormatError):
        load_tensor(path)


def test_error_hierarchy():
    assert issubclass(BadMagicError, TensorFormatError)
    assert issubclass(BadDtypeError, TensorFormatError)
    assert issubclass(TruncatedPayloadError, TensorFormatError)
    assert issubclass(TensorFormatError, ValueError)


def test_export_png_constant_image(tmp_path):
    path = tmp_path / "c.png"
    export_png(np.full((4, 4), 0.7), path)
    arr = np.asarray(Image.open(path))
    assert arr.shape == (4, 4)
    assert (arr == 0).all()


def test_export_png_endpoints(tmp_path):
    path = tmp_path / "e.png"
    export_png(np.array([[0.0, 1.0], [1.0, 0.0]]), path)
    arr = np.asarray(Image.open(path))
    assert sorted(set(arr.ravel().tolist())) == [0, 255]


def test_export_png_complex_magnitude(tmp_path):
    a = tmp_path / "a.png"
    b = tmp_path / "b.png"
    z = np.array([[0.0, 3 + 4j], [1j, 2.0]])
    export_png(z, a)
    export_png(np.abs(z), b)
    assert a.read_bytes() == b.read_bytes()


def test_export_png_monotone(tmp_path):
    path = tmp_path / "m.png"
    vals = np.linspace(0.0, 1.0, 16).reshape(4, 4)
    export_png(vals, path)
    arr = np.asarray(Image.open(path)).ravel()
    assert (np.diff(arr.astype(int)) >= 0).all()
    assert arr.min() == 0 and arr.max() == 255
