import numpy as np
import pytest
from PIL import Image

from mrmotion.phantoms import band_limited, ingest_png, phantom_slices, shepp_logan
from mrmotion.tensorfile import export_png


def test_center_value_from_ellipse_table():
    # ellipses covering the origin contribute 2 and -0.98; the sum 1.02
    # clamps to 1.0
    img = shepp_logan(64, 64)
    assert img[32, 32] == 1.0
    odd = shepp_logan(65, 65)
    assert odd[32, 32] == 1.0


def test_range_and_background():
    img = shepp_logan(96, 64)
    assert img.min() >= 0.0 and img.max() <= 1.0
    for corner in (img[0, 0], img[0, -1], img[-1, 0], img[-1, -1]):
        assert corner == 0.0


def test_deterministic():
    assert np.array_equal(shepp_logan(48, 48), shepp_logan(48, 48))


def test_too_small_rejected():
    with pytest.raises(ValueError):
        shepp_logan(7, 64)
    with pytest.raises(ValueError):
        shepp_logan(64, 7)


def test_scale_shrinks_support():
    full = shepp_logan(64, 64)
    small = shepp_logan(64, 64, scale=0.35)
    assert small[32, 32] == 1.0
    assert np.count_nonzero(small) < np.count_nonzero(full)
    # everything outside the shrunken head is empty
    assert small[:8, :].max() == 0.0
    assert small[-8:, :].max() == 0.0
    with pytest.raises(ValueError):
        shepp_logan(64, 64, scale=0.0)


def test_band_limited_stays_close_and_real():
    img = shepp_logan(128, 128)
    smooth = band_limited(img)
    assert smooth.dtype == np.float64
    rel = np.linalg.norm(smooth - img) / np.linalg.norm(img)
    assert rel < 0.3
    assert np.array_equal(smooth, band_limited(img))


def test_band_limited_complex_passthrough():
    z = shepp_logan(32, 32) * (1 + 1j)
    out = band_limited(z)
    assert np.iscomplexobj(out)
    with pytest.raises(ValueError):
        band_limited(z, sigma_fraction=0.0)
    with pytest.raises(ValueError):
        band_limited(np.zeros(5))


def test_phantom_slices_family():
    slices = phantom_slices(5, 48, 48)
    assert len(slices) == 5
    for s in slices:
        assert s.shape == (48, 48)
        assert s.min() >= 0.0 and s.max() <= 1.0
    # distinct slices
    assert not np.array_equal(slices[0], slices[4])
    again = phantom_slices(5, 48, 48)
    for a, b in zip(slices, again):
        assert np.array_equal(a, b)
    assert np.array_equal(phantom_slices(1, 32, 32)[0], shepp_logan(32, 32))
    with pytest.raises(ValueError):
        phantom_slices(0, 32, 32)


def test_ingest_roundtrip_within_quantization(tmp_path):
    img = shepp_logan(64, 64)
    path = tmp_path / "p.png"
    export_png(img, path)
    back = ingest_png(path)
    # the phantom spans [0, 1], so export normalization is the identity
    assert np.abs(back - img).max() <= 1.0 / 255.0 + 1e-9


def test_ingest_all_black(tmp_path):
    path = tmp_path / "b.png"
    Image.new("L", (16, 12), 0).save(path)
    arr = ingest_png(path)
    assert arr.shape == (12, 16)
    assert (arr == 0.0).all()


def test_ingest_16bit(tmp_path):
    path = tmp_path / "w.png"
    data = (np.linspace(0, 1, 64).reshape(8, 8) * 65535).astype(np.uint16)
    Image.fromarray(data).save(path)
    arr = ingest_png(path)
    assert np.abs(arr - data / 65535.0).max() < 1e-12


def test_ingest_color_rejected(tmp_path):
    path = tmp_path / "c.png"
    Image.new("RGB", (8, 8), (10, 20, 30)).save(path)
    with pytest.raises(ValueError):
        ingest_png(path)


def test_ingest_missing_file(tmp_path):
    with pytest.raises(OSError):
        ingest_png(tmp_path / "nope.png")
