import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qbc.image_io import (EmptyImageError, GrayImage, ImageReadError, UnsupportedFormatError,
                          load_image, open_input, pad_to_block_multiple, save_pgm,
                          synth_image)


def test_load_ascii_pgm(tmp_path):
    p = tmp_path / "a.pgm"
    p.write_bytes(b"P2\n# comment\n2 2\n255\n0 10\n20 30\n")
    img = load_image(p)
    assert (img.width, img.height) == (2, 2)
    assert img.data.ravel().tolist() == [0, 10, 20, 30]


def test_load_binary_pgm(tmp_path):
    p = tmp_path / "b.pgm"
    p.write_bytes(b"P5\n4 3\n255\n" + bytes([128]) * 12)
    img = load_image(p)
    assert img.data.shape == (3, 4)
    assert np.all(img.data == 128)


def test_truncated_pgm(tmp_path):
    p = tmp_path / "t.pgm"
    p.write_bytes(b"P5\n4 4\n255\n" + bytes(5))
    with pytest.raises(ImageReadError):
        load_image(p)


@pytest.mark.parametrize("content, exc", [
    (b"P5\n0 4\n255\n", EmptyImageError),
    (b"GIF89a....", UnsupportedFormatError),
    (b"P5\n2 2\n65535\n" + bytes(8), UnsupportedFormatError),
    (b"P2\n2 2\n255\n1 2 3", ImageReadError),
    (b"P", ImageReadError),
])
def test_distinct_errors(tmp_path, content, exc):
    p = tmp_path / "x.img"
    p.write_bytes(content)
    with pytest.raises(exc):
        load_image(p)


def test_missing_file(tmp_path):
    with pytest.raises(ImageReadError, match="nope.pgm"):
        load_image(tmp_path / "nope.pgm")


def test_png_gray_and_rgb(tmp_path):
    from PIL import Image

    gray = np.arange(12, dtype=np.uint8).reshape(3, 4) * 20
    Image.fromarray(gray, "L").save(tmp_path / "g.png")
    assert np.array_equal(load_image(tmp_path / "g.png").data, gray)

    rgb = np.zeros((2, 2, 3), dtype=np.uint8)
    rgb[0, 0] = (255, 0, 0)
    rgb[0, 1] = (0, 255, 0)
    rgb[1, 0] = (0, 0, 255)
    rgb[1, 1] = (10, 20, 30)
    Image.fromarray(rgb, "RGB").save(tmp_path / "c.png")
    got = load_image(tmp_path / "c.png").data
    # round(0.299 R + 0.587 G + 0.114 B) evaluated by hand
    assert got.tolist() == [[76, 150], [29, 18]]


@settings(max_examples=30, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(1, 20), st.integers(1, 20))), st.booleans())
def test_pgm_round_trip(tmp_path_factory, data, binary):
    p = tmp_path_factory.mktemp("rt") / "x.pgm"
    img = GrayImage(data)
    save_pgm(img, p, binary=binary)
    assert load_image(p) == img


def test_pad_unchanged_when_aligned():
    img = synth_image("gradient", 512, 512)
    assert pad_to_block_multiple(img, 16) is img


def test_pad_edge_replication():
    img = GrayImage(np.arange(17 * 16, dtype=np.uint8).reshape(16, 17))
    out = pad_to_block_multiple(img, 16)
    assert (out.width, out.height) == (32, 16)
    assert np.array_equal(out.data[:, :17], img.data)
    for col in range(17, 32):
        assert np.array_equal(out.data[:, col], img.data[:, 16])


def test_pad_single_pixel():
    out = pad_to_block_multiple(GrayImage(np.array([[42]], dtype=np.uint8)), 16)
    assert out.data.shape == (16, 16) and np.all(out.data == 42)


@settings(max_examples=40, deadline=None)
@given(arrays(np.uint8, st.tuples(st.integers(1, 40), st.integers(1, 40))),
       st.sampled_from([1, 2, 8, 16]))
def test_pad_properties(data, block):
    img = GrayImage(data)
    once = pad_to_block_multiple(img, block)
    assert once.width % block == 0 and once.height % block == 0
    assert pad_to_block_multiple(once, block) == once
    assert np.array_equal(once.data[: img.height, : img.width], img.data)


def test_synth_patterns():
    assert np.all(synth_image("constant", 16, 16, 128).data == 128)
    cb = synth_image("checkerboard", 16, 16, 8).data
    assert np.all(cb[:8, :8] == 0) and np.all(cb[:8, 8:] == 255)
    assert np.all(cb[8:, :8] == 255) and np.all(cb[8:, 8:] == 0)
    assert synth_image("gradient", 2, 2).data.ravel().tolist() == [0, 128, 128, 255]
    assert synth_image("gradient", 1, 1).data.tolist() == [[0]]


def test_synth_spec_strings():
    img = open_input("synth:checkerboard:8:32x16")
    assert (img.width, img.height) == (32, 16)
    assert open_input("synth:gradient:4x4").data[3, 3] == 255
    with pytest.raises(ValueError):
        open_input("synth:plaid:4x4")


def test_gray_image_rejects_out_of_range():
    with pytest.raises(ValueError):
        GrayImage(np.array([[256]]))
    with pytest.raises(EmptyImageError):
        GrayImage(np.zeros((0, 3), dtype=np.uint8))
