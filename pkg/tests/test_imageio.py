import numpy as np
import pytest
from PIL import Image

from fastsobel.errors import CorruptFile, UnsupportedExtension, UnsupportedFormat
from fastsobel.imageio import load_gray, luma, pad_replicate, save_plane, write_gray, write_pgm


def test_p5(tmp_path):
    path = tmp_path / "a.pgm"
    path.write_bytes(b"P5\n# comment\n2 2\n255\n" + bytes([0, 255, 128, 64]))
    assert load_gray(path).tolist() == [[0, 255], [128, 64]]


def test_p2(tmp_path):
    path = tmp_path / "a.pgm"
    path.write_text("P2\n3 1\n255\n1 2 # note\n3\n")
    assert load_gray(path).tolist() == [[1, 2, 3]]


@pytest.mark.parametrize("plain", [False, True])
def test_pgm_round_trip(tmp_path, plain):
    img = np.random.default_rng(1).integers(0, 256, (7, 11), dtype=np.uint8)
    write_pgm(tmp_path / "x.pgm", img, plain=plain)
    np.testing.assert_array_equal(load_gray(tmp_path / "x.pgm"), img)


def test_pgm_16_bit_rejected(tmp_path):
    path = tmp_path / "deep.pgm"
    path.write_bytes(b"P5 1 1 65535\n\x00\x01")
    with pytest.raises(UnsupportedFormat, match="bit depth"):
        load_gray(path)


def test_truncated_pgm(tmp_path):
    path = tmp_path / "short.pgm"
    path.write_bytes(b"P5 4 4 255\n\x00\x01")
    with pytest.raises(CorruptFile):
        load_gray(path)


def test_png_gray(tmp_path):
    Image.fromarray(np.full((2, 3), 200, np.uint8)).save(tmp_path / "g.png")
    assert load_gray(tmp_path / "g.png").tolist() == [[200] * 3] * 2


def test_png_red(tmp_path):
    rgb = np.zeros((1, 1, 3), np.uint8)
    rgb[..., 0] = 255
    Image.fromarray(rgb).save(tmp_path / "r.png")
    # (77 * 255 + 128) >> 8
    assert load_gray(tmp_path / "r.png").tolist() == [[77]]


def test_luma_white():
    assert luma(np.full((1, 1, 3), 255, np.uint8)).item() == 255


def test_png_16_bit_rejected(tmp_path):
    Image.fromarray(np.full((2, 2), 1000, np.uint16)).save(tmp_path / "d.png")
    with pytest.raises(UnsupportedFormat):
        load_gray(tmp_path / "d.png")


def test_unknown_file(tmp_path):
    (tmp_path / "x.bmp").write_bytes(b"BM....")
    with pytest.raises(UnsupportedFormat):
        load_gray(tmp_path / "x.bmp")


def test_pad_single_pixel():
    padded = pad_replicate(np.array([[5]], np.uint8), 2)
    assert padded.plane.tolist() == [[5] * 5] * 5


def test_pad_interior():
    img = np.random.default_rng(3).integers(0, 256, (6, 9), dtype=np.uint8)
    padded = pad_replicate(img, 2)
    np.testing.assert_array_equal(padded.plane[2:-2, 2:-2], img)
    np.testing.assert_array_equal(padded.plane[0, 2:-2], img[0])
    assert np.asarray(padded).shape == (10, 13)


@pytest.mark.parametrize("mode", ["clamp_abs", "normalize"])
def test_save_zero_plane(tmp_path, mode):
    save_plane(np.zeros((3, 3), np.int32), tmp_path / "z.png", mode)
    assert not load_gray(tmp_path / "z.png").any()


def test_save_normalize(tmp_path):
    save_plane(np.array([[0.0, 510.0]]), tmp_path / "n.pgm", "normalize")
    assert load_gray(tmp_path / "n.pgm").tolist() == [[0, 255]]


def test_save_clamp(tmp_path):
    save_plane(np.array([[-300, -7]], np.int32), tmp_path / "c.png", "clamp_abs")
    assert load_gray(tmp_path / "c.png").tolist() == [[255, 7]]


def test_save_bad_extension(tmp_path):
    with pytest.raises(UnsupportedExtension):
        save_plane(np.zeros((2, 2)), tmp_path / "x.jpg")
    with pytest.raises(UnsupportedExtension):
        write_gray(tmp_path / "x.tif", np.zeros((2, 2), np.uint8))
