import pytest

from fastsobel.synth import parse_size, random_image, splitmix64


def test_splitmix_reference():
    assert int(splitmix64(1234567, 1)[0]) == 0x599ED017FB08FC85


def test_random_image_deterministic():
    a = random_image(17, 9, 5)
    assert a.shape == (9, 17)
    assert (a == random_image(17, 9, 5)).all()
    assert not (a == random_image(17, 9, 6)).all()


def test_parse_size():
    assert parse_size("64x32") == (64, 32)
    assert parse_size("64") == (64, 64)
    for bad in ("0x4", "4x5x6", "ax3"):
        with pytest.raises(ValueError):
            parse_size(bad)
