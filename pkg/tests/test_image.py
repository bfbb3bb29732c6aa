"""Image coercion, dynamic range, even-extension, and the PGM codec."""

import numpy as np
import pytest

from lrfuse.image import (
    PgmError,
    as_image,
    crop,
    extend_to_even,
    load_pgm,
    quantize,
    read_pgm,
    save_pgm,
    write_pgm,
)
from lrfuse.rng import RandomStream
from lrfuse.synth import synthetic_test_image


def test_as_image_accepts_lists_and_rejects_bad_input():
    img = as_image([[1, 2], [3, 4]])
    assert img.dtype == np.float64 and img.shape == (2, 2)
    with pytest.raises(ValueError):
        as_image(np.zeros(5))
    with pytest.raises(ValueError):
        as_image(np.zeros((2, 2, 2)))
    with pytest.raises(ValueError):
        as_image(np.array([[np.nan, 0.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        as_image(np.array([[np.inf, 0.0], [0.0, 0.0]]))


def test_quantize_clamps_and_is_idempotent():
    img = np.array([[-5.0, 0.0], [123.4, 300.0]])
    q = quantize(img)
    assert np.array_equal(q, [[0.0, 0.0], [123.4, 255.0]])
    assert np.array_equal(quantize(q), q)


def test_extend_to_even_replicates_last_line():
    img = np.arange(15.0).reshape(3, 5)
    out, dims = extend_to_even(img)
    assert dims == (3, 5)
    assert out.shape == (4, 6)
    assert np.array_equal(out[3], out[2])
    assert np.array_equal(out[:, 5], out[:, 4])
    assert np.array_equal(crop(out, dims), img)

    even = np.zeros((4, 6))
    same, dims = extend_to_even(even)
    assert same.shape == (4, 6) and dims == (4, 6)


def test_crop_validates_dimensions():
    img = np.zeros((4, 4))
    with pytest.raises(ValueError):
        crop(img, (5, 4))
    with pytest.raises(ValueError):
        crop(img, (0, 4))


def test_pgm_binary_round_trip_is_exact():
    for seed in range(5):
        img = np.floor(RandomStream(seed).uniform((17, 23)) * 256.0)
        img = np.clip(img, 0.0, 255.0)
        assert np.array_equal(load_pgm(save_pgm(img)), img)


def test_pgm_save_rounds_half_away_from_zero_and_clamps():
    img = np.array([[0.5, 1.49], [254.5, -3.0]])
    assert np.array_equal(load_pgm(save_pgm(img)), [[1.0, 1.0], [255.0, 0.0]])


def test_pgm_header_layout():
    data = save_pgm(np.zeros((2, 3)))
    assert data.startswith(b"P5\n3 2\n255\n")
    assert len(data) == len(b"P5\n3 2\n255\n") + 6


def test_pgm_ascii_matches_binary():
    ascii_pgm = b"P2\n# a comment\n3 2\n255\n0 10 20\n30 40 255\n"
    img = load_pgm(ascii_pgm)
    assert np.array_equal(img, [[0, 10, 20], [30, 40, 255]])
    assert np.array_equal(load_pgm(save_pgm(img)), img)


def test_pgm_comments_anywhere_in_header():
    data = b"P5 #c\n#c\n2 #width done\n1\n255\n" + bytes([7, 9])
    assert np.array_equal(load_pgm(data), [[7, 9]])


def test_pgm_rejects_malformed_input():
    good = save_pgm(np.zeros((4, 4)))
    with pytest.raises(PgmError):
        load_pgm(b"P6\n2 2\n255\n" + bytes(4))  # wrong magic
    with pytest.raises(PgmError):
        load_pgm(good[:-1])  # truncated payload
    with pytest.raises(PgmError):
        load_pgm(b"P5\n2 2\n65535\n" + bytes(8))  # 16-bit maxval unsupported
    with pytest.raises(PgmError):
        load_pgm(b"P5\n2 two\n255\n" + bytes(4))  # malformed height
    with pytest.raises(PgmError):
        load_pgm(b"P2\n2 2\n100\n0 0 0 101\n")  # sample above maxval
    with pytest.raises(PgmError):
        load_pgm(b"P2\n2 2\n255\n0 0 0\n")  # not enough samples
    with pytest.raises(TypeError):
        load_pgm("P5 not bytes")


def test_file_round_trip(tmp_path):
    path = tmp_path / "scene.pgm"
    img = synthetic_test_image()
    write_pgm(path, img)
    assert np.array_equal(read_pgm(path), img)


def test_synthetic_image_shape_and_range():
    img = synthetic_test_image()
    assert img.shape == (256, 256)
    assert img.min() >= 0.0 and img.max() <= 255.0
    assert np.array_equal(img, np.round(img))
    # ten-component scene: a large spectral gap after the tenth value
    sv = np.linalg.svd(img, compute_uv=False)
    assert sv[9] > 50.0 * sv[10]
