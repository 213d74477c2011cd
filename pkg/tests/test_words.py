from sturmlab.words import WordStream, as_bytes, as_factor
from sturmlab.exceptions import PrecisionError
from sturmlab.sturmian import fibonacci_word, random_word

from concurrent.futures import ThreadPoolExecutor
import numpy as np
import tempfile
import os
import pytest


def test_finite_word():
    word = WordStream(3, [0, 1, 2, 2])
    assert word.is_finite
    assert len(word) == 4
    assert word.symbols(3) == (0, 1, 2)
    assert word[3] == 2
    assert list(word) == [0, 1, 2, 2]


def test_lazy_word_extends_on_demand():
    word = fibonacci_word()
    assert not word.is_finite
    assert len(word) <= 2
    assert word.prefix(8) == bytes([0, 1, 0, 0, 1, 0, 1, 0])
    assert len(word) >= 8
    assert word[12] == 1


def test_prefix_is_stable_under_extension():
    word = random_word(4, seed=11)
    head = word.prefix(100)
    word.extend_to(5000)
    assert word.prefix(100) == head


def test_exhausted_generator():
    word = WordStream(2, generator=iter([0, 1, 1]), name="short")
    assert word.prefix(2) == bytes([0, 1])
    with pytest.raises(PrecisionError):
        word.prefix(5)
    assert word.is_finite
    assert word.extend_to(10) == 3


@pytest.mark.parametrize("alphabet_size", [1, 0, 257])
def test_bad_alphabet_size(alphabet_size):
    with pytest.raises(ValueError):
        WordStream(alphabet_size)


def test_alphabet_size_type():
    with pytest.raises(TypeError):
        WordStream(2.0)


def test_symbol_outside_alphabet():
    with pytest.raises(ValueError):
        WordStream(2, [0, 1, 2])


def test_negative_index_and_length():
    word = WordStream(2, [0, 1])
    with pytest.raises(IndexError):
        word[-1]
    with pytest.raises(ValueError):
        word.prefix(-1)


def test_digit_strings():
    word = WordStream.from_digit_string("0a19\n", 11)
    assert word.symbols(4) == (0, 10, 1, 9)
    assert word.to_digit_string(4) == "0a19"
    with pytest.raises(ValueError):
        WordStream.from_digit_string("01?", 2)
    with pytest.raises(ValueError):
        WordStream(200, [0, 1]).to_digit_string(2)


def test_save_and_load():
    word = random_word(5, seed=3)
    wide = random_word(200, seed=3)
    with tempfile.TemporaryDirectory() as temp_dir:
        digits_file = os.path.join(temp_dir, "digits.txt")
        bytes_file = os.path.join(temp_dir, "digits.bin")
        word.save_digits(digits_file, 500)
        wide.save_bytes(bytes_file, 500)
        loaded_digits = WordStream.load_digits(digits_file, 5)
        loaded_bytes = WordStream.load_bytes(bytes_file, 200)
    assert loaded_digits.prefix(500) == word.prefix(500)
    assert loaded_bytes.prefix(500) == wide.prefix(500)
    assert loaded_digits.is_finite and len(loaded_digits) == 500


def test_freeze():
    word = fibonacci_word()
    frozen = word.freeze(50)
    assert frozen.is_finite
    assert frozen.prefix(50) == word.prefix(50)
    with pytest.raises(PrecisionError):
        frozen.prefix(51)


def test_concurrent_extension():
    """several threads extending the same word see the same symbols"""
    word = random_word(3, seed=7)
    lengths = np.random.default_rng(0).integers(100, 20000, size=16)
    with ThreadPoolExecutor(max_workers=4) as pool:
        prefixes = list(pool.map(word.prefix, [int(x) for x in lengths]))
    reference = random_word(3, seed=7).prefix(20000)
    for length, prefix in zip(lengths, prefixes):
        assert prefix == reference[:length]


@pytest.mark.parametrize(
    "word, expected",
    [
        ("0102", (0, 1, 0, 2)),
        ("AB", (10, 11)),
        (b"\x01\x00", (1, 0)),
        ([3, 2, 1], (3, 2, 1)),
        ((), ()),
    ]
)
def test_as_factor(word, expected):
    assert as_factor(word) == expected
    assert as_bytes(word) == bytes(expected)
