import numpy as np
import pytest

from recta.alphabet import ALPHABET, Alphabet, derive_keyed_alphabet
from recta.ciphers import FibonaKeys, PolyKeys
from recta.corpus import CorpusSource


@pytest.fixture(scope="session")
def oliver():
    return CorpusSource.bundled("oliver")


@pytest.fixture(scope="session")
def english():
    return CorpusSource.bundled("english")


@pytest.fixture(scope="session")
def headers():
    """The three keyword-derived header alphabets of the worked example."""
    return (
        derive_keyed_alphabet("WONDERFUL"),
        derive_keyed_alphabet("MARVELOUS"),
        derive_keyed_alphabet("AWESOME"),
    )


@pytest.fixture(scope="session")
def poly_keys(headers):
    a1, a2, a3 = headers
    return PolyKeys(top=a1, side=a2, bottom=a3, mask="TERRIFIC", window=3)


def random_alphabet(rng) -> Alphabet:
    return Alphabet("".join(ALPHABET[i] for i in rng.permutation(26)))


def random_letters(rng, n: int) -> str:
    return "".join(ALPHABET[i] for i in rng.integers(0, 26, n))


def random_fibona_keys(rng, seed_len=None) -> FibonaKeys:
    n = seed_len or int(rng.integers(2, 16))
    return FibonaKeys(
        top=random_alphabet(rng), side=random_alphabet(rng), seed=random_letters(rng, n)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
