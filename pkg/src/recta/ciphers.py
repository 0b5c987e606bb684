"""The four pencil-and-paper schemes, as pure transformations.

tripletext/snake draw a running key three times the plaintext length from
a shared corpus; fibonarng stretches a short seed into a keystream with a
lagged-Fibonacci rule routed through two scrambled alphabets; polycrypt
adds a third alphabet, a masked per-message random seed, and a sliding
serpentine window. Keyed columnar transposition and the plaintext cut
("russian copulation") round out the kit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .alphabet import (
    Alphabet,
    SerpentineSpec,
    combine,
    letter_value,
    serpentine,
    uncombine,
    value_letter,
)
from .corpus import CorpusSource, extract_key_text
from .errors import InvalidInputError


@dataclass(frozen=True)
class CipherMessage:
    """Ciphertext plus whatever the recipient needs to locate key material.

    Corpus-keyed schemes carry the offset where key text starts; polycrypt
    embeds its masked random seed as the first `masked_seed_len` letters
    of the ciphertext; fibonarng needs neither.
    """

    scheme: str
    ciphertext: str
    offset: Optional[int] = None
    masked_seed_len: Optional[int] = None

    def __post_init__(self):
        if self.offset is not None and self.masked_seed_len is not None:
            raise InvalidInputError("a message carries an offset or a masked seed, not both")
        if self.masked_seed_len is not None and self.masked_seed_len >= len(self.ciphertext):
            raise InvalidInputError("masked seed cannot fill the whole ciphertext")

    def to_dict(self) -> dict:
        d = {"scheme": self.scheme, "ciphertext": self.ciphertext}
        if self.offset is not None:
            d["offset"] = self.offset
        if self.masked_seed_len is not None:
            d["masked_seed_len"] = self.masked_seed_len
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CipherMessage":
        return cls(
            scheme=d["scheme"],
            ciphertext=d["ciphertext"],
            offset=d.get("offset"),
            masked_seed_len=d.get("masked_seed_len"),
        )


@dataclass(frozen=True)
class FibonaKeys:
    """Two scrambled alphabets and the seed of the keystream generator."""

    top: Alphabet
    side: Alphabet
    seed: str

    def __post_init__(self):
        if len(self.seed) < 2:
            raise InvalidInputError("seed must be at least 2 letters")


@dataclass(frozen=True)
class PolyKeys:
    """Three scrambled alphabets, a seed mask, and the serpentine window size."""

    top: Alphabet
    side: Alphabet
    bottom: Alphabet
    mask: str
    window: int = 3

    def __post_init__(self):
        if self.window < 0:
            raise InvalidInputError("window must be non-negative")
        if len(self.mask) < self.window:
            raise InvalidInputError("mask must be at least as long as the window")


# ---------------------------------------------------------------------------
# Corpus-keyed schemes


def _key_rows(corpus: CorpusSource, offset: int, width: int) -> tuple[str, str, str]:
    slice_ = extract_key_text(corpus, offset, 3 * width)
    return slice_[:width], slice_[width : 2 * width], slice_[2 * width :]


def triple_text_encrypt(
    plaintext: str, corpus: CorpusSource, offset: int, add_mode: bool = False
) -> CipherMessage:
    """Column sums of three key rows against the plaintext.

    Canonical form is C = K1+K2+K3-P, which makes the cipher an
    involution (the recipient repeats the exact same table work).
    `add_mode` is the C = K1+K2+K3+P compatibility variant.
    """
    k1, k2, k3 = _key_rows(corpus, offset, len(plaintext))
    sign = 1 if add_mode else -1
    out = []
    for p, a, b, c in zip(plaintext, k1, k2, k3):
        keysum = letter_value(a) + letter_value(b) + letter_value(c)
        out.append(value_letter(keysum + sign * letter_value(p)))
    return CipherMessage(scheme="tripletext", ciphertext="".join(out), offset=offset)


def triple_text_decrypt(
    msg: CipherMessage, corpus: CorpusSource, add_mode: bool = False
) -> str:
    k1, k2, k3 = _key_rows(corpus, msg.offset, len(msg.ciphertext))
    out = []
    for c, a, b, k in zip(msg.ciphertext, k1, k2, k3):
        keysum = letter_value(a) + letter_value(b) + letter_value(k)
        if add_mode:
            out.append(value_letter(letter_value(c) - keysum))
        else:
            out.append(value_letter(keysum - letter_value(c)))
    return "".join(out)


def snake_encrypt(plaintext: str, corpus: CorpusSource, offset: int) -> CipherMessage:
    """Serpentine walk down each column: C = -P+K1-K2+K3 per column."""
    k1, k2, k3 = _key_rows(corpus, offset, len(plaintext))
    out = [
        serpentine(SerpentineSpec(p + a + b + c))
        for p, a, b, c in zip(plaintext, k1, k2, k3)
    ]
    return CipherMessage(scheme="snake", ciphertext="".join(out), offset=offset)


def snake_decrypt(msg: CipherMessage, corpus: CorpusSource) -> str:
    """The identical walk starting from the ciphertext recovers the plaintext."""
    return snake_encrypt(msg.ciphertext, corpus, msg.offset).ciphertext


# ---------------------------------------------------------------------------
# FibonaRNG


def fibonarng_keystream(keys: FibonaKeys, length: int) -> str:
    """Self-extending keystream: each letter combines the previous two.

    The working string starts as the seed and grows with every output
    letter; the two-letter window slides forward one position at a time,
    so letter j depends on letters j-L and j-L+1 back, L the seed length.
    """
    if length < 0:
        raise InvalidInputError("length must be non-negative")
    s = list(keys.seed)
    out = []
    for i in range(length):
        nxt = combine(s[i], s[i + 1], keys.top, keys.side)
        out.append(nxt)
        s.append(nxt)
    return "".join(out)


def fibonarng_encrypt(plaintext: str, keys: FibonaKeys) -> CipherMessage:
    ks = fibonarng_keystream(keys, len(plaintext))
    ct = "".join(combine(p, k, keys.top, keys.side) for p, k in zip(plaintext, ks))
    return CipherMessage(scheme="fibonarng", ciphertext=ct)


def fibonarng_decrypt(msg: CipherMessage, keys: FibonaKeys) -> str:
    ks = fibonarng_keystream(keys, len(msg.ciphertext))
    return "".join(
        uncombine(c, k, keys.top, keys.side) for c, k in zip(msg.ciphertext, ks)
    )


# ---------------------------------------------------------------------------
# PolyCrypt


def polycrypt_keystream(keys: PolyKeys, seed: str, length: int) -> str:
    """Window-n serpentine over the growing seed-plus-keystream string.

    window=2 degenerates to the fibonarng rule with the bottom alphabet on
    output; window=1 substitutes one letter at a time; window=0 pins the
    keystream to 'A', leaving only the substitutions active.
    """
    if keys.window == 0:
        return "A" * length
    if len(seed) < keys.window:
        raise InvalidInputError("seed shorter than the serpentine window")
    s = list(seed)
    out = []
    n = keys.window
    for i in range(length):
        window = "".join(s[i : i + n])
        nxt = serpentine(SerpentineSpec(window, keys.top, keys.bottom))
        out.append(nxt)
        s.append(nxt)
    return "".join(out)


def polycrypt_encrypt(plaintext: str, keys: PolyKeys, seed: str) -> CipherMessage:
    """Mask the seed, stretch it into a keystream, combine column by column.

    The transmitted ciphertext is one string: the masked seed first, then
    the encrypted plaintext.
    """
    if len(seed) != len(keys.mask):
        raise InvalidInputError(
            f"seed length {len(seed)} must equal mask length {len(keys.mask)}"
        )
    ks = polycrypt_keystream(keys, seed, len(plaintext))
    row1 = seed + plaintext
    row2 = keys.mask + ks
    ct = "".join(combine(p, k, keys.top, keys.side) for p, k in zip(row1, row2))
    return CipherMessage(
        scheme="polycrypt", ciphertext=ct, masked_seed_len=len(keys.mask)
    )


def polycrypt_decrypt(msg: CipherMessage, keys: PolyKeys) -> tuple[str, str]:
    """Unmask the seed, regenerate the keystream, recover the plaintext.

    Returns (seed, plaintext).
    """
    m = len(keys.mask)
    if msg.masked_seed_len is not None and msg.masked_seed_len != m:
        raise InvalidInputError(
            f"message says masked seed is {msg.masked_seed_len} letters, keys say {m}"
        )
    if len(msg.ciphertext) <= m:
        raise InvalidInputError("ciphertext too short to hold the masked seed")
    seed = "".join(
        uncombine(c, k, keys.top, keys.side)
        for c, k in zip(msg.ciphertext[:m], keys.mask)
    )
    ks = polycrypt_keystream(keys, seed, len(msg.ciphertext) - m)
    plain = "".join(
        uncombine(c, k, keys.top, keys.side)
        for c, k in zip(msg.ciphertext[m:], ks)
    )
    return seed, plain


# ---------------------------------------------------------------------------
# Transposition and plaintext processing


def _column_order(word: str) -> list[int]:
    """Columns in reading order: alphabetical rank, ties left to right."""
    return [i for i, _ in sorted(enumerate(word), key=lambda t: (t[1], t[0]))]


def columnar_transpose(text: str, word: str) -> str:
    """Write under the key by rows (last row may be short), read by ranked columns."""
    if len(word) < 2:
        raise InvalidInputError("transposition key must be at least 2 letters")
    w = len(word)
    cols = {c: [] for c in range(w)}
    for i, ch in enumerate(text):
        cols[i % w].append(ch)
    return "".join("".join(cols[c]) for c in _column_order(word))


def columnar_untranspose(text: str, word: str) -> str:
    if len(word) < 2:
        raise InvalidInputError("transposition key must be at least 2 letters")
    w = len(word)
    n = len(text)
    base, extra = divmod(n, w)
    heights = [base + (1 if c < extra else 0) for c in range(w)]
    cols: dict[int, str] = {}
    pos = 0
    for c in _column_order(word):
        cols[c] = text[pos : pos + heights[c]]
        pos += heights[c]
    out = []
    for r in range(base + (1 if extra else 0)):
        for c in range(w):
            if r < heights[c]:
                out.append(cols[c][r])
    return "".join(out)


def russian_copulation(text: str, cut: int, marker: str = "") -> str:
    """Cut the text like a deck of cards and swap the halves."""
    if not 0 <= cut <= len(text):
        raise InvalidInputError(f"cut {cut} outside [0, {len(text)}]")
    return text[cut:] + marker + text[:cut]


def russian_uncopulation(text: str, cut: int, marker: str = "") -> str:
    """Undo the cut, verifying the marker where one was inserted."""
    n = len(text) - len(marker)
    if not 0 <= cut <= n:
        raise InvalidInputError(f"cut {cut} outside [0, {n}]")
    front, mid, back = text[: n - cut], text[n - cut : n - cut + len(marker)], text[n - cut + len(marker) :]
    if mid != marker:
        raise InvalidInputError(f"expected marker {marker!r} at the cut, found {mid!r}")
    return back + front
