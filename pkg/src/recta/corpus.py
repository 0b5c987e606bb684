"""Shared-text handling: normalization, key-text extraction, condensation.

Both ends of a conversation must resolve the same offset to the same
letters, so offsets always address the normalized A-Z stream, never raw
bytes. Normalization folds Latin accents (E acute -> E and so on) and
drops everything that is not a letter, digits included.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from importlib import resources

from .alphabet import letter_value, value_letter
from .errors import InvalidInputError, RangeError

BUNDLED = ("oliver", "english")


def normalize_text(raw: str) -> str:
    """Uppercase A-Z only; accents folded, all other characters dropped."""
    folded = unicodedata.normalize("NFKD", raw)
    out = []
    for ch in folded.upper():
        if "A" <= ch <= "Z":
            out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class CorpusSource:
    """A text source normalized once at load time."""

    identifier: str
    content: str

    @classmethod
    def from_text(cls, raw: str, identifier: str = "<inline>") -> "CorpusSource":
        return cls(identifier=identifier, content=normalize_text(raw))

    @classmethod
    def from_file(cls, path) -> "CorpusSource":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read(), identifier=str(path))

    @classmethod
    def bundled(cls, name: str) -> "CorpusSource":
        """One of the corpora shipped with the package (oliver, english)."""
        if name not in BUNDLED:
            raise InvalidInputError(
                f"unknown bundled corpus {name!r}; choices: {', '.join(BUNDLED)}"
            )
        raw = resources.files("recta.data").joinpath(f"{name}.txt").read_text("utf-8")
        return cls.from_text(raw, identifier=f"bundled:{name}")

    @classmethod
    def resolve(cls, spec: str) -> "CorpusSource":
        """`bundled:<name>` or a file path."""
        if spec.startswith("bundled:"):
            return cls.bundled(spec.split(":", 1)[1])
        return cls.from_file(spec)

    def __len__(self) -> int:
        return len(self.content)


def extract_key_text(corpus: CorpusSource, offset: int, length: int) -> str:
    """Contiguous normalized slice, with explicit bounds checking."""
    if offset < 0 or length < 0:
        raise RangeError("offset and length must be non-negative")
    if offset + length > len(corpus):
        raise RangeError(
            f"need {length} letters at offset {offset} but corpus "
            f"{corpus.identifier!r} holds only {len(corpus)}"
        )
    return corpus.content[offset : offset + length]


def condense_text(text: str, parts: int) -> str:
    """Concentrate entropy by summing contiguous rows of text, mod 26.

    The text is cut into `parts` rows of equal length (truncating the
    tail, never padding) and the rows are added column by column. Three
    rows of ordinary prose are enough to make the sums look random.
    """
    if parts < 2:
        raise InvalidInputError("condense_text needs at least 2 parts")
    width = len(text) // parts
    out = []
    for i in range(width):
        total = 0
        for r in range(parts):
            total += letter_value(text[r * width + i])
        out.append(value_letter(total))
    return "".join(out)


def sum_rows(rows: list[str]) -> str:
    """Column-wise mod-26 sum of equal-length rows."""
    if not rows:
        raise InvalidInputError("need at least one row")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise InvalidInputError("rows must have equal length")
    out = []
    for i in range(width):
        total = 0
        for r in rows:
            total += letter_value(r[i])
        out.append(value_letter(total))
    return "".join(out)
