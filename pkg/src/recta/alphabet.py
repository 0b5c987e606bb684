"""Mod-26 letter arithmetic on a tabula recta, with scrambled-header support.

A tabula recta is a 26x26 grid whose row r, column c holds letter
(r + c) mod 26. Adding and subtracting letters is a matter of looking up
operands on the headers and reading a result off the grid. Replacing the
plain headers with scrambled alphabets makes every lookup perform a
substitution for free; the multi-operand "serpentine" walk generalizes
two-operand addition to alternating sums.

Everything here is pure and immutable; the grid-walk simulator
(`TabulaWalk`) reproduces results by literally scanning the grid, which
makes it both the animation backend and an independent cross-check of the
arithmetic forms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InvalidInputError

ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
A_ORD = ord("A")


def letter_value(ch: str) -> int:
    """A=0 ... Z=25."""
    v = ord(ch) - A_ORD
    if not 0 <= v <= 25:
        raise InvalidInputError(f"not an uppercase letter: {ch!r}")
    return v


def value_letter(v: int) -> str:
    return ALPHABET[v % 26]


def tabula_add(a: str, b: str) -> str:
    """Grid lookup of a at the left and b at the top: (a + b) mod 26."""
    return value_letter(letter_value(a) + letter_value(b))


def tabula_sub(minuend: str, subtrahend: str) -> str:
    """Find the minuend in the subtrahend's column; read the left header."""
    return value_letter(letter_value(minuend) - letter_value(subtrahend))


@dataclass(frozen=True)
class Alphabet:
    """A permutation of the 26 letters with O(1) forward and inverse lookup."""

    order: str
    _inverse: dict = field(init=False, repr=False, hash=False, compare=False)

    def __post_init__(self):
        if sorted(self.order) != list(ALPHABET):
            raise InvalidInputError(
                f"not a permutation of A-Z: {self.order!r}"
            )
        object.__setattr__(
            self, "_inverse", {ch: i for i, ch in enumerate(self.order)}
        )

    def __getitem__(self, index: int) -> str:
        return self.order[index % 26]

    def index(self, ch: str) -> int:
        try:
            return self._inverse[ch]
        except KeyError:
            raise InvalidInputError(f"not an uppercase letter: {ch!r}") from None

    def __str__(self) -> str:
        return self.order

    @property
    def is_identity(self) -> bool:
        return self.order == ALPHABET


IDENTITY = Alphabet(ALPHABET)


def derive_keyed_alphabet(keyword: str) -> Alphabet:
    """Scrambled alphabet from a keyword.

    Keyword letters are written in order; a repeated letter is replaced by
    the nearest earlier letter of the alphabet not yet written (stepping
    B->A->Z->Y... and wrapping past A). The rest of the alphabet is then
    appended in reverse order.
    """
    if not keyword:
        raise InvalidInputError("keyword must not be empty")
    written: list[str] = []
    seen = set()
    for ch in keyword:
        if ch not in seen:
            written.append(ch)
            seen.add(ch)
            continue
        v = (letter_value(ch) - 1) % 26
        while ALPHABET[v] in seen:
            v = (v - 1) % 26
        written.append(ALPHABET[v])
        seen.add(ALPHABET[v])
    for ch in reversed(ALPHABET):
        if ch not in seen:
            written.append(ch)
    return Alphabet("".join(written))


def parse_alphabet(text: str) -> Alphabet:
    """26-letter permutation, or `key:WORD` to derive one from a keyword."""
    text = text.strip().upper()
    if text.startswith("KEY:"):
        return derive_keyed_alphabet(text[4:].strip())
    return Alphabet(text)


@dataclass(frozen=True)
class TabulaConfig:
    """Header assignment for a tabula. Identity everywhere = the classic grid."""

    top: Alphabet = IDENTITY
    left: Alphabet = IDENTITY
    bottom_right: Alphabet = IDENTITY


@dataclass(frozen=True)
class SerpentineSpec:
    """A multi-operand walk: substitution on the first input and on the result."""

    inputs: str
    input_alphabet: Alphabet = IDENTITY
    output_alphabet: Alphabet = IDENTITY

    def __post_init__(self):
        if len(self.inputs) < 1:
            raise InvalidInputError("serpentine needs at least one input")


def serpentine(spec: SerpentineSpec) -> str:
    """Alternating sum with the last input always positive.

    The first input enters through the input alphabet (its header position
    is what counts); later inputs enter at face value; the result is read
    through the output alphabet. n=2 gives v2-v1, n=3 gives v3-v2+v1, and
    so on -- exactly what the physical walk produces, including the
    "repeated letter means no motion" rule, which the arithmetic realizes
    as a zero-length move.
    """
    inputs = spec.inputs
    n = len(inputs)
    sign = (-1) ** (n - 1)
    total = sign * spec.input_alphabet.index(inputs[0])
    for j in range(1, n):
        total += (-1) ** (n - 1 - j) * letter_value(inputs[j])
    return spec.output_alphabet[total % 26]


def combine(p: str, k: str, top: Alphabet = IDENTITY, side: Alphabet = IDENTITY) -> str:
    """Look p up on the top header, go down to k in the grid, read the side header."""
    return side[(letter_value(k) - top.index(p)) % 26]


def uncombine(c: str, k: str, top: Alphabet = IDENTITY, side: Alphabet = IDENTITY) -> str:
    """Inverse of combine: look c up on the side, go right to k, read the top."""
    return top[(letter_value(k) - side.index(c)) % 26]


class TabulaWalk:
    """Literal 26x26 grid walker.

    Stores the grid as an explicit table and finds letters by scanning,
    the way a finger moves over the printed page. Used by the trace API
    for animation and by the test suite as the brute-force oracle for the
    arithmetic forms above.
    """

    def __init__(self, config: TabulaConfig = TabulaConfig()):
        self.config = config
        self.grid = [
            [value_letter(r + c) for c in range(26)] for r in range(26)
        ]

    def _find_in_column(self, col: int, target: str) -> int:
        for r in range(26):
            if self.grid[r][col] == target:
                return r
        raise InvalidInputError(f"letter {target!r} not in column")

    def _find_in_row(self, row: int, target: str) -> int:
        for c in range(26):
            if self.grid[row][c] == target:
                return c
        raise InvalidInputError(f"letter {target!r} not in row")

    def serpentine_trace(
        self,
        inputs: str,
        input_alphabet: Alphabet = IDENTITY,
        output_alphabet: Alphabet = IDENTITY,
        entry: str = "top",
    ) -> dict:
        """Walk the grid through `inputs` and report every stop.

        Entry at the top header means the walk alternates down/across
        starting in the first input's column; entry at the left starts
        across in its row. The result is read from the header
        perpendicular to the last motion, through the output alphabet.
        Stops are reported as dicts with grid coordinates (row/col of -1
        marks a header cell).
        """
        if entry not in ("top", "left"):
            raise InvalidInputError(f"entry must be 'top' or 'left', got {entry!r}")
        stops = []
        vertical = entry == "top"  # direction of the *next* motion
        if vertical:
            col = input_alphabet.index(inputs[0])
            row = -1
            stops.append({"row": -1, "col": col, "letter": inputs[0], "edge": "top"})
        else:
            row = input_alphabet.index(inputs[0])
            col = -1
            stops.append({"row": row, "col": -1, "letter": inputs[0], "edge": "left"})
        for target in inputs[1:]:
            if vertical:
                row = self._find_in_column(col, target)
            else:
                col = self._find_in_row(row, target)
            stops.append({"row": row, "col": col, "letter": target, "edge": None})
            vertical = not vertical
        # Single-operand walk: the result is the entry position itself,
        # read through the output alphabet on the opposite edge.
        if len(inputs) == 1:
            pos = col if entry == "top" else row
            edge = "bottom" if entry == "top" else "right"
        elif vertical:
            # Last motion was horizontal: read the column header.
            pos = col
            edge = "bottom"
        else:
            pos = row
            edge = "left" if entry == "top" else "right"
        result = output_alphabet[pos]
        stops.append(
            {
                "row": pos if edge in ("left", "right") else -1,
                "col": pos if edge in ("top", "bottom") else -1,
                "letter": result,
                "edge": edge,
            }
        )
        return {"result": result, "stops": stops}

    def serpentine(
        self,
        inputs: str,
        input_alphabet: Alphabet = IDENTITY,
        output_alphabet: Alphabet = IDENTITY,
        entry: str = "top",
    ) -> str:
        return self.serpentine_trace(inputs, input_alphabet, output_alphabet, entry)[
            "result"
        ]

    def combine(self, p: str, k: str, top: Alphabet, side: Alphabet) -> str:
        """p at the top header, down to k, left to the side header."""
        col = top.index(p)
        row = self._find_in_column(col, k)
        return side[row]

    def uncombine(self, c: str, k: str, top: Alphabet, side: Alphabet) -> str:
        """c at the side header, right to k, up to the top header."""
        row = side.index(c)
        col = self._find_in_row(row, k)
        return top[col]

    def rendered(self) -> dict:
        """Grid plus configured headers, for display."""
        return {
            "top": list(self.config.top.order),
            "left": list(self.config.left.order),
            "bottom_right": list(self.config.bottom_right.order),
            "grid": [list(row) for row in self.grid],
        }
