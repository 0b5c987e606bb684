"""Challenge-to-password generation and the known-plaintext key solver.

Two schemes. The digit scheme maps the challenge through a secret
letter-to-digit table, then chains mod-10 additions through a secret
digit permutation. The letter scheme does the equivalent chaining on a
tabula whose top and side headers are secret scrambled alphabets, so the
whole key lives on one printed card.

The solver turns captured challenge/password pairs into linear equations
over Z26 and recovers the alphabets up to a one-parameter shift family
that provably generates identical passwords, so the family as a whole is
the right recovery target.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .alphabet import ALPHABET, Alphabet, combine, letter_value
from .errors import InvalidInputError
from .modlinalg import Mod26Solution, Mod26System

DIGITS = "0123456789"


@dataclass(frozen=True)
class BlumKey:
    """Letter-to-digit mapping (26 digits, indexed A..Z) and a digit permutation."""

    mapping: str
    permutation: str

    def __post_init__(self):
        if len(self.mapping) != 26 or any(c not in DIGITS for c in self.mapping):
            raise InvalidInputError("mapping must be 26 digits indexed by A..Z")
        if sorted(self.permutation) != list(DIGITS):
            raise InvalidInputError("permutation must use each digit 0-9 once")

    def digit(self, ch: str) -> int:
        return int(self.mapping[letter_value(ch)])


def blum_digits(challenge_digits: str, permutation: str) -> str:
    """Digit-chaining core: first+last seeds the chain, then each digit
    of the challenge is added to the previous output, and the low figure
    picks a position in the permutation (position 10 for a 0)."""
    if len(challenge_digits) < 2:
        raise InvalidInputError("need at least 2 challenge digits")
    if sorted(permutation) != list(DIGITS):
        raise InvalidInputError("permutation must use each digit 0-9 once")
    d = [int(c) for c in challenge_digits]
    out = []
    v = (d[0] + d[-1]) % 10
    out.append(permutation[v - 1])  # index v-1 is position v; v=0 wraps to position 10
    for x in d[1:]:
        v = (x + int(out[-1])) % 10
        out.append(permutation[v - 1])
    return "".join(out)


def blum_password(challenge: str, key: BlumKey, length: Optional[int] = None) -> str:
    """Digit password for a challenge; recycle the challenge to extend.

    Default length equals the challenge length. A longer request keeps
    the chain running over the challenge digits repeated from the start;
    a shorter one truncates.
    """
    if len(challenge) < 2:
        raise InvalidInputError("challenge must be at least 2 letters")
    d = [key.digit(c) for c in challenge]
    n = len(d) if length is None else length
    if n < 1:
        raise InvalidInputError("length must be positive")
    out = []
    v = (d[0] + d[-1]) % 10
    out.append(key.permutation[v - 1])
    i = 1
    while len(out) < n:
        v = (d[i % len(d)] + int(out[-1])) % 10
        out.append(key.permutation[v - 1])
        i += 1
    return "".join(out[:n])


@dataclass(frozen=True)
class PravaKey:
    """Scrambled top and side headers, optional fixed tail and literal suffix."""

    top: Alphabet
    side: Alphabet
    tail: str = ""
    suffix: str = ""


def prava_password(challenge: str, key: PravaKey, min_length: int = 0) -> str:
    """Chain the challenge through the scrambled tabula.

    First letter of the password combines the challenge's first and last
    letters; every further challenge letter is combined with the previous
    password letter. If the result is still shorter than `min_length`,
    the key's fixed tail letters continue the chain; the suffix is then
    appended verbatim.
    """
    if len(challenge) < 2:
        raise InvalidInputError("challenge must be at least 2 letters")
    out = [combine(challenge[0], challenge[-1], key.top, key.side)]
    for ch in challenge[1:]:
        out.append(combine(ch, out[-1], key.top, key.side))
    tail_iter = iter(key.tail)
    while len(out) < min_length:
        ch = next(tail_iter, None)
        if ch is None:
            raise InvalidInputError(
                f"tail exhausted: {len(out)} letters generated, {min_length} required"
            )
        out.append(combine(ch, out[-1], key.top, key.side))
    return "".join(out) + key.suffix


# ---------------------------------------------------------------------------
# Known-plaintext recovery of the letter-scheme key


@dataclass(frozen=True)
class ObservedPair:
    """An aligned challenge/password observation (suffix already stripped)."""

    challenge: str
    password: str

    def __post_init__(self):
        if len(self.challenge) < 2:
            raise InvalidInputError("challenge must be at least 2 letters")
        if len(self.password) != len(self.challenge):
            raise InvalidInputError(
                "password and challenge must align letter for letter "
                "(strip any suffix and account for tail letters first)"
            )


# Unknown layout: 0..25 = side index of password letter (A..Z),
#                 26..51 = top index of challenge letter (A..Z).
_SIDE = 0
_TOP = 26


@dataclass
class PravaRecovery:
    """Solved equation system plus the machinery to use it as a key class.

    Individual header positions are only ever determined up to a global
    shift (add a constant to every top index, subtract it from every side
    index and every equation still holds, and the shifted key generates
    identical passwords). All queries therefore go through shift-invariant
    functionals of the solution.
    """

    solution: Mod26Solution
    n_equations: int
    consistent: bool
    unresolved: list[str] = field(default_factory=list)
    _pair_cache: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> tuple[int, int]:
        return self.solution.rank

    @property
    def shift_family_size(self) -> int:
        return 26

    def pair_value(self, password_letter: str, challenge_letter: str) -> Optional[int]:
        """side_index(password letter) + top_index(challenge letter), mod 26.

        This is the shift-invariant combination every generation step
        runs on; None when the observations do not pin it down.
        """
        key = (password_letter, challenge_letter)
        if key not in self._pair_cache:
            self._pair_cache[key] = self.solution.evaluate(
                [
                    (_SIDE + letter_value(password_letter), 1),
                    (_TOP + letter_value(challenge_letter), 1),
                ]
            )
        return self._pair_cache[key]

    def _step(self, challenge_letter: str, prev_value: int) -> Optional[str]:
        """The password letter following `prev_value`, if determined.

        The true letter c satisfies side_index(c) + top_index(ch) =
        prev_value. A determined match is unique because side indices are
        injective; failing that, 25 determined mismatches force the 26th
        letter.
        """
        undetermined = []
        match = None
        for c in ALPHABET:
            v = self.pair_value(c, challenge_letter)
            if v is None:
                undetermined.append(c)
            elif v == prev_value:
                match = c
        if match is not None:
            return match
        if len(undetermined) == 1:
            return undetermined[0]
        return None

    def predict(self, challenge: str) -> "Prediction":
        """Regenerate the password for a challenge, as far as determined.

        Undetermined positions come back as None and poison the chain
        until the next observed value would restart it (there is none in
        pure prediction, so everything after the first gap is unknown).
        """
        if len(challenge) < 2:
            raise InvalidInputError("challenge must be at least 2 letters")
        letters: list[Optional[str]] = []
        prev = letter_value(challenge[-1])
        for ch in challenge:
            if prev is None:
                letters.append(None)
                continue
            nxt = self._step(ch, prev)
            letters.append(nxt)
            prev = None if nxt is None else letter_value(nxt)
        return Prediction(letters=tuple(letters))

    def reproduces(self, pair: ObservedPair) -> bool:
        """Check an observation against the class, using the observed
        previous letters so one gap cannot cascade."""
        prev = letter_value(pair.challenge[-1])
        for ch, pw in zip(pair.challenge, pair.password):
            got = self._step(ch, prev)
            if got != pw:
                return False
            prev = letter_value(pw)
        return True

    def candidates(self) -> list[tuple[Alphabet, Alphabet]]:
        """Concrete (top, side) pairs, one per shift, when determination
        is complete; empty when any header position is unresolved."""
        anchor = None
        for c in ALPHABET:
            for a in ALPHABET:
                if self.pair_value(c, a) is not None:
                    anchor = a
                    break
            if anchor:
                break
        if anchor is None:
            return []
        # Gauge: fix top_index(anchor) = 0, then read every unknown
        # relative to it through invariant functionals.
        top_idx: dict[str, int] = {}
        side_idx: dict[str, int] = {}
        for a in ALPHABET:
            v = self.solution.evaluate(
                [(_TOP + letter_value(a), 1), (_TOP + letter_value(anchor), -1)]
            )
            if v is not None:
                top_idx[a] = v
        for c in ALPHABET:
            v = self.pair_value(c, anchor)
            if v is not None:
                side_idx[c] = v
        for idx_map in (top_idx, side_idx):
            missing = [a for a in ALPHABET if a not in idx_map]
            if len(missing) == 1:
                free = set(range(26)) - set(idx_map.values())
                if len(free) == 1:
                    idx_map[missing[0]] = free.pop()
            if len(idx_map) != 26:
                return []
        out = []
        for shift in range(26):
            top_order = [""] * 26
            side_order = [""] * 26
            for a in ALPHABET:
                top_order[(top_idx[a] + shift) % 26] = a
            for c in ALPHABET:
                side_order[(side_idx[c] - shift) % 26] = c
            if "" in top_order or "" in side_order:
                continue  # non-injective assignment: not a permutation
            out.append((Alphabet("".join(top_order)), Alphabet("".join(side_order))))
        return out

    def diagnostics(self) -> dict:
        return {
            "consistent": self.consistent,
            "equations": self.n_equations,
            "rank_mod2": self.rank[0],
            "rank_mod13": self.rank[1],
            "unresolved": list(self.unresolved),
            "shift_family_size": self.shift_family_size,
        }


@dataclass(frozen=True)
class Prediction:
    letters: tuple

    @property
    def complete(self) -> bool:
        return all(c is not None for c in self.letters)

    @property
    def text(self) -> Optional[str]:
        if not self.complete:
            return None
        return "".join(self.letters)

    def determined_positions(self) -> list[int]:
        return [i for i, c in enumerate(self.letters) if c is not None]


def recover_prava_key(pairs: list[ObservedPair]) -> PravaRecovery:
    """Fit the letter-scheme equations to captured pairs.

    Every generated letter yields one equation
    side_index(password[i]) + top_index(challenge[i]) = value(previous),
    where "previous" is the last challenge letter for the first position
    and the prior password letter after that. Solved over Z26 by CRT into
    mod 2 and mod 13; the residual shift family is handled by the
    recovery object.
    """
    if not pairs:
        raise InvalidInputError("need at least one observed pair")
    system = Mod26System(52)
    for pair in pairs:
        prev = letter_value(pair.challenge[-1])
        for ch, pw in zip(pair.challenge, pair.password):
            system.add_equation(
                [(_SIDE + letter_value(pw), 1), (_TOP + letter_value(ch), 1)], prev
            )
            prev = letter_value(pw)
    solution = system.solve()
    recovery = PravaRecovery(
        solution=solution,
        n_equations=system.n_equations,
        consistent=solution.consistent,
    )
    # An unknown is reported unresolved when even its shift-invariant
    # combination with a fixed anchor stays undetermined.
    anchor_top = pairs[0].challenge[0]
    unresolved = []
    for a in ALPHABET:
        if (
            solution.evaluate(
                [(_TOP + letter_value(a), 1), (_TOP + letter_value(anchor_top), -1)]
            )
            is None
        ):
            unresolved.append(f"top:{a}")
    for c in ALPHABET:
        if recovery.pair_value(c, anchor_top) is None:
            unresolved.append(f"side:{c}")
    recovery.unresolved = unresolved
    return recovery


def keyspace_report() -> dict:
    """Key material entropy for the password schemes."""
    import math

    sub = math.log2(math.factorial(26))
    return {
        "letter_scheme_bits": round(2 * sub, 2),
        "single_alphabet_bits": round(sub, 2),
        "digit_scheme_bits": round(
            26 * math.log2(10) + math.log2(math.factorial(10)), 2
        ),
        "password_bits_per_letter": round(math.log2(26), 2),
    }
