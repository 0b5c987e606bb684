"""Randomness battery and keystream attacks.

Two fixed-threshold chi-squared tests decide whether a letter stream
looks random: single-letter uniformity (25 degrees of freedom, 90% of
truly random samples land under 34.4) and pairwise independence at a
distance (625 degrees of freedom, 90% under 671). The lag detector turns
the pairwise idea into an exact attack: a lagged-Fibonacci keystream
betrays its seed length because each letter is a fixed function of two
letters a seed-length back, and fitting that relation as a linear system
over Z26 either succeeds (right lag) or collapses (wrong lag).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .alphabet import ALPHABET, A_ORD
from .errors import InsufficientDataError, InvalidInputError
from .modlinalg import Mod26System

CHI2_UNIFORM_THRESHOLD = 34.4  # 90% quantile, 25 dof
CHI2_PAIRWISE_THRESHOLD = 671.0  # 90% quantile, 625 dof

TextLike = Union[str, np.ndarray]


def as_values(text: TextLike) -> np.ndarray:
    """A-Z string (or an already-converted uint8 array) to values 0..25."""
    if isinstance(text, np.ndarray):
        return text
    arr = np.frombuffer(text.encode("ascii"), dtype=np.uint8).astype(np.int64) - A_ORD
    if arr.size and (arr.min() < 0 or arr.max() > 25):
        raise InvalidInputError("text must contain only A-Z")
    return arr


def as_text(values: np.ndarray) -> str:
    return "".join(ALPHABET[int(v)] for v in values)


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    threshold: float
    dof: int
    passed: bool
    distance: Optional[int] = None

    def to_dict(self) -> dict:
        d = {
            "statistic": round(self.statistic, 4),
            "threshold": self.threshold,
            "dof": self.dof,
            "pass": self.passed,
        }
        if self.distance is not None:
            d["distance"] = self.distance
        return d


@dataclass(frozen=True)
class FrequencyTable:
    counts: np.ndarray
    length: int
    pair_counts: Optional[np.ndarray] = None
    distance: Optional[int] = None


def letter_counts(text: TextLike) -> FrequencyTable:
    values = as_values(text)
    counts = np.bincount(values, minlength=26)
    return FrequencyTable(counts=counts, length=int(values.size))


def pair_table(text: TextLike, d: int) -> FrequencyTable:
    """Counts of (letter at i, letter at i+d) over all i."""
    values = as_values(text)
    if d < 1:
        raise InvalidInputError("distance must be at least 1")
    if values.size <= d:
        raise InsufficientDataError(f"need more than {d} letters")
    ids = 26 * values[:-d] + values[d:]
    pairs = np.bincount(ids, minlength=676).reshape(26, 26)
    return FrequencyTable(
        counts=np.bincount(values, minlength=26),
        length=int(values.size),
        pair_counts=pairs,
        distance=d,
    )


def chi2_uniform(text: TextLike, min_length: int = 26) -> ChiSquareResult:
    """Single-letter uniformity test against the 34.4 threshold."""
    table = letter_counts(text)
    if table.length < min_length:
        raise InsufficientDataError(
            f"need at least {min_length} letters, got {table.length}"
        )
    expected = table.length / 26
    statistic = float(np.sum((table.counts - expected) ** 2) / expected)
    return ChiSquareResult(
        statistic=statistic,
        threshold=CHI2_UNIFORM_THRESHOLD,
        dof=25,
        passed=statistic < CHI2_UNIFORM_THRESHOLD,
    )


def chi2_pairwise(
    text: TextLike,
    d: int,
    expectation: str = "pairs",
    min_pairs: int = 676,
) -> ChiSquareResult:
    """Independence of letters d apart against the 671 threshold.

    The expected cell count is f_i*f_j divided by the number of pairs,
    which is what gives the statistic its 625-dof scale. `literal` keeps a
    divisor of 26 instead for auditing; it is dimensionally wrong and
    fails everything.
    """
    if expectation not in ("pairs", "literal"):
        raise InvalidInputError(f"unknown expectation mode {expectation!r}")
    table = pair_table(text, d)
    n_pairs = table.length - d
    if n_pairs < min_pairs:
        raise InsufficientDataError(
            f"need at least {min_pairs} pairs at distance {d}, got {n_pairs}"
        )
    f = table.counts.astype(np.float64)
    divisor = 26.0 if expectation == "literal" else float(n_pairs)
    expected = np.outer(f, f) / divisor
    observed = table.pair_counts.astype(np.float64)
    mask = expected > 0
    statistic = float(
        np.sum((observed[mask] - expected[mask]) ** 2 / expected[mask])
    )
    return ChiSquareResult(
        statistic=statistic,
        threshold=CHI2_PAIRWISE_THRESHOLD,
        dof=625,
        passed=statistic < CHI2_PAIRWISE_THRESHOLD,
        distance=d,
    )


def shannon_entropy(text: TextLike) -> float:
    """Plug-in entropy estimate in bits per letter."""
    table = letter_counts(text)
    if table.length == 0:
        raise InsufficientDataError("entropy of empty text is undefined")
    p = table.counts[table.counts > 0] / table.length
    return float(-np.sum(p * np.log2(p)))


@dataclass(frozen=True)
class StatReport:
    chi2_uniform: ChiSquareResult
    chi2_pairwise: tuple
    entropy_bits: float
    length: int
    verdict: str

    def to_dict(self) -> dict:
        return {
            "length": self.length,
            "chi2_uniform": self.chi2_uniform.to_dict(),
            "chi2_pairwise": [r.to_dict() for r in self.chi2_pairwise],
            "entropy_bits": round(self.entropy_bits, 4),
            "verdict": self.verdict,
        }


def randomness_report(
    text: TextLike, max_distance: int = 10, expectation: str = "pairs"
) -> StatReport:
    """Run the whole battery; random-like only if every member test passes."""
    uniform = chi2_uniform(text)
    pairwise = tuple(
        chi2_pairwise(text, d, expectation=expectation)
        for d in range(1, max_distance + 1)
    )
    entropy = shannon_entropy(text)
    all_pass = uniform.passed and all(r.passed for r in pairwise)
    return StatReport(
        chi2_uniform=uniform,
        chi2_pairwise=pairwise,
        entropy_bits=entropy,
        length=letter_counts(text).length,
        verdict="random-like" if all_pass else "non-random",
    )


# ---------------------------------------------------------------------------
# n-gram repeats and the seed-length attack


def first_repeat_distance(stream: TextLike, n: int) -> Optional[int]:
    """Index of the first position whose n-gram occurred earlier, or None.

    n-grams overlap; the index reported is where the repeated occurrence
    starts.
    """
    if n < 1:
        raise InvalidInputError("n must be at least 1")
    values = as_values(stream)
    seen = set()
    for i in range(values.size - n + 1):
        gram = tuple(values[i : i + n])
        if gram in seen:
            return i
        seen.add(gram)
    return None


@dataclass(frozen=True)
class LagCandidate:
    lag: int
    contradictions: int
    witnesses: int
    consistent: Optional[bool]  # linear fit result; None if prefiltered out
    bigram_confirms: int = 0


@dataclass(frozen=True)
class LagReport:
    lag: Optional[int]
    window: int
    candidates: tuple

    def to_dict(self) -> dict:
        return {
            "lag": self.lag,
            "window": self.window,
            "candidates": [
                {
                    "lag": c.lag,
                    "contradictions": c.contradictions,
                    "witnesses": c.witnesses,
                    "consistent": c.consistent,
                    "bigram_confirms": c.bigram_confirms,
                }
                for c in self.candidates
            ],
        }


def _lag_system(values: np.ndarray, lag: int, window: int) -> Mod26System:
    """Fit 'output = substitution(serpentine of window letters back)' at a lag.

    Unknowns 0..25 are the inverse output substitution indexed by letter;
    unknowns 26..51 are the input substitution of the window's first
    letter. The middle window letters enter at face value with the
    serpentine's alternating signs, so they land on the right-hand side.
    """
    system = Mod26System(52)
    child_sign = (-1) ** (window - 1)  # sign of the first-letter term
    for j in range(lag, values.size):
        first = int(values[j - lag])
        rhs = 0
        for t in range(1, window):
            rhs += (-1) ** (window - 1 - t) * int(values[j - lag + t])
        # x_child - sign*y_first = rhs  (x = inverse output substitution)
        system.add_equation(
            [(int(values[j]), 1), (26 + first, -child_sign)], rhs % 26
        )
    return system


def detect_lfg_lag(
    keystream: TextLike, max_lag: int, window: int = 2
) -> Optional[int]:
    """Seed length of a lagged-Fibonacci keystream, or None.

    For each candidate lag, every letter is checked against the window
    of letters that distance back: first the bare three-point test (the
    same window must never map to two different outputs), then an exact
    fit of the substitution structure as a linear system over Z26. The
    true lag always fits; wrong lags survive only with vanishing
    probability once the stream is a few dozen letters longer than the
    lag.
    """
    return detect_lfg_lag_report(keystream, max_lag, window).lag


def detect_lfg_lag_report(
    keystream: TextLike, max_lag: int, window: int = 2
) -> LagReport:
    if window < 2:
        raise InvalidInputError("window must be at least 2")
    values = as_values(keystream)
    # Integer id of the window starting at each position, computed once.
    gram_ids = np.zeros(max(values.size - window + 1, 0), dtype=np.int64)
    for t in range(window):
        gram_ids += values[t : t + gram_ids.size] * 26**t
    candidates = []
    found = None
    for lag in range(window, max_lag + 1):
        if values.size - lag < 2:
            break
        parents = gram_ids[: values.size - lag].tolist()
        children = values[lag:].tolist()
        mapping: dict = {}
        contradictions = 0
        witnesses = 0
        for pid, child in zip(parents, children):
            prev = mapping.get(pid)
            if prev is None:
                mapping[pid] = child
            elif prev == child:
                witnesses += 1
            else:
                contradictions += 1
        consistent = None
        if contradictions == 0:
            consistent = _lag_system(values, lag, window).solve().consistent
        bigram_confirms = 0
        if consistent and found is None:
            bigram_confirms = _bigram_cross_check(values, lag)
            found = lag
        candidates.append(
            LagCandidate(lag, contradictions, witnesses, consistent, bigram_confirms)
        )
        if found is not None:
            break
    return LagReport(lag=found, window=window, candidates=tuple(candidates))


def _bigram_cross_check(values: np.ndarray, lag: int) -> int:
    """Repeated bigrams must be followed by equal letters one lag later."""
    first_pos: dict = {}
    confirms = 0
    for i in range(values.size - 1):
        gram = (int(values[i]), int(values[i + 1]))
        j = first_pos.setdefault(gram, i)
        if j != i and i + lag < values.size and j + lag < values.size:
            if values[i + lag] == values[j + lag]:
                confirms += 1
    return confirms


# ---------------------------------------------------------------------------
# Keyspace arithmetic


def keyspace_summary() -> dict:
    """Entropy bookkeeping for the key material the toolkit handles."""
    substitution_bits = math.log2(math.factorial(26))
    return {
        "substitution_bits": round(substitution_bits, 2),
        "dual_substitution_bits": round(2 * substitution_bits, 2),
        "random_letter_bits": round(math.log2(26), 2),
        "letters_for_128_bits": round(128 / math.log2(26), 2),
        "letters_for_256_bits": round(256 / math.log2(26), 2),
    }
