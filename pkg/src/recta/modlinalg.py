"""Linear systems over Z26 via CRT into the prime fields mod 2 and mod 13.

26 is composite, so naive elimination stalls on non-invertible pivots;
splitting into the two prime factors gives clean Gaussian elimination in
each field, and the Chinese remainder theorem stitches values back
together. Callers query solved systems through linear functionals, which
sidesteps gauge choices: a functional is determined exactly when it lies
in the row space in both fields.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

PRIMES = (2, 13)


def _rref_mod_p(matrix: np.ndarray, p: int):
    """Reduced row echelon form of an augmented matrix mod p (p prime).

    Returns (rref, pivot_cols, consistent); inconsistency means a row
    reduced to all-zero coefficients with a nonzero right-hand side.
    """
    m = matrix % p
    rows, cols = m.shape
    pivot_cols: list[int] = []
    r = 0
    for c in range(cols - 1):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            m[[r, pr]] = m[[pr, r]]
        inv = pow(int(m[r, c]), p - 2, p)
        m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivot_cols.append(c)
        r += 1
    zero_coeffs = (m[:, :-1] == 0).all(axis=1)
    consistent = not bool(np.any(zero_coeffs & (m[:, -1] != 0)))
    return m, pivot_cols, consistent


@dataclass
class _FieldSolution:
    rref: np.ndarray
    pivot_cols: list[int]
    consistent: bool
    p: int

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    def evaluate(self, functional: np.ndarray) -> Optional[int]:
        """Value of functional . x mod p, or None if not in the row space."""
        f = functional.astype(np.int64) % self.p
        value = 0
        for i, c in enumerate(self.pivot_cols):
            coef = int(f[c])
            if coef:
                f = (f - coef * self.rref[i, :-1]) % self.p
                value = (value + coef * int(self.rref[i, -1])) % self.p
        if np.any(f):
            return None
        return value


def crt_pair(v2: int, v13: int) -> int:
    """x mod 26 with x = v2 mod 2 and x = v13 mod 13."""
    return (v13 + 13 * ((v2 - v13) % 2)) % 26


class Mod26System:
    """Accumulates linear equations over Z26 and solves them via CRT."""

    def __init__(self, n_unknowns: int):
        self.n = n_unknowns
        self._rows: list[list[int]] = []

    @property
    def n_equations(self) -> int:
        return len(self._rows)

    def add_equation(self, terms: list[tuple[int, int]], rhs: int) -> None:
        """terms is a list of (unknown index, coefficient)."""
        row = [0] * (self.n + 1)
        for idx, coef in terms:
            row[idx] = (row[idx] + coef) % 26
        row[self.n] = rhs % 26
        self._rows.append(row)

    def solve(self) -> "Mod26Solution":
        matrix = np.array(self._rows, dtype=np.int64).reshape(-1, self.n + 1)
        fields = []
        for p in PRIMES:
            rref, pivots, ok = _rref_mod_p(matrix, p)
            fields.append(_FieldSolution(rref, pivots, ok, p))
        return Mod26Solution(self.n, len(self._rows), fields[0], fields[1])


@dataclass
class Mod26Solution:
    n_unknowns: int
    n_equations: int
    mod2: _FieldSolution
    mod13: _FieldSolution

    @property
    def consistent(self) -> bool:
        return self.mod2.consistent and self.mod13.consistent

    @property
    def rank(self) -> tuple[int, int]:
        return self.mod2.rank, self.mod13.rank

    def evaluate(self, terms: list[tuple[int, int]]) -> Optional[int]:
        """Value mod 26 of a linear functional, or None if undetermined."""
        f = np.zeros(self.n_unknowns, dtype=np.int64)
        for idx, coef in terms:
            f[idx] += coef
        v2 = self.mod2.evaluate(f)
        if v2 is None:
            return None
        v13 = self.mod13.evaluate(f)
        if v13 is None:
            return None
        return crt_pair(v2, v13)
