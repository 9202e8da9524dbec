"""Digit statistics of width-w NAFs of fixed block length.

A block of length n is any word with support in {0, ..., n-1}.  Counting by the last
(least significant) position gives, for the polynomial P_n(Y) that marks one chosen
nonzero digit with Y,

    P_n = P_{n-1} + (Y + K - 1) P_{n-w}  (n >= w),   P_j = 1 + j (Y + K - 1)  (j < w),

where K is the number of nonzero digits.  Everything below is extracted from this
recurrence with integer arithmetic; floats appear only in the normal-approximation and
root checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def nonzero_digit_count(q: int, w: int) -> int:
    return q ** (w - 1) * (q - 1)


_NAF_COUNTS: dict[tuple[int, int], list[int]] = {}  # grows on demand


def count_nafs(n: int, q: int, w: int) -> int:
    """Number of w-NAF words of length n over a digit set modulo tau^w with |N(tau)| = q."""
    if n < 0:
        raise ValueError("n must be non-negative")
    k = nonzero_digit_count(q, w)
    c = _NAF_COUNTS.setdefault((q, w), [1 + j * k for j in range(w)])
    for m in range(len(c), n + 1):
        c.append(c[m - 1] + k * c[m - w])
    return c[n]


def _derivative_tables(n: int, q: int, w: int) -> tuple[list[int], list[int], list[int]]:
    """P_m(1), P_m'(1) and P_m''(1) for m = 0..n."""
    k = nonzero_digit_count(q, w)
    c = [1 + j * k for j in range(w)]
    d1 = [j for j in range(w)]
    d2 = [0] * w
    for m in range(w, n + 1):
        c.append(c[m - 1] + k * c[m - w])
        d1.append(d1[m - 1] + c[m - w] + k * d1[m - w])
        d2.append(d2[m - 1] + 2 * d1[m - w] + k * d2[m - w])
    return c[: n + 1], d1[: n + 1], d2[: n + 1]


def occurrence_total(n: int, q: int, w: int) -> int:
    """Total number of occurrences of one fixed nonzero digit over all length-n words."""
    return _derivative_tables(n, q, w)[1][n]


def occurrence_moments(n: int, q: int, w: int) -> tuple[Fraction, Fraction]:
    """Exact mean and variance of the number of occurrences of a fixed nonzero digit.

    The digit itself does not matter: every nonzero digit plays the same role.
    """
    c, d1, d2 = _derivative_tables(n, q, w)
    mean = Fraction(d1[n], c[n])
    second_factorial = Fraction(d2[n], c[n])
    return mean, second_factorial + mean - mean * mean


def occurrence_distribution(n: int, q: int, w: int) -> list[int]:
    """a[m] = number of length-n words with exactly m occurrences of a fixed nonzero digit."""
    k = nonzero_digit_count(q, w)

    def step(poly: list[int]) -> list[int]:
        # (Y + K - 1) * poly
        out = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            out[i] += (k - 1) * c
            out[i + 1] += c
        return out

    def add(x: list[int], y: list[int]) -> list[int]:
        if len(x) < len(y):
            x, y = y, x
        out = list(x)
        for i, c in enumerate(y):
            out[i] += c
        return out

    polys = [[1 + j * (k - 1), j] if j else [1] for j in range(w)]
    for m in range(w, n + 1):
        polys.append(add(polys[m - 1], step(polys[m - w])))
    out = polys[n]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def expectation_constant(q: int, w: int) -> Fraction:
    """Constant term of the affine approximation to the mean occurrence count."""
    return Fraction((q - 1) * (w - 1) * w, q ** (w - 1) * ((q - 1) * w + 1) ** 2)


@dataclass(frozen=True)
class BlockStats:
    q: int
    w: int

    @property
    def num_nonzero_digits(self) -> int:
        return nonzero_digit_count(self.q, self.w)

    @property
    def e_w(self) -> Fraction:
        q, w = self.q, self.w
        return Fraction(1, q ** (w - 1) * ((q - 1) * w + 1))

    @property
    def v_w(self) -> Fraction:
        q, w = self.q, self.w
        s = (q - 1) * w + 1
        return Fraction(q ** (w - 1) * s * s - ((q - 1) * w * w + 2 * w - 1), q ** (2 * w - 2) * s ** 3)

    @property
    def rho(self) -> Fraction:
        return 1 / (1 + Fraction(1, self.q * self.w ** 3))

    def asymptotic_constants(self) -> tuple[Fraction, Fraction, Fraction]:
        return self.e_w, self.v_w, self.rho

    def count(self, n: int) -> int:
        return count_nafs(n, self.q, self.w)

    def moments(self, n: int) -> tuple[Fraction, Fraction]:
        return occurrence_moments(n, self.q, self.w)

    def mean_deviation(self, n: int) -> Fraction:
        """E(n) minus its affine approximation e_w n + const."""
        mean, _ = self.moments(n)
        return mean - self.e_w * n - expectation_constant(self.q, self.w)


def asymptotic_constants(q: int, w: int) -> tuple[Fraction, Fraction, Fraction]:
    return BlockStats(q, w).asymptotic_constants()


def _normal_cdf(x: float) -> float:
    return 0.5 * (1 + math.erf(x / math.sqrt(2)))


@dataclass(frozen=True)
class CltRow:
    n: int
    mean: Fraction
    variance: Fraction
    kolmogorov: float


def kolmogorov_distance(dist: list[int], mean: float, sd: float) -> float:
    """sup_x |F(x) - Phi((x - mean)/sd)| for an integer-valued law given by counts."""
    total = sum(dist)
    best = 0.0
    acc = 0
    for m, c in enumerate(dist):
        phi = _normal_cdf((m - mean) / sd)
        # both one-sided limits at the jump
        best = max(best, abs(acc / total - phi))
        acc += c
        best = max(best, abs(acc / total - phi))
    return best


def clt_check(n_grid: list[int], q: int, w: int) -> list[CltRow]:
    rows = []
    for n in n_grid:
        dist = occurrence_distribution(n, q, w)
        total = sum(dist)
        mean = Fraction(sum(m * c for m, c in enumerate(dist)), total)
        var = Fraction(sum(m * m * c for m, c in enumerate(dist)), total) - mean * mean
        if var == 0:
            rows.append(CltRow(n, mean, var, 1.0))
            continue
        rows.append(CltRow(n, mean, var, kolmogorov_distance(dist, float(mean), math.sqrt(var))))
    return rows


def wagner_polynomial_roots(t: int, w: int) -> np.ndarray:
    """Roots of 1 - z/t - (1 - 1/t) z^w."""
    coeffs = np.zeros(w + 1)
    coeffs[0] = -(1 - 1 / t)
    coeffs[w - 1] = -1 / t
    coeffs[w] = 1.0
    return np.roots(coeffs)


def wagner_root_check(t: int, w: int) -> bool:
    """Exactly one root in the closed disc of radius 1 + 1/(t w^3), and it equals 1."""
    radius = 1 + 1 / (t * w ** 3)
    inside = [z for z in wagner_polynomial_roots(t, w) if abs(z) <= radius]
    return len(inside) == 1 and abs(inside[0] - 1) < 1e-10
