from fractions import Fraction

import numpy as np
import pytest

from taunaf.blockstats import (
    BlockStats,
    asymptotic_constants,
    clt_check,
    count_nafs,
    expectation_constant,
    occurrence_distribution,
    occurrence_moments,
    occurrence_total,
    wagner_polynomial_roots,
    wagner_root_check,
)
from taunaf.digitset import build_digit_set
from taunaf.naf import naf_strings
from taunaf.ring import make_order

from oracles import enumerate_blocks


def test_count_examples():
    assert count_nafs(0, 2, 2) == 1
    assert count_nafs(2, 2, 2) == 5
    assert abs(count_nafs(60, 2, 2) / (Fraction(2 ** 62, 3)) - 1) < 1e-9


def test_moment_examples():
    assert occurrence_moments(0, 2, 2) == (0, 0)
    assert occurrence_moments(2, 2, 2)[0] == Fraction(2, 5)


def test_constants_examples():
    assert BlockStats(2, 2).e_w == Fraction(1, 6)
    assert BlockStats(3, 2).e_w == Fraction(1, 15)
    assert BlockStats(2, 2).rho == Fraction(16, 17)
    e, v, rho = asymptotic_constants(2, 3)
    assert e == Fraction(1, 4 * 4) and 0 < rho < 1 and v > 0


@pytest.mark.parametrize("q,w", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_brute_force_counts(q, w):
    k = q ** (w - 1) * (q - 1)
    for n in range(13):
        count, hits = enumerate_blocks(n, w, k)
        assert count == count_nafs(n, q, w)
        assert hits == occurrence_total(n, q, w)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("w", [2, 3, 4])
def test_variance_constant_positive(q, w):
    assert BlockStats(q, w).v_w > 0


@pytest.mark.parametrize("p,q,w", [(1, 2, 2), (3, 3, 2), (0, 2, 3)])
def test_every_nonzero_digit_has_the_same_law(p, q, w):
    ds = build_digit_set(make_order(p, q), w)
    n = 7
    per_digit = {d: 0 for d in ds.nonzero}
    words = 0
    for s in naf_strings(n, w, ds.nonzero):
        words += 1
        for d in s:
            if d:
                per_digit[d] += 1
    assert words == count_nafs(n, q, w)
    assert set(per_digit.values()) == {occurrence_total(n, q, w)}


@pytest.mark.parametrize("q,w", [(2, 2), (3, 2), (2, 3)])
def test_distribution_matches_moments(q, w):
    for n in (0, 1, 5, 17):
        dist = occurrence_distribution(n, q, w)
        assert sum(dist) == count_nafs(n, q, w)
        total = sum(dist)
        mean = Fraction(sum(m * c for m, c in enumerate(dist)), total)
        var = Fraction(sum(m * m * c for m, c in enumerate(dist)), total) - mean * mean
        assert (mean, var) == occurrence_moments(n, q, w)


def test_mean_converges_geometrically():
    st = BlockStats(2, 2)
    devs = [abs(st.mean_deviation(n)) for n in range(20, 61, 10)]
    assert all(b < a for a, b in zip(devs, devs[1:]))
    assert devs[-1] < 1e-6
    assert expectation_constant(2, 2) == Fraction(1 * 1 * 2, 2 * 9)


def test_kolmogorov_distance_decreases():
    rows = clt_check([20, 40, 80, 160], 2, 2)
    dists = [r.kolmogorov for r in rows]
    assert all(b < a for a, b in zip(dists, dists[1:]))
    for r in rows:
        assert (r.mean, r.variance) == occurrence_moments(r.n, 2, 2)


def test_wagner_examples():
    roots = sorted(wagner_polynomial_roots(2, 2).real)
    assert np.allclose(roots, [-2, 1])
    assert wagner_root_check(2, 2)
    others = [z for z in wagner_polynomial_roots(2, 3) if abs(z - 1) > 1e-9]
    assert all(abs(z) >= 1 + 1 / 54 for z in others)
    assert np.allclose([abs(z) for z in others], 2 ** 0.5)
    assert wagner_root_check(9, 4)


@pytest.mark.parametrize("t", range(2, 12))
@pytest.mark.parametrize("w", range(2, 7))
def test_wagner_grid(t, w):
    assert wagner_root_check(t, w)
