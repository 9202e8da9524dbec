import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taunaf.digitset import build_digit_set
from taunaf.naf import (
    NafWord,
    approx_error_bound,
    approx_expand,
    digit_count,
    expand,
    fractional_words,
    lipschitz_constant,
    naf_metric,
    naf_strings,
    to_text,
    validate,
    value,
    verify_wnads,
    weight,
    word_from_string,
)
from taunaf.ring import FieldElement, RingElement, make_order

from conftest import GRID, SMALL

digit_sets = st.sampled_from([(p, q, w) for p, q in GRID for w in (2, 3, 4)]).map(
    lambda t: build_digit_set(make_order(t[0], t[1]), t[2])
)
coords = st.integers(-10 ** 9, 10 ** 9)


def test_validate_examples(binary_naf):
    ds = binary_naf
    one, minus = ds.order(1), ds.order(-1)
    assert validate(NafWord({}, ds))
    assert not validate(NafWord({0: one, 1: one}, ds))
    assert validate(NafWord({1: minus, 3: minus}, ds))
    # digits outside the digit set are rejected
    assert not validate(NafWord({0: ds.order(3)}, ds))


def test_value_examples(binary_naf):
    ds = binary_naf
    minus = ds.order(-1)
    assert value(NafWord({}, ds)) == FieldElement.from_ring(ds.order(0))
    for d in ds.nonzero:
        assert value(NafWord({0: d}, ds)) == FieldElement.from_ring(d)
    assert value(NafWord({1: minus, 3: minus}, ds)) == FieldElement.from_ring(ds.order(2))


def test_expand_examples(binary_naf):
    ds = binary_naf
    o = ds.order
    assert expand(ds, o(0)).support == {}
    for d in ds.nonzero:
        assert expand(ds, d).support == {0: d}
    word = expand(ds, o(2))
    assert word.support == {1: o(-1), 3: o(-1)}
    assert weight(word) == 2
    assert to_text(word) == "-1 0 -1 0."


def test_metric_examples(binary_naf):
    ds = binary_naf
    one = ds.order(1)
    empty = NafWord({}, ds)
    assert naf_metric(empty, empty) == 0
    assert naf_metric(NafWord({0: one}, ds), empty) == 1
    assert naf_metric(NafWord({3: one}, ds), empty) == pytest.approx(2 ** 1.5)


@pytest.mark.parametrize("p,q,w", [(1, 2, 2), (0, 2, 2), (5, 7, 2), (-1, 2, 3), (2, 3, 2)])
def test_verify_wnads(p, q, w):
    rep = verify_wnads(build_digit_set(make_order(p, q), w))
    assert rep.ok and rep.checked > 0


def test_approx_expand_third(binary_naf):
    ds = binary_naf
    third = FieldElement.from_rational(Fraction(1, 3), ds.order)
    word = approx_expand(ds, third, 10)
    err = abs(value(word).complex() - 1 / 3)
    assert err <= math.sqrt(2) * math.sqrt(7 / 12) * 2 ** -5
    assert err <= approx_error_bound(ds, 10)


@given(digit_sets, coords, coords)
@settings(max_examples=300)
def test_round_trip(ds, a, b):
    z = ds.order(a, b)
    word = expand(ds, z)
    assert validate(word)
    assert value(word) == FieldElement.from_ring(z)
    assert sum(digit_count(word, d) for d in ds.nonzero) == weight(word)
    # tau | z exactly when there is no digit at index 0
    assert z.divides_tau() == (0 not in word.support)


@given(digit_sets, coords, coords, st.integers(0, 12))
@settings(max_examples=200)
def test_approx_expand_exact_points(ds, a, b, ell):
    z = ds.order(a, b)
    pt = FieldElement.from_ring(z)
    assert value(approx_expand(ds, pt, ell)) == pt
    assert approx_expand(ds, pt.div_tau(1), ell + 1) == expand(ds, z).shifted(-1)


@given(digit_sets, st.integers(-10 ** 6, 10 ** 6), st.integers(-10 ** 6, 10 ** 6),
       st.integers(1, 10 ** 4), st.integers(0, 14))
@settings(max_examples=200)
def test_approx_expand_error(ds, a, b, den, ell):
    pt = FieldElement(a, b, den, ds.order)
    word = approx_expand(ds, pt, ell)
    assert validate(word)
    assert abs(value(word).complex() - pt.complex()) <= approx_error_bound(ds, ell) * (1 + 1e-9)


@pytest.mark.parametrize("p,q", SMALL)
def test_bounded_words_have_distinct_values(p, q):
    ds = build_digit_set(make_order(p, q), 2)
    seen = set()
    n = 0
    for s in naf_strings(9 if q == 2 else 6, 2, ds.nonzero):
        v = value(word_from_string(ds, s, 0))
        seen.add(v)
        n += 1
    assert len(seen) == n


def _random_word(ds, rng, lo, hi):
    support = {}
    j = lo
    while j <= hi:
        if rng.random() < 0.4:
            support[j] = rng.choice(ds.nonzero)
            j += ds.w
        else:
            j += 1
    return NafWord(support, ds)


@pytest.mark.parametrize("p,q", SMALL)
@pytest.mark.parametrize("w", (2, 3))
def test_value_is_lipschitz(p, q, w):
    ds = build_digit_set(make_order(p, q), w)
    L = lipschitz_constant(ds)
    rng = random.Random(7)
    for _ in range(500):
        a = _random_word(ds, rng, -20, 10)
        b = _random_word(ds, rng, -20, 10)
        d = naf_metric(a, b)
        assert abs(value(a).complex() - value(b).complex()) <= L * d + 1e-9


def test_fractional_words_count(binary_naf):
    assert sum(1 for _ in fractional_words(binary_naf, 6)) == 85
    assert all(isinstance(d, RingElement) for w in fractional_words(binary_naf, 3) for d in w.support.values())
