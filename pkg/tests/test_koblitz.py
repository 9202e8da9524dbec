import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from taunaf.blockstats import BlockStats, nonzero_digit_count
from taunaf.koblitz import (
    INFINITY,
    IRREDUCIBLES,
    BinaryField,
    KoblitzCurve,
    cost_table,
    is_irreducible,
    random_scalars,
    scalar_mul_ztau,
)
from taunaf.ring import make_order

F = BinaryField(11)
elems = st.integers(0, F.size - 1)


@given(elems, elems, elems)
def test_field_laws(a, b, c):
    assert F.mul(a, b) == F.mul(b, a)
    assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
    assert F.mul(a, b ^ c) == F.mul(a, b) ^ F.mul(a, c)
    assert F.square(a) == F.mul(a, a)
    if a:
        assert F.mul(a, F.inverse(a)) == 1


def test_irreducibility():
    for m, f in IRREDUCIBLES.items():
        assert is_irreducible(f)
    assert not is_irreducible(0b101)  # (x + 1)^2
    assert not is_irreducible((1 << 4) | (1 << 2) | 1)  # (x^2 + x + 1)^2
    assert is_irreducible(0b10011)
    # brute force over degree 4: 3 irreducible polynomials
    assert sum(is_irreducible(f) for f in range(16, 32)) == 3
    with pytest.raises(ValueError):
        BinaryField(7, 0b10000101 ^ 0b10)


def test_half_trace_solves():
    rng = random.Random(3)
    for _ in range(50):
        c = F.random(rng)
        if F.trace(c) == 0:
            z = F.half_trace(c)
            assert F.square(z) ^ z == c


@pytest.fixture(scope="module", params=[0, 1])
def curve(request):
    return KoblitzCurve(11, request.param)


def test_group_basics(curve):
    rng = random.Random(5)
    for _ in range(20):
        P, Q = curve.random_point(rng), curve.random_point(rng)
        assert curve.is_on_curve(P) and curve.is_on_curve(curve.add(P, Q))
        assert curve.add(P, INFINITY) == P
        assert curve.sub(P, P) == INFINITY
        assert curve.add(P, Q) == curve.add(Q, P)
        assert curve.double(P) == curve.add(P, P)
        assert curve.is_on_curve(curve.frobenius(P))
        assert curve.characteristic_check(P)


def test_trivial_scalars(curve):
    rng = random.Random(7)
    P = curve.random_point(rng)
    ds = curve.digit_set(3)
    o = ds.order
    Q, ops = scalar_mul_ztau(curve, ds, o(1), P)
    assert Q == P and ops.adds == 1
    Q, ops = scalar_mul_ztau(curve, ds, o.tau, P)
    assert Q == curve.frobenius(P) and ops.adds == 1 and ops.frobenius_applications == 1
    Q, ops = scalar_mul_ztau(curve, ds, o(0), P)
    assert Q == INFINITY and ops.adds == 0


@pytest.mark.parametrize("w", [2, 3, 4])
def test_matches_reference(curve, w):
    rng = random.Random(w)
    ds = curve.digit_set(w)
    for z in random_scalars(70, 10 ** 6, rng, curve.mu):
        P = curve.random_point(rng)
        Q, ops = scalar_mul_ztau(curve, ds, z, P)
        assert Q == curve.mul_ztau_reference(z, P)
        assert ops.precomp_size == len(ds.nonzero)


@settings(max_examples=40, deadline=None)
@given(st.integers(-500, 500), st.integers(-500, 500), st.integers(-500, 500), st.integers(-500, 500), st.integers(0, 10 ** 6))
def test_additive_in_scalar(a, b, c, d, seed):
    curve = KoblitzCurve(7, 1)
    ds = curve.digit_set(2)
    o = ds.order
    P = curve.random_point(random.Random(seed))
    x, _ = scalar_mul_ztau(curve, ds, o(a, b), P)
    y, _ = scalar_mul_ztau(curve, ds, o(c, d), P)
    s, _ = scalar_mul_ztau(curve, ds, o(a + c, b + d), P)
    assert curve.add(x, y) == s


def test_wrong_digit_set_rejected():
    curve = KoblitzCurve(7, 1)
    other = KoblitzCurve(7, 0).digit_set(2)
    with pytest.raises(ValueError):
        scalar_mul_ztau(curve, other, make_order(-1, 2)(1), curve.random_point(random.Random(0)))


def test_scalar_sampler():
    rng = random.Random(1)
    zs = random_scalars(300, 5000, rng, -1)
    assert all(z.norm() <= 5000 for z in zs) and len(zs) == 300
    assert zs[0].order.p == -1


def test_cost_table():
    rng = random.Random(11)
    scalars = random_scalars(400, 2 ** 40, rng, 1)
    rows = cost_table(scalars, 1, (2, 3, 4, 5))
    adds = [r.mean_adds for r in rows]
    assert adds == sorted(adds, reverse=True)
    assert [r.precomp_size for r in rows] == [nonzero_digit_count(2, w) for w in (2, 3, 4, 5)]
    for r in rows:
        density = nonzero_digit_count(2, r.w) * float(BlockStats(2, r.w).e_w)
        assert r.predicted_adds == pytest.approx(density * r.mean_length)
        assert r.adds_per_length == pytest.approx(density, rel=0.15)
