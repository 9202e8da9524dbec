import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from taunaf.geometry import C_V_SQ, frac_ztau, in_cell, in_restricted_cell, voronoi_cell
from taunaf.ring import AlgebraicPoint, FieldElement, QSqrtD, embed, make_order

from conftest import GRID

orders = st.sampled_from(GRID).map(lambda pq: make_order(*pq))


def fe(order, x, y=0):
    """The field element x + y*i for rational x and y*2/sqrt(D) rational."""
    return FieldElement.from_rational(Fraction(x), order) + FieldElement.from_ring(
        2 * order.tau - order.p
    ) * Fraction(y)


def test_hexagon_vertex_formula():
    o = make_order(3, 3)
    v0 = voronoi_cell(o).vertices[0].to_point()
    assert v0.x == Fraction(1, 2)
    assert v0.y == QSqrtD(0, Fraction(1, 6), 3)
    assert v0.abs_sq() == Fraction(1, 3)


def test_rectangle_has_four_vertices():
    cell = voronoi_cell(make_order(0, 2))
    assert cell.m == 4
    assert voronoi_cell(make_order(1, 2)).m == 6


@pytest.mark.parametrize("p,q", GRID)
def test_cell_invariants(p, q):
    o = make_order(p, q)
    cell = voronoi_cell(o)
    sq = {v.abs_sq() for v in cell.vertices}
    assert len(sq) == 1
    for v in cell.vertices:
        assert -v in cell.vertices
        assert in_cell(v.div_tau(1))
    assert cell.inradius_sq() >= Fraction(1, 4)
    assert cell.circumradius_sq() <= q * C_V_SQ
    assert cell.area() == o.im_tau == cell.lebesgue_measure()


def test_closed_cell_examples():
    o = make_order(1, 2)
    assert in_cell(fe(o, 0))
    assert in_cell(fe(o, Fraction(1, 2)))
    assert not in_cell(fe(o, Fraction(3, 5)))
    # the same checks with algebraic coordinates
    assert in_cell(AlgebraicPoint.from_rationals(Fraction(1, 2), 0, o.D), order=o)
    assert not in_cell(AlgebraicPoint.from_rationals(Fraction(3, 5), 0, o.D), order=o)


@pytest.mark.parametrize("p,q", GRID)
def test_restricted_cell_midpoints(p, q):
    cell = voronoi_cell(make_order(p, q))
    mids = cell.midpoints
    assert in_restricted_cell(fe(cell.order, 0))
    assert in_restricted_cell(mids[0])
    assert not in_restricted_cell(mids[-1])
    # -v_{k+1/2} is a lattice translate of v_{k+1/2}: exactly one of the pair is kept
    for v in mids:
        assert in_restricted_cell(v) != in_restricted_cell(-v)
    # the vertices fall into two translation classes (one for a rectangle), one kept in each
    kept = [v for v in cell.vertices if in_restricted_cell(v)]
    assert len(kept) == (2 if cell.m == 6 else 1)


def _window_hits(order, pt):
    return [
        (s, t)
        for s in range(-2, 3)
        for t in range(-2, 3)
        if in_restricted_cell(pt.translate(-(s + t * order.reduced_tau)), order)
    ]


@pytest.mark.parametrize("p,q", GRID)
def test_restricted_translates_partition(p, q):
    o = make_order(p, q)
    rng = random.Random(p * 31 + q)
    cell = voronoi_cell(o)
    pts = [fe(o, Fraction(rng.randint(-12, 12), 8), Fraction(rng.randint(-8, 8), 16)) for _ in range(100)]
    # boundary points are the interesting ones
    pts += list(cell.vertices) + list(cell.midpoints)
    pts += [(v + cell.midpoints[k]) * Fraction(1, 2) for k, v in enumerate(cell.vertices)]
    for pt in pts:
        assert len(_window_hits(o, pt)) == 1


def test_frac_of_lattice_point():
    o = make_order(1, 2)
    z = o(3, -5)
    lf = frac_ztau(FieldElement.from_ring(z))
    assert lf.lattice_part == z and lf.fractional_part.abs_sq() == 0


def test_frac_half_decides_once():
    o = make_order(1, 2)
    half = fe(o, Fraction(1, 2))
    keep = [u for u in (0, 1) if in_restricted_cell(half.translate(-o(u)))]
    assert len(keep) == 1
    assert frac_ztau(half).lattice_part == o(keep[0])


@given(orders, st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 64),
       st.integers(-100, 100), st.integers(-100, 100))
def test_frac_reconstructs_and_translates(o, a, b, den, za, zb):
    pt = FieldElement(a, b, den, o)
    lf = frac_ztau(pt)
    assert lf.fractional_part.translate(lf.lattice_part) == pt
    assert in_restricted_cell(lf.fractional_part)
    z = o(za, zb)
    moved = frac_ztau(pt.translate(z))
    assert moved.lattice_part == lf.lattice_part + z
    assert moved.fractional_part == lf.fractional_part


@given(orders, st.integers(-50, 50), st.integers(-50, 50), st.integers(1, 64))
def test_frac_agrees_on_algebraic_points(o, a, b, den):
    pt = FieldElement(a, b, den, o)
    alg = pt.to_point()
    assert frac_ztau(alg, o).lattice_part == frac_ztau(pt).lattice_part
    assert embed(o(a, b)) == FieldElement.from_ring(o(a, b)).to_point()
