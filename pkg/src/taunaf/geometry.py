"""Voronoi cell of 0 in the lattice Z[tau], its half-open variant, and lattice fractional parts.

Points may be given either as :class:`FieldElement` (exact elements of Q(tau), the
fast path used internally) or as :class:`AlgebraicPoint`.  Every predicate reduces to
signs of ``2*Re(pt*conj(n)) - c`` for lattice vectors ``n``, which both point types
evaluate exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .ring import FieldElement, IQOrder, QSqrtD, RingElement, point_of

C_V_SQ = Fraction(7, 12)


@dataclass(frozen=True)
class VoronoiCell:
    order: IQOrder
    vertices: tuple[FieldElement, ...]  # distinct, counter-clockwise, starting at v_0
    neighbors: tuple[RingElement, ...]  # edge k joins v_k and v_{k+1}, bisecting 0 and neighbors[k]
    tangents: tuple[RingElement, ...]  # positive multiple of i*neighbors[k]

    @property
    def m(self) -> int:
        return len(self.vertices)

    @property
    def midpoints(self) -> tuple[FieldElement, ...]:
        return tuple(FieldElement.from_ring(n, 2) for n in self.neighbors)

    def circumradius_sq(self) -> Fraction:
        return self.vertices[0].abs_sq()

    def inradius_sq(self) -> Fraction:
        return min(Fraction(n.norm(), 4) for n in self.neighbors)

    def area(self) -> QSqrtD:
        """Shoelace area, exact."""
        D = self.order.D
        twice = QSqrtD(0, 0, D)
        vs = self.vertices
        for k in range(len(vs)):
            a, b = vs[k].to_point(), vs[(k + 1) % len(vs)].to_point()
            twice = twice + (a.x * b.y - a.y * b.x)
        return twice * Fraction(1, 2)

    def lebesgue_measure(self) -> QSqrtD:
        return self.order.im_tau

    def polygon(self, center: RingElement | None = None, scale_power: int = 0) -> list[complex]:
        """Float vertices of tau^(-scale_power) * (center + V), for rendering."""
        out = []
        for v in self.vertices:
            pt = v if center is None else v.translate(center)
            if scale_power:
                pt = pt.div_tau(scale_power)
            out.append(pt.complex())
        return out


@lru_cache(maxsize=None)
def voronoi_cell(order: IQOrder) -> VoronoiCell:
    p, D = order.p, order.D
    f = order.frac_re_tau
    quarter_d = Fraction(D, 4)
    # i*y = (y/sqrt(D)) * (2 tau - p); y-coordinates are rational multiples of sqrt(D)
    r0 = (quarter_d + f * f - f) / D
    r1 = (quarter_d - f * f + f) / D

    def pt(x: Fraction, r: Fraction) -> FieldElement:
        s = x - p * r
        t = 2 * r
        den = math.lcm(s.denominator, t.denominator)
        return FieldElement(int(s * den), int(t * den), den, order)

    v0 = pt(Fraction(1, 2), r0)
    v1 = pt(f - Fraction(1, 2), r1)
    v2 = v0 - 1
    tt = order.reduced_tau
    one = order(1)
    if f == 0:
        # start at the upper-left corner so that the tie-breaking picks 1 and 1 + tau for w = 2
        vertices = (v1, -v0, -v1, v0)
        neighbors = (-one, -tt, one, tt)
    else:
        vertices = (v0, v1, v2, -v0, -v1, -v2)
        neighbors = (tt, tt - 1, -one, -tt, one - tt, one)
    i_sqrt_d = 2 * order.tau - p
    tangents = tuple(i_sqrt_d * n for n in neighbors)
    return VoronoiCell(order, vertices, neighbors, tangents)


def _order_of(pt, order: IQOrder | None) -> IQOrder:
    if order is not None:
        return order
    if isinstance(pt, (FieldElement, RingElement)):
        return pt.order
    raise ValueError("an order is required for AlgebraicPoint inputs")


def _edge_signs(pt, cell: VoronoiCell) -> list[int]:
    return [pt.side(n, n.norm()) for n in cell.neighbors]


def in_cell(pt, center: RingElement | None = None, order: IQOrder | None = None) -> bool:
    """Closed Voronoi cell of ``center``."""
    order = _order_of(pt, order if center is None else center.order)
    pt = point_of(pt, order)
    if center is not None and center:
        pt = pt.translate(-center)
    cell = voronoi_cell(order)
    return all(s <= 0 for s in _edge_signs(pt, cell))


def in_interior(pt, order: IQOrder | None = None) -> bool:
    order = _order_of(pt, order)
    pt = point_of(pt, order)
    return all(s < 0 for s in _edge_signs(pt, voronoi_cell(order)))


def in_restricted_cell(pt, order: IQOrder | None = None) -> bool:
    """Membership in the half-open cell whose lattice translates partition the plane.

    Contains the interior, the open half-edges (v_{k+1/2}, v_{k+1}), the midpoints
    v_{k+1/2} for k < m//2 and the vertices v_k for 1 <= k <= m//3.
    """
    order = _order_of(pt, order)
    pt = point_of(pt, order)
    cell = voronoi_cell(order)
    signs = _edge_signs(pt, cell)
    if any(s > 0 for s in signs):
        return False
    m = cell.m
    on = [k for k in range(m) if signs[k] == 0]
    if not on:
        return True
    if len(on) == 1:
        k = on[0]
        along = pt.side(cell.tangents[k], 0)
        if along > 0:
            return True
        if along == 0:
            return k <= m // 2 - 1
        return False
    # a vertex: edges k-1 and k meet at v_k
    if len(on) != 2:
        raise AssertionError("point lies on more than two edges")
    a, b = on
    k = b if (a + 1) % m == b else a
    return 1 <= k <= m // 3


@dataclass(frozen=True)
class LatticeFraction:
    lattice_part: RingElement
    fractional_part: object  # FieldElement or AlgebraicPoint


def frac_ztau(pt, order: IQOrder | None = None) -> LatticeFraction:
    """Split ``pt`` as u + v with u in Z[tau] and v in the restricted cell."""
    order = _order_of(pt, order)
    pt = point_of(pt, order)
    if isinstance(pt, FieldElement):
        s, t = pt.basis_coords_exact()
        s0, t0 = round(s), round(t)
    else:
        sf, tf = pt.basis_coords(order)
        s0, t0 = round(sf), round(tf)
    tt = order.reduced_tau
    found = []
    for dt in (-1, 0, 1):
        for ds in (-1, 0, 1):
            u = (s0 + ds) + (t0 + dt) * tt
            if in_restricted_cell(pt.translate(-u), order):
                found.append(u)
    if len(found) != 1:
        raise AssertionError(f"fractional part search found {len(found)} candidates")
    u = found[0]
    return LatticeFraction(u, pt.translate(-u))


def round_ztau(pt, order: IQOrder | None = None) -> RingElement:
    return frac_ztau(pt, order).lattice_part
