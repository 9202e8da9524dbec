"""Cell rounding of discs and convex polygons against the Voronoi tiling of tau^(-j) Z[tau].

Regions carry exact coordinates in Q(sqrt(D)).  Enumeration walks the lattice row by
row using floating-point extents; every decision that floats cannot settle with a
comfortable margin is redone exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .geometry import voronoi_cell
from .ring import AlgebraicPoint, IQOrder, QSqrtD, embed

# float decisions closer than this to a boundary are re-checked exactly
_TOL = 1e-7


def _pt(x, y, D: int) -> AlgebraicPoint:
    def lift(c):
        return c if isinstance(c, QSqrtD) else QSqrtD(Fraction(c), 0, D)

    return AlgebraicPoint(lift(x), lift(y))


def _cross(o: AlgebraicPoint, a: AlgebraicPoint, b: AlgebraicPoint) -> QSqrtD:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


class Region:
    """A closed disc or convex polygon (counter-clockwise vertices) in the plane."""

    def __init__(
        self,
        kind: str,
        D: int,
        center: AlgebraicPoint | None = None,
        radius_sq: Fraction | None = None,
        vertices: tuple[AlgebraicPoint, ...] = (),
    ):
        self.kind = kind
        self.D = D
        self.center = center
        self.radius_sq = radius_sq
        self.vertices = tuple(vertices)
        if kind == "disc":
            self._c = center.complex()
            self._r = math.sqrt(radius_sq)
        elif kind == "polygon":
            self._v = [v.complex() for v in self.vertices]
            self._edges = []
            n = len(self._v)
            for k in range(n):
                a, b = self._v[k], self._v[(k + 1) % n]
                e = b - a
                length = abs(e)
                # inward unit normal for a ccw polygon
                self._edges.append((a, complex(-e.imag, e.real) / length))
        else:
            raise ValueError(f"unknown region kind {kind!r}")

    # construction ---------------------------------------------------------

    @classmethod
    def disc(cls, order: IQOrder, cx=0, cy=0, radius_sq=1) -> Region:
        radius_sq = Fraction(radius_sq)
        if radius_sq <= 0:
            raise ValueError("disc radius must be positive")
        return cls("disc", order.D, _pt(cx, cy, order.D), radius_sq)

    @classmethod
    def polygon(cls, order: IQOrder, points) -> Region:
        D = order.D
        vs = tuple(p if isinstance(p, AlgebraicPoint) else _pt(p[0], p[1], D) for p in points)
        if len(vs) < 3:
            raise ValueError("a polygon needs at least three vertices")
        n = len(vs)
        for k in range(n):
            if _cross(vs[k], vs[(k + 1) % n], vs[(k + 2) % n]).sign() <= 0:
                raise ValueError("polygon must be convex, counter-clockwise and non-degenerate")
        return cls("polygon", D, vertices=vs)

    def scaled(self, N) -> Region:
        N = Fraction(N)
        if N == 0:
            zero = _pt(0, 0, self.D)
            return Region("disc", self.D, zero, Fraction(0))
        if self.kind == "disc":
            return Region("disc", self.D, self.center * N, self.radius_sq * N * N)
        # N < 0 is a half turn, which keeps the orientation
        return Region("polygon", self.D, vertices=tuple(v * N for v in self.vertices))

    def tau_transform(self, order: IQOrder, j: int) -> Region:
        """The image under multiplication by tau^j."""
        if j == 0:
            return self
        base = embed(order.tau) if j > 0 else embed(order.tau.conj()) * Fraction(1, order.q)
        factor = _pt(1, 0, self.D)
        for _ in range(abs(j)):
            factor = factor * base
        if self.kind == "disc":
            r_sq = self.radius_sq * Fraction(order.q) ** j
            return Region("disc", self.D, self.center * factor, r_sq)
        return Region("polygon", self.D, vertices=tuple(v * factor for v in self.vertices))

    # geometry -------------------------------------------------------------

    def contains(self, pt: AlgebraicPoint) -> bool:
        """Exact membership in the closed region."""
        if self.kind == "disc":
            return (pt - self.center).abs_sq() <= self.radius_sq
        n = len(self.vertices)
        return all(_cross(self.vertices[k], self.vertices[(k + 1) % n], pt).sign() >= 0 for k in range(n))

    def margin(self, z: complex) -> float:
        """Signed distance-like value: positive inside, zero on the boundary."""
        if self.kind == "disc":
            return self._r - abs(z - self._c)
        return min(((z - a) * n.conjugate()).real for a, n in self._edges)

    def y_range(self, pad: float) -> tuple[float, float]:
        if self.kind == "disc":
            return self._c.imag - self._r - pad, self._c.imag + self._r + pad
        ys = [v.imag for v in self._v]
        return min(ys) - pad, max(ys) + pad

    def x_range(self, y: float, pad: float) -> tuple[float, float] | None:
        """x with (x, y) in the region grown by pad, approximately."""
        if self.kind == "disc":
            rr = (self._r + pad) ** 2 - (y - self._c.imag) ** 2
            if rr < 0:
                return None
            s = math.sqrt(rr)
            return self._c.real - s, self._c.real + s
        lo, hi = -math.inf, math.inf
        for a, n in self._edges:
            # n.x * x + n.y * y >= n . a - pad
            rhs = (a * n.conjugate()).real - pad - n.imag * y
            if abs(n.real) < 1e-15:
                if rhs > 1e-12:
                    return None
                continue
            bound = rhs / n.real
            if n.real > 0:
                lo = max(lo, bound)
            else:
                hi = min(hi, bound)
        if lo > hi:
            return None
        return lo, hi

    def measure(self) -> float:
        """Lebesgue measure."""
        if self.kind == "disc":
            return math.pi * float(self.radius_sq)
        n = len(self._v)
        return 0.5 * sum((self._v[k].conjugate() * self._v[(k + 1) % n]).imag for k in range(n))

    def __repr__(self) -> str:
        if self.kind == "disc":
            return f"Region(disc, center={self._c}, radius_sq={self.radius_sq})"
        return f"Region(polygon, {self._v})"


def _segment_dist_sq_le(c: AlgebraicPoint, a: AlgebraicPoint, b: AlgebraicPoint, r_sq) -> bool:
    """Exact test dist(c, [a, b])^2 <= r_sq."""
    ab = b - a
    ac = c - a
    t = ac.dot(ab)
    ll = ab.abs_sq()
    if t.sign() <= 0:
        return ac.abs_sq() <= r_sq
    if t >= ll:
        return (c - b).abs_sq() <= r_sq
    # |ac|^2 - t^2/|ab|^2
    return ac.abs_sq() * ll - t * t <= r_sq * ll


def _separated(p1: list[AlgebraicPoint], p2: list[AlgebraicPoint]) -> bool:
    """Separating axis test for closed convex polygons (touching is not separated)."""
    for poly in (p1, p2):
        n = len(poly)
        for k in range(n):
            a, b = poly[k], poly[(k + 1) % n]
            nx, ny = -(b.y - a.y), b.x - a.x
            proj1 = [v.x * nx + v.y * ny for v in p1]
            proj2 = [v.x * nx + v.y * ny for v in p2]
            if max(proj1) < min(proj2) or max(proj2) < min(proj1):
                return True
    return False


def meets_boundary(region: Region, corners: list[AlgebraicPoint]) -> bool:
    """Exact test whether the closed cell polygon meets the boundary curve of the region."""
    if region.kind == "disc":
        c = region.center
        far = max((v - c).abs_sq() for v in corners)
        return _cell_meets(region, corners) and far >= region.radius_sq
    vs = region.vertices
    return any(not _separated(corners, [vs[k], vs[(k + 1) % len(vs)]]) for k in range(len(vs)))


def _cell_meets(region: Region, corners: list[AlgebraicPoint]) -> bool:
    if region.kind == "disc":
        c = region.center
        n = len(corners)
        if all(_cross(corners[k], corners[(k + 1) % n], c).sign() >= 0 for k in range(n)):
            return True
        return any(
            _segment_dist_sq_le(c, corners[k], corners[(k + 1) % n], region.radius_sq) for k in range(n)
        )
    return not _separated(corners, list(region.vertices))


@dataclass(frozen=True)
class CellSet:
    """Lattice cells tau^(-scale) (z + V), stored by their centers z in Z[tau]."""

    centers: frozenset
    scale: int = 0

    def __len__(self) -> int:
        return len(self.centers)

    def __contains__(self, z) -> bool:
        return z in self.centers

    def __iter__(self):
        return iter(self.centers)

    def issubset(self, other: CellSet) -> bool:
        return self.scale == other.scale and self.centers <= other.centers

    def values(self) -> list[complex]:
        """Float positions tau^(-scale) z of the cell centers."""
        out = []
        for z in self.centers:
            t = complex(z.order.tau.complex()) ** self.scale
            out.append(z.complex() / t)
        return out


def lattice_rows(order: IQOrder, region: Region, pad: float = 0.0) -> Iterator[tuple[int, int, int]]:
    """(b, a_lo, a_hi): candidate lattice points a + b*tau near the region grown by pad."""
    p, D = order.p, order.D
    h = math.sqrt(D) / 2
    ylo, yhi = region.y_range(pad + 1e-9)
    for b in range(math.floor(ylo / h) - 1, math.ceil(yhi / h) + 2):
        xr = region.x_range(b * h, pad + 1e-9)
        if xr is None:
            continue
        lo, hi = xr
        shift = b * p / 2
        yield b, math.floor(lo - shift) - 1, math.ceil(hi - shift) + 1


def _complex_of(a: int, b: int, p: int, h: float) -> complex:
    return complex(a + b * p / 2, b * h)


def cover_ab(order: IQOrder, region: Region) -> Iterator[tuple[int, int]]:
    """Coordinates (a, b) of all lattice points a + b*tau in the closed region."""
    p = order.p
    h = math.sqrt(order.D) / 2
    for b, lo, hi in lattice_rows(order, region):
        for a in range(lo, hi + 1):
            m = region.margin(_complex_of(a, b, p, h))
            if m > _TOL or (m > -_TOL and region.contains(embed(order(a, b)))):
                yield a, b


def _classify(order: IQOrder, region: Region):
    """Yield (z, in_floor, in_ceil) for every cell that could meet the region."""
    cell = voronoi_cell(order)
    R = math.sqrt(cell.circumradius_sq())
    corners0 = [v.to_point() for v in cell.vertices]
    p = order.p
    h = math.sqrt(order.D) / 2
    for b, lo, hi in lattice_rows(order, region, R):
        for a in range(lo, hi + 1):
            m = region.margin(_complex_of(a, b, p, h))
            if m > R + _TOL:
                yield order(a, b), True, True
                continue
            if m < -R - _TOL:
                continue
            z = order(a, b)
            e = embed(z)
            corners = [e + c for c in corners0]
            inside = all(region.contains(c) for c in corners)
            yield z, inside, inside or _cell_meets(region, corners)


def _scaled_region(order: IQOrder, region: Region, j: int) -> Region:
    return region.tau_transform(order, j)


def floor_cells(order: IQOrder, region: Region, j: int = 0) -> CellSet:
    """Cells of scale j contained in the region."""
    reg = _scaled_region(order, region, j)
    return CellSet(frozenset(z for z, f, _ in _classify(order, reg) if f), j)


def ceil_cells(order: IQOrder, region: Region, j: int = 0) -> CellSet:
    """Cells of scale j meeting the closed region."""
    reg = _scaled_region(order, region, j)
    return CellSet(frozenset(z for z, _, c in _classify(order, reg) if c), j)


def boundary_cells(order: IQOrder, region: Region, j: int = 0) -> CellSet:
    reg = _scaled_region(order, region, j)
    return CellSet(frozenset(z for z, f, c in _classify(order, reg) if c and not f), j)


def cover_cells(order: IQOrder, region: Region, j: int = 0) -> CellSet:
    """Cells of scale j whose center lies in the region."""
    reg = _scaled_region(order, region, j)
    return CellSet(frozenset(order(a, b) for a, b in cover_ab(order, reg)), j)


def card(order: IQOrder, region: Region, j: int = 0) -> int:
    """Number of points of tau^(-j) Z[tau] in the closed region."""
    reg = _scaled_region(order, region, j)
    return sum(1 for _ in cover_ab(order, reg))


def shell_count(order: IQOrder, region: Region, N) -> int:
    """Lattice points in (N+1)U but not in NU."""
    N = Fraction(N)
    inner = region.scaled(N)
    outer = region.scaled(N + 1)
    p = order.p
    h = math.sqrt(order.D) / 2
    count = 0
    for a, b in cover_ab(order, outer):
        m = inner.margin(_complex_of(a, b, p, h))
        if m > _TOL:
            continue
        if m > -_TOL and inner.contains(embed(order(a, b))):
            continue
        count += 1
    return count


@dataclass(frozen=True)
class CardReport:
    N_grid: tuple
    residuals: tuple  # card(NU) - N^2 lambda(U) / lambda(V)
    scaled: tuple  # |residual| / N

    @property
    def max_scaled(self) -> float:
        return max(self.scaled)


def card_asymptotics_check(order: IQOrder, region: Region, N_grid) -> CardReport:
    lam_v = float(order.im_tau)
    lam_u = region.measure()
    res, sc = [], []
    for N in N_grid:
        r = card(order, region.scaled(N)) - float(N) ** 2 * lam_u / lam_v
        res.append(r)
        sc.append(abs(r) / float(N))
    return CardReport(tuple(N_grid), tuple(res), tuple(sc))
