"""The fundamental domain F of fractional w-NAF values and the characteristic sets of single digits.

Sets of word values are kept as lattice points: the values of all words with support in
{-1, ..., -l} are tau^(-l) times a finite subset of Z[tau].  Scaling everything by
tau^l turns set identities into exact comparisons of integer pairs.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .blockstats import BlockStats, count_nafs
from .bounds import f_upper, k0
from .cells import CellSet
from .digitset import DigitSet
from .geometry import in_cell, round_ztau, voronoi_cell
from .naf import expand_raw, naf_strings
from .ring import FieldElement, IQOrder, QSqrtD, RingElement, embed, residue_key
from .svg import polygons_svg

MAX_RENDER_CELLS = 10 ** 6


def _horner_ab(p: int, q: int, digits) -> tuple[int, int]:
    """sum digits[i] tau^(n-1-i) for a most-significant-first digit tuple."""
    a = b = 0
    for d in digits:
        a, b = -q * b, a + p * b
        if d:
            a += d.a
            b += d.b
    return a, b


def scaled_values(ds: DigitSet, ell: int) -> list[tuple[int, int]]:
    """tau^ell * value(xi) for every word xi with support in {-1, ..., -ell}."""
    p, q = ds.order.p, ds.order.q
    return [_horner_ab(p, q, s) for s in naf_strings(ell, ds.w, ds.nonzero)]


# characteristic sets ----------------------------------------------------------


@dataclass(frozen=True)
class CharApprox:
    eta: RingElement
    j: int
    w: int
    cells: CellSet  # scale j + w

    def __len__(self) -> int:
        return len(self.cells)

    def translated_inside_cell(self) -> bool:
        """Every cell, shifted by -eta tau^(-w), lies in the closed Voronoi cell of 0."""
        s = self.j + self.w
        shift = FieldElement.from_ring(self.eta).div_tau(self.w)
        verts = voronoi_cell(self.eta.order).vertices
        return all(in_cell(v.translate(c).div_tau(s) - shift) for c in self.cells for v in verts)


def charset_approx(ds: DigitSet, eta: RingElement, j: int) -> CharApprox:
    """Cells tau^(-(j+w)) (c + V) with c = tau^(j+w) value(xi), xi_{-w} = eta."""
    if eta not in set(ds.nonzero):
        raise ValueError(f"{eta} is not a nonzero digit")
    if j < 0:
        raise ValueError("j must be non-negative")
    order, w = ds.order, ds.w
    top = eta * order.tau ** j
    free = max(0, j - w + 1)
    centers = frozenset(top + order(a, b) for a, b in scaled_values(ds, free))
    return CharApprox(eta, j, w, CellSet(centers, j + w))


@lru_cache(maxsize=None)
def _charset_keys(ds: DigitSet, eta_ab: tuple[int, int], j: int) -> frozenset:
    eta = ds.order(*eta_ab)
    ca = charset_approx(ds, eta, j)
    return frozenset(residue_key(c, j + ds.w) for c in ca.cells)


def charset_contains(ds: DigitSet, eta: RingElement, j: int, v) -> bool:
    """Membership of a point of the Voronoi cell in the fractional-part image of the j-th approximation."""
    order = ds.order
    s = j + ds.w
    if isinstance(v, RingElement):
        v = FieldElement.from_ring(v)
    if isinstance(v, FieldElement):
        x = v.mul_tau(s)
    else:
        x = v * embed(order.tau ** s)
    c = round_ztau(x, order)
    return residue_key(c, s) in _charset_keys(ds, (eta.a, eta.b), j)


def beta_coefficient(q: int, w: int, j: int) -> Fraction:
    """beta_j divided by the area of the Voronoi cell."""
    e_w = BlockStats(q, w).e_w
    if j < w - 1:
        return Fraction(1, q ** (j + w)) - e_w
    return Fraction(count_nafs(j - w + 1, q, w), q ** (j + w)) - e_w


def beta(ds: DigitSet, eta: RingElement, j: int) -> QSqrtD:
    """Area of the j-th approximation minus the area of its limit (eta plays no role)."""
    return ds.order.im_tau * beta_coefficient(ds.order.q, ds.w, j)


def lambda_F(order: IQOrder, w: int) -> QSqrtD:
    """Lebesgue measure of F: q^w Im(tau) / ((q - 1) w + 1)."""
    q = order.q
    return order.im_tau * Fraction(q ** w, (q - 1) * w + 1)


def lambda_F_approx(order: IQOrder, w: int, ell: int) -> QSqrtD:
    """Area of the union of the C_ell cells tau^(-ell)(c + V) approximating F."""
    q = order.q
    return order.im_tau * Fraction(count_nafs(ell, q, w), q ** ell)


# rendering --------------------------------------------------------------------

_PALETTE = {"first": "#c0392b", "window": "#2471a3", "none": "#d5d8dc", "plain": "#34495e"}


def render(ds: DigitSet, ell: int, mode: str = "digits", out=None) -> str:
    """SVG of the cells value(xi) + tau^(-ell) V over all words of right-length at most ell.

    In ``digits`` mode a cell is coloured by whether the first digit after the point,
    or the w-th one, is nonzero.
    """
    if count_nafs(ell, ds.order.q, ds.w) > MAX_RENDER_CELLS:
        raise ValueError("too many cells to render")
    if mode not in ("digits", "plain"):
        raise ValueError(f"unknown mode {mode!r}")
    order, w = ds.order, ds.w
    t = order.tau.complex() ** ell
    verts = [v.complex() for v in voronoi_cell(order).vertices]
    p, q = order.p, order.q
    h = math.sqrt(order.D) / 2
    polys = []
    for s in naf_strings(ell, w, ds.nonzero):
        a, b = _horner_ab(p, q, s)
        c = complex(a + b * p / 2, b * h)
        if mode == "plain":
            colour = _PALETTE["plain"]
        elif ell >= 1 and s[0]:
            colour = _PALETTE["first"]
        elif ell >= w and s[w - 1]:
            colour = _PALETTE["window"]
        else:
            colour = _PALETTE["none"]
        polys.append(([(c + v) / t for v in verts], colour))
    doc = polygons_svg(polys, title=f"tau^2 - {p} tau + {q}, w = {w}, l = {ell}")
    if out is not None:
        if hasattr(out, "write"):
            out.write(doc)
        else:
            with open(out, "w", encoding="utf-8") as fh:
                fh.write(doc)
    return doc


# iterated function system -----------------------------------------------------


@dataclass(frozen=True)
class IfsReport:
    ell: int
    equal: bool
    disjoint: bool
    size: int
    ratios: dict


def ifs_check(ds: DigitSet, ell: int) -> IfsReport:
    """Compare the level-ell value set with the images of lower levels under the IFS maps.

    f_0(z) = z / tau maps level ell - 1 into level ell; f_d(z) = d / tau + z / tau^w maps
    level ell - w (the point 0 when ell < w) into level ell.
    """
    if ell < 1:
        raise ValueError("ell must be positive")
    order, w = ds.order, ds.w
    target = set(scaled_values(ds, ell))
    pieces = [set(scaled_values(ds, ell - 1))]
    lower = scaled_values(ds, ell - w) if ell >= w else [(0, 0)]
    lift = order.tau ** (ell - 1)
    for d in ds.nonzero:
        off = d * lift
        pieces.append({(off.a + a, off.b + b) for a, b in lower})
    union = set().union(*pieces)
    disjoint = sum(len(x) for x in pieces) == len(union)
    ratios = {"zero": order.q ** -0.5, "nonzero": order.q ** (-w / 2)}
    return IfsReport(ell, union == target, disjoint, len(target), ratios)


# tiling -----------------------------------------------------------------------


@dataclass
class TilingReport:
    K: int
    ell: int
    samples: int
    certain_counts: list = field(default_factory=list)
    flagged: list = field(default_factory=list)
    scales_seen: set = field(default_factory=set)

    @property
    def ok(self) -> bool:
        return all(c == 1 for c in self.certain_counts)


def _near_lattice(order: IQOrder, x: FieldElement, radius: float) -> list[RingElement]:
    """Lattice points within (approximately, erring large) the given distance of x."""
    c0 = round_ztau(x, order)
    reach = radius + math.sqrt(float(voronoi_cell(order).circumradius_sq())) + 1e-9
    xc = x.complex()
    out = []
    h = math.sqrt(order.D) / 2
    bmax = int(reach / h) + 1
    for db in range(-bmax, bmax + 1):
        for da in range(-int(reach) - abs(db) * abs(order.p) - 2, int(reach) + abs(db) * abs(order.p) + 3):
            g = c0 + order(da, db)
            if abs(g.complex() - xc) <= radius + 1e-9:
                out.append(g)
    return out


def _max_index(ds: DigitSet, z: RingElement) -> int | None:
    raw = expand_raw(ds, z.a, z.b)
    return max(raw) if raw else None


def _tile_membership(ds: DigitSet, z_num: RingElement, L: int, k: int, c: RingElement, ell: int):
    """(exact, approximate) membership of z = tau^(-L) z_num in tau^k c + tau^(k-w+1) F.

    Exact membership is read off the finite expansion.  The approximate one replaces F
    by its level-ell cell union.
    """
    order, w = ds.order, ds.w
    # y = tau^(w-1-k) (z - tau^k c) = tau^(w-1-k-L) m
    m = z_num - order.tau ** (k + L) * c
    e = w - 1 - k - L
    top = _max_index(ds, m)
    exact = top is None or top + e < 0
    g = round_ztau(FieldElement.from_ring(m).mul_tau(ell + e), order)
    t = _max_index(ds, g)
    return exact, t is None or t <= ell - 1


def tiling_check(
    ds: DigitSet,
    K: int = 0,
    window: float = 3.0,
    samples: int = 100,
    ell: int = 8,
    depth: int = 6,
    seed: int = 0,
    points: list | None = None,
) -> TilingReport:
    """Locate points of tau^(-depth) Z[tau] in the tiling by scaled copies of F.

    Tiles are tau^k value(xi) + tau^(k-w+1) F for K <= k < K + w, where xi is a finite
    integer word whose lowest digit is nonzero unless k = K + w - 1.  For each point the
    tiles containing it are counted exactly; the point is flagged as near a tile boundary
    when the level-ell cell approximations of the tiles disagree with the exact answer.
    Points are random in the disc of the given radius unless ``points`` (elements of
    Z[tau], to be divided by tau^depth) are supplied.
    """
    order, w = ds.order, ds.w
    L = max(depth, -K)
    fu = f_upper(ds)
    rep = TilingReport(K, ell, samples)
    if points is None:
        rng = random.Random(seed)
        R = window * order.abs_tau ** L
        h = math.sqrt(order.D) / 2
        points = []
        while len(points) < samples:
            b = rng.randint(-int(R / h) - 1, int(R / h) + 1)
            a = rng.randint(-int(R) - abs(order.p * b), int(R) + abs(order.p * b))
            if abs(order(a, b).complex()) <= R:
                points.append(order(a, b))
    else:
        points = [order(1) * z for z in points]
        points = [z * order.tau ** (L - depth) for z in points]
    rep.samples = len(points)
    radius = fu * order.abs_tau ** (1 - w)
    for z_num in points:
        z = FieldElement.from_ring(z_num).div_tau(L)
        certain, disagree = 0, False
        for k in range(K, K + w):
            for c in _near_lattice(order, z.div_tau(k), radius):
                if k != K + w - 1 and (not c or c.divides_tau()):
                    continue
                exact, approx = _tile_membership(ds, z_num, L, k, c, ell)
                if exact:
                    certain += 1
                    rep.scales_seen.add(k)
                disagree = disagree or exact != approx
        rep.certain_counts.append(certain)
        rep.flagged.append(disagree)
    return rep


# boundary automaton -----------------------------------------------------------


@dataclass(frozen=True)
class BoundaryAutomaton:
    """States: start, after-nonzero, and zero runs of length 1..k-1 (read right to left)."""

    k: int
    w: int
    num_nonzero: int
    matrix: np.ndarray  # row = from, column = to; index 0 start, 1 nonzero, 1 + r zero run r

    def core(self) -> np.ndarray:
        """The strongly connected part (without the start state)."""
        return self.matrix[1:, 1:]

    def cycle_lengths(self) -> list[int]:
        return list(range(self.w, self.k + 1))

    def walks(self, j: int) -> int:
        """Number of accepted words of length j (all states accept), exact."""
        M = [[int(x) for x in row] for row in self.matrix]
        v = [1] + [0] * (len(M) - 1)
        for _ in range(j):
            v = [sum(v[i] * M[i][c] for i in range(len(M))) for c in range(len(M))]
        return sum(v)


def zero_run_limit(w: int) -> int:
    return k0(w) + w - 1


def build_boundary_automaton(q: int, w: int, k: int | None = None) -> BoundaryAutomaton:
    k = zero_run_limit(w) if k is None else k
    nz = q ** (w - 1) * (q - 1)
    M = np.zeros((k + 1, k + 1), dtype=np.int64)
    M[0, 1] = nz
    M[1, 2] = 1
    for r in range(1, k):
        if r + 1 <= k - 1:
            M[1 + r, 2 + r] = 1
        if r >= w - 1:
            M[1 + r, 1] = nz
    return BoundaryAutomaton(k, w, nz, M)


class ConvergenceError(RuntimeError):
    pass


def dominant_eigenvalue(matrix: np.ndarray, tol: float = 1e-12, max_iter: int = 10 ** 5) -> float:
    """Perron root of a primitive nonnegative matrix by power iteration."""
    x = np.ones(matrix.shape[0])
    lam = 0.0
    A = matrix.astype(float)
    for _ in range(max_iter):
        y = A.T @ x
        new = float(np.linalg.norm(y, 1) / np.linalg.norm(x, 1))
        x = y / np.linalg.norm(y, 1)
        if abs(new - lam) <= tol * new:
            return new
        lam = new
    raise ConvergenceError("power iteration did not converge")


def relative_gap(q: int, w: int, k: int | None = None, digits: int = 60) -> Decimal:
    """1 - Lambda/q to high precision, Lambda the root of 1 = K * sum_{r=w..k} x^(-r).

    Floats cannot see the gap for larger q and w, so the sign is decided here.
    """
    k = zero_run_limit(w) if k is None else k
    K = q ** (w - 1) * (q - 1)
    with localcontext() as ctx:
        ctx.prec = digits + 10
        x = Decimal(q)
        for _ in range(200):
            f = K * sum(x ** -r for r in range(w, k + 1)) - 1
            df = -K * sum(r * x ** (-r - 1) for r in range(w, k + 1))
            step = f / df
            x -= step
            if abs(step) < Decimal(10) ** (-digits):
                break
        return +(1 - x / q)


def u_counts(q: int, w: int, n: int, k: int | None = None) -> list[int]:
    """|U_j| for j = 0..n: words of length j without a run of k zeros, from the generating function."""
    k = zero_run_limit(w) if k is None else k
    K = q ** (w - 1) * (q - 1)
    # numerator (1 + Z + ... + Z^(k-1)) * (1 + (K-1) Z - K Z^w)
    f = {0: 1, 1: K - 1}
    f[w] = f.get(w, 0) - K
    num = [0] * (n + 1)
    for i in range(k):
        for e, c in f.items():
            if i + e <= n:
                num[i + e] += c
    u = []
    for j in range(n + 1):
        v = num[j]
        if j >= 1:
            v += u[j - 1]
        if j >= w:
            v += K * u[j - w]
        if j >= k + 1:
            v -= K * u[j - k - 1]
        u.append(v)
    return u


@dataclass(frozen=True)
class DimensionReport:
    eigenvalue: float
    sigma: float
    gap: Decimal  # 1 - sigma
    bound: float
    sign_value: Fraction  # q(1/|tau|^2), positive
    growth_rate: float


def denominator_at_inverse_norm(q: int, w: int, k: int | None = None) -> Fraction:
    """1 - Z - K Z^w + K Z^(k+1) at Z = 1/q, computed from the polynomial itself."""
    k = zero_run_limit(w) if k is None else k
    K = q ** (w - 1) * (q - 1)
    Z = Fraction(1, q)
    return 1 - Z - K * Z ** w + K * Z ** (k + 1)


def dim_upper_bound(ds: DigitSet | None = None, q: int | None = None, w: int | None = None) -> DimensionReport:
    """2 + log_|tau| sigma, where sigma |tau|^2 is the growth rate of boundary-candidate words."""
    if ds is not None:
        q, w = ds.order.q, ds.w
    aut = build_boundary_automaton(q, w)
    lam = dominant_eigenvalue(aut.core())
    gap = relative_gap(q, w)
    if gap <= 0:
        raise ConvergenceError("no gap below |tau|^2")
    sigma = lam / q
    bound = 2 + 2 * math.log1p(-float(gap)) / math.log(q)
    u = u_counts(q, w, 4000)
    growth = u[-1] / u[-2]
    return DimensionReport(lam, sigma, gap, bound, denominator_at_inverse_norm(q, w), growth)
