"""Upper and lower bounds for values of fractional w-NAFs, and the derived length bound."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .digitset import DigitSet, build_digit_set
from .geometry import C_V_SQ, voronoi_cell
from .naf import horner, naf_strings
from .ring import FieldElement, QSqrtD, make_order

SEARCH_CAP = 32
APPROX_CAP = 40


class SearchFailed(RuntimeError):
    pass


def _tau_power_minus_one_sq(q: int, w: int) -> QSqrtD:
    """(|tau|^w - 1)^2 in Q(sqrt(q))."""
    if w % 2 == 0:
        return QSqrtD(Fraction(q ** (w // 2) - 1) ** 2, 0, q)
    c = q ** ((w - 1) // 2)
    return QSqrtD(c * c * q + 1, -2 * c, q)


def f_upper_sq(q: int, w: int) -> QSqrtD:
    """f_U^2 = q^(2w) c_V^2 / (|tau|^w - 1)^2, exact."""
    return QSqrtD(Fraction(q ** (2 * w)) * C_V_SQ, 0, q) / _tau_power_minus_one_sq(q, w)


def f_upper_value(q: int, w: int) -> float:
    t = math.sqrt(q)
    return t ** w * math.sqrt(C_V_SQ) / (1 - t ** (-w))


def compute_nu(q: int, w: int) -> float:
    t = math.sqrt(q)
    return 0.5 - t * math.sqrt(C_V_SQ) / (t ** w - 1)


def nu_is_positive(q: int, w: int) -> bool:
    # nu > 0  <=>  (|tau|^w - 1)^2 > 4 q c_V^2
    return _tau_power_minus_one_sq(q, w) > 4 * q * C_V_SQ


def k0(w: int) -> int:
    return max(19, 2 * w + 5)


def _values(ds: DigitSet, ell: int, leading_nonzero: bool = False):
    """Exact values of all words with support in {-1..-ell}."""
    order = ds.order
    for s in naf_strings(ell, ds.w, ds.nonzero):
        if leading_nonzero and not s[0]:
            continue
        support = {-1 - i: d for i, d in enumerate(s) if d}
        num, r = horner(order, support)
        v = FieldElement.from_ring(num)
        # horner scales by the right-length; normalise to scale ell
        yield v.div_tau(r) if r else v


def _edge_normals(ds: DigitSet) -> list:
    """Normals m_k with tau^(2w-1) V = {z : 2 Re(z conj m_k) <= |m_k|^2}."""
    cell = voronoi_cell(ds.order)
    t = ds.order.tau ** (2 * ds.w - 1)
    return [t * n for n in cell.neighbors]


@dataclass(frozen=True)
class BallSearch:
    ell: int
    radius: float
    margin: float


def _ball_search(ds: DigitSet, factor: int, strict: bool, start: int, cap: int) -> BallSearch:
    q, w = ds.order.q, ds.w
    fu_sq = f_upper_sq(q, w)
    normals = [(m, m.norm()) for m in _edge_normals(ds)]
    for ell in range(start, cap + 1):
        r_sq = fu_sq * Fraction(factor * factor, q ** ell)
        r = math.sqrt(float(r_sq))
        ok = True
        margin = math.inf
        for v in _values(ds, ell):
            for m, mm in normals:
                # distance to the edge line is h / (2|m|)
                h = mm - 2 * v.dot(m)
                bound = 4 * mm * r_sq
                if h <= 0 or (bound >= h * h if strict else bound > h * h):
                    ok = False
                    break
                margin = min(margin, float(h) / (2 * math.sqrt(mm)) - r)
            if not ok:
                break
        if ok:
            return BallSearch(ell, r, margin)
    raise SearchFailed(f"no admissible ell up to {cap}")


@lru_cache(maxsize=None)
def upper_search(ds: DigitSet, cap: int = SEARCH_CAP) -> BallSearch:
    """Smallest ell with every value ball of radius |tau|^-ell f_U inside tau^(2w-1) int V."""
    return _ball_search(ds, 1, True, 0, cap)


@lru_cache(maxsize=None)
def approx_search(ds: DigitSet, cap: int = APPROX_CAP) -> BallSearch:
    """Smallest k with every ball of radius 2|tau|^-k f_U inside the closed tau^(2w-1) V."""
    return _ball_search(ds, 2, False, 0, cap)


@dataclass(frozen=True)
class LowerSearch:
    ell: int
    radius: float
    nu_tilde: float


@lru_cache(maxsize=None)
def lower_search(ds: DigitSet, cap: int = SEARCH_CAP) -> LowerSearch:
    """Smallest ell such that words with nonzero leading digit have |value| > |tau|^-ell f_U."""
    q, w = ds.order.q, ds.w
    fu_sq = f_upper_sq(q, w)
    for ell in range(1, cap + 1):
        r_sq = fu_sq * Fraction(1, q ** ell)
        r = math.sqrt(float(r_sq))
        ok = True
        best = math.inf
        for v in _values(ds, ell, leading_nonzero=True):
            a2 = v.abs_sq()
            if r_sq >= a2:
                ok = False
                break
            best = min(best, math.sqrt(a2) - r)
        if ok:
            return LowerSearch(ell, r, best)
    raise SearchFailed(f"no admissible ell up to {cap}")


def f_upper(ds: DigitSet) -> float:
    return f_upper_value(ds.order.q, ds.w)


def is_problematic(q: int, w: int) -> bool:
    return not nu_is_positive(q, w)


def f_lower(ds: DigitSet) -> float:
    q, w = ds.order.q, ds.w
    if nu_is_positive(q, w):
        return compute_nu(q, w)
    return lower_search(ds).nu_tilde


def log_tau(x: float, q: int) -> float:
    return 2 * math.log(x) / math.log(q)


def floor_log_tau(x, q: int) -> int:
    """floor(log_|tau| x), exact whenever x is rational."""
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        if x <= 0:
            raise ValueError("logarithm of a non-positive number")
        k = math.floor(log_tau(float(x), q))
        x2 = x * x
        while Fraction(q) ** k > x2:
            k -= 1
        while Fraction(q) ** (k + 1) <= x2:
            k += 1
        return k
    return math.floor(log_tau(x, q))


def length_constant(d: float, ds: DigitSet) -> int:
    """c = floor(log d - log f_L) + 1, logarithms to base |tau|."""
    q = ds.order.q
    return math.floor(log_tau(d, q) - log_tau(f_lower(ds), q)) + 1


def expansion_length_bound(N, d, ds: DigitSet) -> int:
    """J = floor(log N) + c: lattice points of norm below (N d)^2 need at most J + 1 digits."""
    return floor_log_tau(N, ds.order.q) + length_constant(d, ds)


@dataclass(frozen=True)
class BoundsProfile:
    p: int
    q: int
    w: int
    f_U: float
    nu: float
    f_L: float
    problematic: bool
    upper: BallSearch | None = None
    lower: LowerSearch | None = None
    approx: BallSearch | None = None


def bounds_profile(ds: DigitSet, searches: bool | None = None) -> BoundsProfile:
    q, w = ds.order.q, ds.w
    prob = is_problematic(q, w)
    run = prob if searches is None else searches
    return BoundsProfile(
        ds.order.p,
        q,
        w,
        f_upper(ds),
        compute_nu(q, w),
        f_lower(ds),
        prob,
        upper_search(ds) if run else None,
        lower_search(ds) if run else None,
        approx_search(ds) if run else None,
    )


def problematic_pairs() -> list[tuple[int, int]]:
    """(q, w) with nu <= 0; nu increases in both q and w, so a small scan is exhaustive."""
    return [(q, w) for q in range(2, 8) for w in range(2, 6) if is_problematic(q, w)]


def problematic_profiles() -> list[BoundsProfile]:
    out = []
    for q, w in problematic_pairs():
        r = math.isqrt(4 * q - 1)
        for p in range(-r, r + 1):
            if p * p < 4 * q:
                out.append(bounds_profile(build_digit_set(make_order(p, q), w), True))
    return out
