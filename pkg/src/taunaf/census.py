"""Digit census over lattice points of a scaled region, and the computable parts of its asymptotics.

Areas enter the asymptotic formulas only through the ratio lambda(U) / lambda(V): the
number of lattice points in NU is about N^2 lambda(U) / lambda(V).  ``normalized_measure``
returns that ratio and every formula below uses it.
"""

from __future__ import annotations

import bisect
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate

from .blockstats import BlockStats, nonzero_digit_count
from .bounds import expansion_length_bound, length_constant, log_tau
from .cells import Region, cover_ab
from .digitset import DigitSet, build_digit_set
from .fractal import beta_coefficient, charset_approx, charset_contains
from .naf import expand_raw
from .ring import FieldElement, canonical_residues, make_order

DEFAULT_TAIL_TOL = 1e-10


def normalized_measure(ds: DigitSet, U: Region) -> float:
    """lambda(U) / lambda(V)."""
    return U.measure() / float(ds.order.im_tau)


def region_radius(U: Region) -> float:
    """Radius d of a disc around 0 containing U."""
    if U.kind == "disc":
        return abs(U.center.complex()) + math.sqrt(float(U.radius_sq))
    return max(abs(v.complex()) for v in U.vertices)


def main_term(ds: DigitSet, U: Region, N: float) -> float:
    """e_w N^2 (lambda(U) / lambda(V)) log_|tau| N."""
    if N <= 0:
        return 0.0
    e_w = float(BlockStats(ds.order.q, ds.w).e_w)
    return e_w * N * N * normalized_measure(ds, U) * log_tau(N, ds.order.q)


# exact census -----------------------------------------------------------------


@dataclass(frozen=True)
class CensusResult:
    N: Fraction
    Z: dict  # digit (a, b) -> occurrences
    main_term: float
    psi_hat: dict  # digit (a, b) -> (Z - main_term) / N^2
    lattice_points: int
    total_weight: int
    max_index: int  # highest digit position seen, -1 if only 0 was expanded


def _tally(args) -> tuple[Counter, int, int, int]:
    p, q, w, pts = args
    ds = build_digit_set(make_order(p, q), w)
    counts: Counter = Counter()
    weight = 0
    top = -1
    for a, b in pts:
        raw = expand_raw(ds, a, b)
        weight += len(raw)
        for j, d in raw.items():
            counts[d] += 1
            if j > top:
                top = j
    return counts, weight, top, len(pts)


def _batches(ds: DigitSet, region: Region, size: int = 20000):
    o = ds.order
    batch = []
    for ab in cover_ab(o, region):
        batch.append(ab)
        if len(batch) >= size:
            yield (o.p, o.q, ds.w, batch)
            batch = []
    if batch:
        yield (o.p, o.q, ds.w, batch)


def count_digits(ds: DigitSet, U: Region, N, workers: int = 1) -> CensusResult:
    """Occurrences of every nonzero digit over the expansions of all z in NU."""
    N = Fraction(N)
    if N < 0:
        raise ValueError("N must be non-negative")
    region = U.scaled(N)
    jobs = _batches(ds, region)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_tally, jobs))
    else:
        parts = [_tally(job) for job in jobs]
    counts: Counter = Counter()
    weight, top, points = 0, -1, 0
    for c, wt, t, n in parts:
        counts.update(c)
        weight += wt
        top = max(top, t)
        points += n
    Z = {(d.a, d.b): counts.get((d.a, d.b), 0) for d in ds.nonzero}
    mt = main_term(ds, U, float(N))
    nn = float(N) ** 2
    psi = {d: ((z - mt) / nn if nn else 0.0) for d, z in Z.items()}
    return CensusResult(N, Z, mt, psi, points, weight, top)


def length_sufficient(ds: DigitSet, U: Region, N) -> tuple[int, int]:
    """(highest digit index over NU, the length bound J); the bound holds when the first is at most J."""
    res = count_digits(ds, U, N)
    J = expansion_length_bound(N, region_radius(U), ds)
    return res.max_index, J


# asymptotic components --------------------------------------------------------


def psi_main(ds: DigitSet, U: Region, x: float) -> float:
    """Periodic contribution of the main part: (lambda(U)/lambda(V)) (c + 1 - {x}) e_w."""
    c = length_constant(region_radius(U), ds)
    e_w = float(BlockStats(ds.order.q, ds.w).e_w)
    return normalized_measure(ds, U) * (c + 1 - (x - math.floor(x))) * e_w


@dataclass(frozen=True)
class SeriesValue:
    value: float
    terms: int
    tail_bound: float


def beta_series(ds: DigitSet, tol: float = DEFAULT_TAIL_TOL, max_terms: int = 10 ** 5) -> SeriesValue:
    """sum_j beta_j / lambda(V), truncated once the geometric tail estimate drops below tol.

    The terms decay like rho^j.  The tail after term j is estimated by
    A rho^(j+1) / (1 - rho) with A the largest |beta_i| / rho^i seen so far.
    """
    q, w = ds.order.q, ds.w
    rho = float(BlockStats(q, w).rho)
    total = Fraction(0)
    envelope = 0.0
    for j in range(max_terms):
        b = beta_coefficient(q, w, j)
        total += b
        envelope = max(envelope, abs(float(b)) / rho ** j)
        tail = envelope * rho ** (j + 1) / (1 - rho)
        if j >= w and tail < tol:
            return SeriesValue(float(total), j + 1, tail)
    raise RuntimeError(f"beta series did not reach tolerance {tol} in {max_terms} terms")


def beta_series_exact(q: int, w: int) -> Fraction:
    """Closed form of sum_j beta_j / lambda(V) from the generating function of the block counts.

    With C(y) = (1 + K (y + ... + y^(w-1))) / (1 - y - K y^w) and x = q y, the sum is the
    constant term at x = 1 of C(x / q) - L / (1 - x), L = lim C_n / q^n.
    """
    K = nonzero_digit_count(q, w)
    e_w = BlockStats(q, w).e_w
    # P(x) = 1 + K sum_{i<w} (x/q)^i, Q(x) = 1 - x/q - K (x/q)^w, derivatives at x = 1
    P1 = 1 + K * sum(Fraction(1, q ** i) for i in range(1, w))
    dP = K * sum(Fraction(i, q ** i) for i in range(1, w))
    dQ = Fraction(-1, q) - Fraction(K * w, q ** w)
    ddQ = Fraction(-K * w * (w - 1), q ** w)
    tail_sum = dP / dQ - P1 * ddQ / (2 * dQ * dQ)
    head = sum(Fraction(1, q ** (j + w)) - e_w for j in range(w - 1))
    # beta_j / lambda(V) = C_n / q^(n + 2w - 1) - e_w with n = j - w + 1 >= 0
    return head + tail_sum / q ** (2 * w - 1)


def psi_other(ds: DigitSet, U: Region, tol: float = DEFAULT_TAIL_TOL) -> float:
    """(lambda(U)/lambda(V)) sum_j beta_j / lambda(V)."""
    return normalized_measure(ds, U) * beta_series(ds, tol).value


# fluctuation scan -------------------------------------------------------------


class _DiscCensus:
    """Cumulative digit tallies of all lattice points up to a radius, ordered by norm.

    For a disc centred at 0 every NU is a prefix of this list, so one pass serves a whole scan.
    """

    def __init__(self, ds: DigitSet, radius_sq: Fraction):
        o = ds.order
        region = Region.disc(o, 0, 0, radius_sq)
        pts = sorted((a * a + o.p * a * b + o.q * b * b, a, b) for a, b in cover_ab(o, region))
        self.norms = [n for n, _, _ in pts]
        self.digits = [(d.a, d.b) for d in ds.nonzero]
        per_digit = {d: [] for d in self.digits}
        for _, a, b in pts:
            row = Counter(expand_raw(ds, a, b).values())
            for d in self.digits:
                per_digit[d].append(row.get(d, 0))
        self.cum = {d: list(accumulate(v)) for d, v in per_digit.items()}

    def counts(self, norm_bound: float) -> tuple[int, dict]:
        i = bisect.bisect_right(self.norms, norm_bound)
        return i, {d: (self.cum[d][i - 1] if i else 0) for d in self.digits}


@dataclass
class FluctuationScan:
    base_N: float
    octaves: list
    phases: list
    psi_hat: dict = field(default_factory=dict)  # (m, f) -> mean over digits of psi_hat
    bound: float = 0.0

    def profile(self) -> list[tuple[float, float]]:
        """(phase, psi_hat at the largest octave)."""
        m = max(self.octaves)
        return [(f, self.psi_hat[(m, f)]) for f in self.phases]

    def spread(self, octaves) -> float:
        """Largest per-phase range of psi_hat over the given octaves."""
        return max(
            max(self.psi_hat[(m, f)] for m in octaves) - min(self.psi_hat[(m, f)] for m in octaves)
            for f in self.phases
        )

    def spreads(self) -> tuple[float, float]:
        """Spread over the lower and the upper half of the octaves."""
        ms = sorted(self.octaves)
        half = len(ms) // 2
        return self.spread(ms[: half + 1]), self.spread(ms[half:])

    def max_abs(self) -> float:
        return max(abs(v) for v in self.psi_hat.values())


def fluctuation_scan(ds: DigitSet, U: Region, base_N: float, octaves, phases) -> FluctuationScan:
    """psi_hat at N = base_N |tau|^(m + f) for a disc U centred at 0."""
    if U.kind != "disc" or U.center.complex() != 0:
        raise ValueError("the scan needs a disc centred at 0")
    octaves, phases = list(octaves), list(phases)
    t = ds.order.abs_tau
    r_sq = float(U.radius_sq)
    top = base_N * t ** (max(octaves) + max(phases))
    census = _DiscCensus(ds, Fraction(math.ceil(top * top * r_sq)))
    e_w = float(BlockStats(ds.order.q, ds.w).e_w)
    c = length_constant(region_radius(U), ds)
    scan = FluctuationScan(base_N, octaves, phases, bound=U.measure() * (c + 1) * e_w)
    for m in octaves:
        for f in phases:
            N = base_N * t ** (m + f)
            _, Z = census.counts(N * N * r_sq * (1 + 1e-15))
            mt = main_term(ds, U, N)
            scan.psi_hat[(m, f)] = sum((z - mt) / (N * N) for z in Z.values()) / len(Z)
    return scan


# exact identities -------------------------------------------------------------


@dataclass(frozen=True)
class BridgeReport:
    pairs: int
    mismatches: list


def bridge_check(ds: DigitSet, U: Region, N, samples: int = 500, seed: int = 0) -> BridgeReport:
    """Digit j of n equals eta exactly when tau^(-(j+w)) n reduces into the j-th characteristic set."""
    o, w = ds.order, ds.w
    pts = list(cover_ab(o, U.scaled(N)))
    J = expansion_length_bound(N, region_radius(U), ds)
    rng = random.Random(seed)
    bad = []
    for _ in range(samples):
        a, b = rng.choice(pts)
        j = rng.randint(0, J)
        eta = rng.choice(ds.nonzero)
        raw = expand_raw(ds, a, b)
        truth = raw.get(j) == (eta.a, eta.b)
        x = FieldElement.from_ring(o(a, b)).div_tau(j + w)
        if charset_contains(ds, eta, j, x) != truth:
            bad.append((a, b, j, eta))
    return BridgeReport(samples, bad)


def bridge_census(ds: DigitSet, U: Region, N) -> dict:
    """Digit counts over NU recomputed from characteristic-set membership alone."""
    o, w = ds.order, ds.w
    J = expansion_length_bound(N, region_radius(U), ds)
    out = {(d.a, d.b): 0 for d in ds.nonzero}
    for a, b in cover_ab(o, U.scaled(N)):
        z = FieldElement.from_ring(o(a, b))
        for j in range(J + 1):
            x = z.div_tau(j + w)
            for eta in ds.nonzero:
                if charset_contains(ds, eta, j, x):
                    out[(eta.a, eta.b)] += 1
    return out


def zero_part_check(ds: DigitSet, j: int, extra: int, eta=None) -> tuple[int, int]:
    """(hits, expected) over one representative of every class of tau^-(j+w+extra) Z[tau] mod Z[tau].

    Each cell at scale j + w holds exactly q^extra of these classes, so the number landing
    in the j-th characteristic set is q^extra times its cell count: summing indicator
    minus measure over a full cell gives 0.
    """
    o, w = ds.order, ds.w
    k = j + w + extra
    eta = ds.nonzero[0] if eta is None else eta
    expected = len(charset_approx(ds, eta, j)) * o.q ** extra
    hits = 0
    for _, r in canonical_residues(o, k):
        if charset_contains(ds, eta, j, FieldElement.from_ring(r).div_tau(k)):
            hits += 1
    return hits, expected
