"""Width-w tau-adic non-adjacent forms: the word type, valuation, metric and expansion."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .digitset import DigitSet
from .geometry import C_V_SQ, round_ztau
from .ring import FieldElement, QSqrtD, RingElement, point_of, residue_key_ab


class ExpansionError(RuntimeError):
    pass


class NafWord:
    """Sparse digit word: index -> nonzero digit, the tau-point sitting at index 0."""

    __slots__ = ("support", "ds")

    def __init__(self, support: dict[int, RingElement], ds: DigitSet):
        self.support = support
        self.ds = ds

    @property
    def w(self) -> int:
        return self.ds.w

    @property
    def left_length(self) -> int:
        return max(0, max(self.support) + 1) if self.support else 0

    @property
    def right_length(self) -> int:
        return -min(0, min(self.support)) if self.support else 0

    def __eq__(self, other) -> bool:
        if not isinstance(other, NafWord):
            return NotImplemented
        return self.support == other.support

    def __hash__(self) -> int:
        return hash(frozenset(self.support.items()))

    def __repr__(self) -> str:
        return f"NafWord({to_text(self)})"

    def __getitem__(self, j: int) -> RingElement:
        return self.support.get(j, self.ds.order(0))

    def shifted(self, k: int) -> NafWord:
        """Multiply the value by tau^k."""
        return NafWord({j + k: d for j, d in self.support.items()}, self.ds)

    def dense(self) -> list[RingElement]:
        """Digits from index max(left_length - 1, 0) down to -right_length."""
        zero = self.ds.order(0)
        hi = max(self.left_length - 1, 0)
        return [self.support.get(j, zero) for j in range(hi, -self.right_length - 1, -1)]


def validate(word: NafWord) -> bool:
    idx = sorted(word.support)
    if any(b - a < word.w for a, b in zip(idx, idx[1:])):
        return False
    nonzero = set(word.ds.nonzero)
    return all(d in nonzero for d in word.support.values())


def horner(order, support: dict[int, RingElement]) -> tuple[RingElement, int]:
    """(sum eta_j tau^(j+r), r) where r is the right-length."""
    if not support:
        return order(0), 0
    lo, hi = min(support), max(support)
    r = -min(0, lo)
    p, q = order.p, order.q
    a = b = 0
    for j in range(hi, min(lo, 0) - 1, -1):
        # (a + b tau) * tau = -q b + (a + p b) tau
        a, b = -q * b, a + p * b
        d = support.get(j)
        if d is not None:
            a += d.a
            b += d.b
    return order(a, b), r


def value(word: NafWord) -> FieldElement:
    order = word.ds.order
    num, r = horner(order, word.support)
    out = FieldElement.from_ring(num)
    if r:
        out = out.div_tau(r)
    return out


def weight(word: NafWord) -> int:
    return len(word.support)


def digit_count(word: NafWord, eta: RingElement) -> int:
    return sum(1 for d in word.support.values() if d == eta)


def naf_metric_exponent(w1: NafWord, w2: NafWord) -> int | None:
    keys = set(w1.support) | set(w2.support)
    diff = [j for j in keys if w1.support.get(j) != w2.support.get(j)]
    return max(diff) if diff else None


def naf_metric(w1: NafWord, w2: NafWord) -> float:
    k = naf_metric_exponent(w1, w2)
    if k is None:
        return 0.0
    return w1.ds.order.q ** (k / 2)


def _cap(ds: DigitSet, norm: int) -> int:
    """A generous step limit: twice the length bound for the disc of radius |z|, plus slack."""
    if norm == 0:
        return 64
    c = ds._cache.get("length_constant")
    if c is None:
        from .bounds import length_constant

        c = ds._cache["length_constant"] = length_constant(1.0, ds)
    return 2 * (math.floor(math.log(norm) / math.log(ds.order.q)) + c) + 64


def expand_raw(ds: DigitSet, a: int, b: int, cap: int | None = None) -> dict[int, tuple[int, int]]:
    """Integer-only core of the expansion: index -> (digit a, digit b)."""
    o = ds.order
    p, q, w = o.p, o.q, ds.w
    raw = ds._raw
    if cap is None:
        cap = _cap(ds, a * a + p * a * b + q * b * b)
    out = {}
    idx = 0
    while a or b:
        if a % q:
            da, db = raw[residue_key_ab(a, b, p, q, w)]
            out[idx] = (da, db)
            a -= da
            b -= db
        k = a // q
        a, b = b + k * p, -k
        idx += 1
        if idx > cap:
            raise ExpansionError(f"expansion did not terminate within {cap} steps")
    return out


def expand(ds: DigitSet, z: RingElement) -> NafWord:
    raw = expand_raw(ds, z.a, z.b)
    objs = {(d.a, d.b): d for d in ds.nonzero}
    return NafWord({j: objs[t] for j, t in raw.items()}, ds)


def approx_expand(ds: DigitSet, pt, ell: int) -> NafWord:
    o = ds.order
    pt = point_of(pt, o)
    if isinstance(pt, FieldElement):
        scaled = pt.mul_tau(ell)
    else:
        scaled = pt
        tau_pt = FieldElement.from_ring(o.tau).to_point()
        for _ in range(ell):
            scaled = scaled * tau_pt
    u = round_ztau(scaled, o)
    return expand(ds, u).shifted(-ell)


def approx_error_bound(ds: DigitSet, ell: int) -> float:
    return ds.order.q ** ((1 - ell) / 2) * math.sqrt(C_V_SQ)


def lipschitz_constant(ds: DigitSet) -> float:
    return 2 * ds.max_abs() / (1 - 1 / ds.order.abs_tau)


def elements_with_norm_at_most(order, bound) -> Iterator[RingElement]:
    """All a + b*tau with norm <= bound (bound >= 0, rational)."""
    bound = Fraction(bound)
    p, q, D = order.p, order.q, order.D
    # norm = (a + p b / 2)^2 + D b^2 / 4
    bmax = math.isqrt(int(4 * bound / D)) + 1
    for b in range(-bmax, bmax + 1):
        rest = bound - Fraction(D * b * b, 4)
        if rest < 0:
            continue
        r = math.isqrt(int(rest)) + 2
        c = -p * b / 2
        for a in range(math.floor(c - r), math.ceil(c + r) + 1):
            if a * a + p * a * b + q * b * b <= bound:
                yield order(a, b)


@dataclass
class VerifyReport:
    radius_sq: Fraction
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def default_verify_radius_sq(ds: DigitSet) -> Fraction:
    """Rational upper bound of (|tau|^(w+1) c_V / (|tau|^w - 1))^2."""
    q, w = ds.order.q, ds.w
    num = Fraction(q ** (w + 1)) * C_V_SQ
    if w % 2 == 0:
        den = QSqrtD(Fraction(q ** (w // 2) - 1) ** 2, 0, q)
    else:
        # (q^((w-1)/2) sqrt(q) - 1)^2
        c = q ** ((w - 1) // 2)
        den = QSqrtD(c * c * q + 1, -2 * c, q)
    val = QSqrtD(num, 0, q) / den
    return Fraction(val.floor() + 1)


def verify_wnads(ds: DigitSet, radius_sq=None) -> VerifyReport:
    if radius_sq is None:
        radius_sq = default_verify_radius_sq(ds)
    rep = VerifyReport(Fraction(radius_sq))
    for z in elements_with_norm_at_most(ds.order, radius_sq):
        rep.checked += 1
        try:
            word = expand(ds, z)
        except ExpansionError as exc:
            rep.failures.append((z, str(exc)))
            continue
        if not validate(word) or value(word) != z:
            rep.failures.append((z, "round trip"))
    return rep


def naf_strings(n: int, w: int, nonzero: Sequence) -> Iterator[tuple]:
    """All length-n digit strings (most significant first, 0 for zero) with the NAF condition."""
    if n <= 0:
        yield ()
        return
    nz = tuple(nonzero)

    def rec(prefix: tuple, remaining: int, gap: int):
        # gap: number of positions still forced to zero after the last nonzero digit
        if remaining == 0:
            yield prefix
            return
        yield from rec(prefix + (0,), remaining - 1, max(gap - 1, 0))
        if gap == 0:
            for d in nz:
                yield from rec(prefix + (d,), remaining - 1, w - 1)

    yield from rec((), n, 0)


def word_from_string(ds: DigitSet, digits: Sequence, top_index: int) -> NafWord:
    """The word whose digit at index top_index - i is digits[i]."""
    return NafWord({top_index - i: d for i, d in enumerate(digits) if d}, ds)


def fractional_words(ds: DigitSet, ell: int) -> Iterator[NafWord]:
    """All words with support in {-1, ..., -ell}."""
    for s in naf_strings(ell, ds.w, ds.nonzero):
        yield word_from_string(ds, s, -1)


def to_text(word: NafWord) -> str:
    def fmt(d: RingElement) -> str:
        if d.b == 0:
            return str(d.a)
        return f"({d.a},{d.b})"

    hi = max(word.left_length - 1, 0)
    tokens = []
    for j in range(hi, -word.right_length - 1, -1):
        d = word.support.get(j)
        tok = fmt(d) if d is not None else "0"
        tokens.append(tok + "." if j == 0 else tok)
    return " ".join(tokens)
