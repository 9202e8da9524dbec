"""Frobenius-and-add scalar multiplication on binary Koblitz curves.

The curve y^2 + xy = x^3 + a x^2 + 1 over GF(2^m) carries the Frobenius map
phi(x, y) = (x^2, y^2), which satisfies phi^2 - mu phi + 2 = 0 with mu = (-1)^(1 - a).
So phi acts as the root tau of tau^2 - mu tau + 2, and z = a + b tau acts on points as
[a] + [b] phi.  Field elements are ints holding a polynomial basis; affine coordinates
with explicit inversion keep the code short.  Speed is measured in operation counts.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .blockstats import BlockStats, nonzero_digit_count
from .digitset import DigitSet, build_digit_set
from .naf import expand_raw
from .ring import RingElement, make_order

# degree -> reduction polynomial (bit i is the coefficient of x^i)
IRREDUCIBLES = {
    7: (1 << 7) | (1 << 1) | 1,
    11: (1 << 11) | (1 << 2) | 1,
    19: (1 << 19) | (1 << 5) | (1 << 2) | (1 << 1) | 1,
}


# polynomials over GF(2) -------------------------------------------------------


def _pmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def _pmod(a: int, f: int) -> int:
    df = f.bit_length() - 1
    while a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: int) -> bool:
    """Rabin's test for a polynomial over GF(2) of degree at least 1."""
    m = f.bit_length() - 1
    if m < 1:
        return False

    def frob_power(k: int) -> int:
        # x^(2^k) mod f
        x = 2
        for _ in range(k):
            x = _pmod(_pmul(x, x), f)
        return x

    if frob_power(m) != _pmod(2, f):
        return False
    for r in _prime_factors(m):
        h = frob_power(m // r) ^ 2
        if _pgcd(f, _pmod(h, f)) != 1:
            return False
    return True


class BinaryField:
    """GF(2^m) in a polynomial basis."""

    def __init__(self, m: int, irreducible: int | None = None):
        if irreducible is None:
            if m not in IRREDUCIBLES:
                raise ValueError(f"no default reduction polynomial for m = {m}")
            irreducible = IRREDUCIBLES[m]
        if irreducible.bit_length() - 1 != m:
            raise ValueError("reduction polynomial has the wrong degree")
        if not is_irreducible(irreducible):
            raise ValueError(f"{irreducible:#b} is reducible")
        self.m = m
        self.irreducible = irreducible
        self.size = 1 << m

    def __repr__(self) -> str:
        return f"BinaryField(2^{self.m}, {self.irreducible:#x})"

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        f, m = self.irreducible, self.m
        out = 0
        while b:
            if b & 1:
                out ^= a
            b >>= 1
            a <<= 1
            if a >> m:
                a ^= f
        return out

    def square(self, a: int) -> int:
        # spread the bits, then reduce
        s = 0
        i = 0
        while a:
            if a & 1:
                s |= 1 << (2 * i)
            a >>= 1
            i += 1
        return _pmod(s, self.irreducible)

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        # extended Euclid: keep u1 * a = r1 (mod f)
        r0, r1 = self.irreducible, a
        u0, u1 = 0, 1
        while r1 != 1:
            shift = r0.bit_length() - r1.bit_length()
            if shift < 0:
                r0, r1 = r1, r0
                u0, u1 = u1, u0
                shift = -shift
            r0 ^= r1 << shift
            u0 ^= u1 << shift
        return _pmod(u1, self.irreducible)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inverse(b))

    def trace(self, a: int) -> int:
        t, x = a, a
        for _ in range(self.m - 1):
            x = self.square(x)
            t ^= x
        return t

    def half_trace(self, c: int) -> int:
        """A root z of z^2 + z = c when m is odd and Tr(c) = 0."""
        if self.m % 2 == 0:
            raise ValueError("half trace needs odd m")
        h, x = c, c
        for _ in range((self.m - 1) // 2):
            x = self.square(self.square(x))
            h ^= x
        return h

    def random(self, rng: random.Random, nonzero: bool = False) -> int:
        while True:
            x = rng.randrange(self.size)
            if x or not nonzero:
                return x


# the curve --------------------------------------------------------------------


@dataclass(frozen=True)
class CurvePoint:
    x: int = 0
    y: int = 0
    infinity: bool = False

    def __repr__(self) -> str:
        return "O" if self.infinity else f"({self.x:#x}, {self.y:#x})"


INFINITY = CurvePoint(infinity=True)


class KoblitzCurve:
    """y^2 + xy = x^3 + a x^2 + 1 over GF(2^m)."""

    def __init__(self, m: int, a: int, irreducible: int | None = None):
        if a not in (0, 1):
            raise ValueError("a must be 0 or 1")
        self.field = BinaryField(m, irreducible)
        self.a = a
        self.mu = 1 if a == 1 else -1

    def __repr__(self) -> str:
        return f"KoblitzCurve(m={self.field.m}, a={self.a})"

    def is_on_curve(self, P: CurvePoint) -> bool:
        if P.infinity:
            return True
        F = self.field
        x, y = P.x, P.y
        x2 = F.square(x)
        lhs = F.square(y) ^ F.mul(x, y)
        rhs = F.mul(x2, x) ^ (x2 if self.a else 0) ^ 1
        return lhs == rhs

    def random_point(self, rng: random.Random) -> CurvePoint:
        F = self.field
        while True:
            x = F.random(rng)
            if x == 0:
                return CurvePoint(0, 1)
            # y = x z turns the equation into z^2 + z = x + a + 1/x^2
            c = x ^ self.a ^ F.inverse(F.square(x))
            if F.trace(c):
                continue
            z = F.half_trace(c)
            P = CurvePoint(x, F.mul(x, z))
            return P if rng.random() < 0.5 else self.neg(P)

    def neg(self, P: CurvePoint) -> CurvePoint:
        if P.infinity:
            return P
        return CurvePoint(P.x, P.x ^ P.y)

    def add(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        if P.infinity:
            return Q
        if Q.infinity:
            return P
        F = self.field
        if P.x == Q.x:
            if P.y == Q.y:
                return self.double(P)
            return INFINITY
        lam = F.div(P.y ^ Q.y, P.x ^ Q.x)
        x3 = F.square(lam) ^ lam ^ P.x ^ Q.x ^ self.a
        y3 = F.mul(lam, P.x ^ x3) ^ x3 ^ P.y
        return CurvePoint(x3, y3)

    def double(self, P: CurvePoint) -> CurvePoint:
        if P.infinity or P.x == 0:
            return INFINITY
        F = self.field
        lam = P.x ^ F.div(P.y, P.x)
        x3 = F.square(lam) ^ lam ^ self.a
        y3 = F.square(P.x) ^ F.mul(lam ^ 1, x3)
        return CurvePoint(x3, y3)

    def sub(self, P: CurvePoint, Q: CurvePoint) -> CurvePoint:
        return self.add(P, self.neg(Q))

    def frobenius(self, P: CurvePoint) -> CurvePoint:
        if P.infinity:
            return P
        return CurvePoint(self.field.square(P.x), self.field.square(P.y))

    def mul_int(self, k: int, P: CurvePoint) -> CurvePoint:
        """Double-and-add."""
        if k < 0:
            return self.mul_int(-k, self.neg(P))
        out = INFINITY
        while k:
            if k & 1:
                out = self.add(out, P)
            P = self.double(P)
            k >>= 1
        return out

    def characteristic_check(self, P: CurvePoint) -> bool:
        """phi^2(P) - [mu] phi(P) + [2] P is the point at infinity."""
        f1 = self.frobenius(P)
        f2 = self.frobenius(f1)
        mu_f1 = f1 if self.mu == 1 else self.neg(f1)
        return self.add(self.sub(f2, mu_f1), self.double(P)).infinity

    def digit_set(self, w: int) -> DigitSet:
        return build_digit_set(make_order(self.mu, 2), w)

    def mul_ztau_reference(self, z: RingElement, P: CurvePoint) -> CurvePoint:
        """[a]P + [b]phi(P) for z = a + b tau."""
        return self.add(self.mul_int(z.a, P), self.mul_int(z.b, self.frobenius(P)))


@dataclass(frozen=True)
class OpCount:
    adds: int
    frobenius_applications: int
    precomp_size: int
    length: int


def scalar_mul_ztau(curve: KoblitzCurve, ds: DigitSet, z: RingElement, P: CurvePoint) -> tuple[CurvePoint, OpCount]:
    """zP by Horner's scheme over the w-NAF of z: Q <- phi(Q), then Q <- Q + [eta]P.

    Every nonzero digit costs one addition, the first one included (it is added to the
    point at infinity), so adds equals the Hamming weight.  The precomputed multiples
    [eta]P are obtained from the reference multiplication and are not counted.
    """
    o = ds.order
    if o.q != 2 or o.p != curve.mu:
        raise ValueError("digit set does not belong to this curve's Frobenius")
    raw = expand_raw(ds, z.a, z.b)
    table = {(d.a, d.b): curve.mul_ztau_reference(d, P) for d in ds.nonzero}
    Q = INFINITY
    adds = frob = 0
    if raw:
        top = max(raw)
        for j in range(top, -1, -1):
            if j != top:
                Q = curve.frobenius(Q)
                frob += 1
            d = raw.get(j)
            if d is not None:
                Q = curve.add(Q, table[d])
                adds += 1
    length = max(raw) + 1 if raw else 0
    return Q, OpCount(adds, frob, len(table), length)


# cost experiment --------------------------------------------------------------


def random_scalars(n: int, norm_bound: int, rng: random.Random, mu: int) -> list[RingElement]:
    """Uniform elements a + b tau of norm at most norm_bound (rejection sampling)."""
    o = make_order(mu, 2)
    r = int(norm_bound ** 0.5 * 2) + 2
    out = []
    while len(out) < n:
        z = o(rng.randint(-r, r), rng.randint(-r, r))
        if z.norm() <= norm_bound:
            out.append(z)
    return out


@dataclass(frozen=True)
class CostRow:
    w: int
    mean_adds: float
    mean_length: float
    predicted_adds: float  # density of all nonzero digits times the mean length
    precomp_size: int

    @property
    def adds_per_length(self) -> float:
        return self.mean_adds / self.mean_length


def cost_table(scalars: list[RingElement], mu: int, widths=(2, 3, 4, 5)) -> list[CostRow]:
    """Mean weight and length of the w-NAFs of a fixed scalar population."""
    rows = []
    for w in widths:
        ds = build_digit_set(make_order(mu, 2), w)
        adds = lengths = 0
        for z in scalars:
            raw = expand_raw(ds, z.a, z.b)
            adds += len(raw)
            lengths += max(raw) + 1 if raw else 0
        n = len(scalars)
        density = float(BlockStats(2, w).e_w) * nonzero_digit_count(2, w)
        rows.append(CostRow(w, adds / n, lengths / n, density * lengths / n, len(ds.nonzero)))
    return rows
