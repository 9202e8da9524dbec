"""Exact arithmetic in Z[tau] for tau^2 - p*tau + q = 0 and in the plane over Q(sqrt(D))."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from itertools import product
from typing import Union

Rational = Union[int, Fraction]


class OrderError(ValueError):
    """Raised for (p, q) pairs that do not define an admissible imaginary quadratic base."""


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True)
class IQOrder:
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q <= 1:
            raise OrderError(f"q must be at least 2 (|tau|^2 = q), got q={self.q}")
        if 4 * self.q - self.p * self.p <= 0:
            raise OrderError(f"4q - p^2 must be positive, got p={self.p}, q={self.q}")

    @property
    def D(self) -> int:
        return 4 * self.q - self.p * self.p

    @property
    def abs_tau_sq(self) -> int:
        return self.q

    @property
    def abs_tau(self) -> float:
        return math.sqrt(self.q)

    @property
    def im_tau(self) -> QSqrtD:
        return QSqrtD(0, Fraction(1, 2), self.D)

    @property
    def shift(self) -> int:
        """Integer s with tau - s having real part 0 or 1/2."""
        return self.p // 2

    @property
    def frac_re_tau(self) -> Fraction:
        return Fraction(self.p % 2, 2)

    @property
    def tau(self) -> RingElement:
        return RingElement(0, 1, self)

    @property
    def reduced_tau(self) -> RingElement:
        """tau shifted by an integer so that its real part lies in {0, 1/2}."""
        return RingElement(-self.shift, 1, self)

    def __call__(self, a: int = 0, b: int = 0) -> RingElement:
        return RingElement(a, b, self)

    def __str__(self) -> str:
        return f"tau^2 - ({self.p})tau + {self.q}"


def make_order(p: int, q: int) -> IQOrder:
    return IQOrder(int(p), int(q))


class RingElement:
    """a + b*tau with integer coordinates."""

    __slots__ = ("a", "b", "order")

    def __init__(self, a: int, b: int, order: IQOrder):
        self.a = a
        self.b = b
        self.order = order

    def _coerce(self, other) -> RingElement:
        if isinstance(other, RingElement):
            if other.order != self.order:
                raise ValueError("elements belong to different orders")
            return other
        if isinstance(other, int):
            return RingElement(other, 0, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.a + o.a, self.b + o.b, self.order)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.a - o.a, self.b - o.b, self.order)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __neg__(self) -> RingElement:
        return RingElement(-self.a, -self.b, self.order)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p, q = self.order.p, self.order.q
        a1, b1, a2, b2 = self.a, self.b, o.a, o.b
        return RingElement(a1 * a2 - q * b1 * b2, a1 * b2 + a2 * b1 + p * b1 * b2, self.order)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> RingElement:
        if k < 0:
            raise ValueError("negative powers leave Z[tau]")
        result = RingElement(1, 0, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.b == 0 and self.a == other
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.order == other.order

    def __hash__(self) -> int:
        return hash((self.a, self.b))

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __repr__(self) -> str:
        return f"RingElement({self.a}, {self.b})"

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*tau"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a} {sign} {abs(self.b)}*tau"

    def norm(self) -> int:
        p, q = self.order.p, self.order.q
        return self.a * self.a + p * self.a * self.b + q * self.b * self.b

    def conj(self) -> RingElement:
        # conj(tau) = p - tau
        return RingElement(self.a + self.b * self.order.p, -self.b, self.order)

    def divides_tau(self) -> bool:
        return self.a % self.order.q == 0

    def div_tau(self) -> RingElement:
        q = self.order.q
        if self.a % q:
            raise ValueError(f"{self} is not divisible by tau")
        k = self.a // q
        return RingElement(self.b + k * self.order.p, -k, self.order)

    def complex(self) -> complex:
        p, D = self.order.p, self.order.D
        return complex(self.a + self.b * p / 2, self.b * math.sqrt(D) / 2)


def divides_tau(z: RingElement) -> bool:
    return z.divides_tau()


def div_tau(z: RingElement) -> RingElement:
    return z.div_tau()


def norm(z: RingElement) -> int:
    return z.norm()


def residue_key_ab(a: int, b: int, p: int, q: int, w: int) -> tuple[int, ...]:
    """Coordinates (a_0, ..., a_{w-1}) with a + b*tau = sum a_j tau^j mod tau^w."""
    out = []
    for _ in range(w):
        a0 = a % q
        out.append(a0)
        k = (a - a0) // q
        a, b = b + k * p, -k
    return tuple(out)


def residue_key(z: RingElement, w: int) -> tuple[int, ...]:
    if w < 1:
        raise ValueError("w must be positive")
    o = z.order
    return residue_key_ab(z.a, z.b, o.p, o.q, w)


def canonical_residues(order: IQOrder, w: int):
    """Yield (key, element) for every sum a_j tau^j with a_j in {0..q-1}."""
    q = order.q
    powers = [order.tau ** j for j in range(w)]
    for coeffs in product(range(q), repeat=w):
        z = order(0)
        for c, t in zip(coeffs, powers):
            if c:
                z = z + c * t
        yield coeffs, z


# ---------------------------------------------------------------------------
# Q(sqrt(d)) numbers


@total_ordering
class QSqrtD:
    """u + v*sqrt(d) with rational u, v."""

    __slots__ = ("u", "v", "d")

    def __init__(self, u: Rational = 0, v: Rational = 0, d: int = 1):
        u = Fraction(u)
        v = Fraction(v)
        if d <= 0:
            raise ValueError("radicand must be positive")
        if v and _is_square(d):
            u += v * math.isqrt(d)
            v = Fraction(0)
        self.u = u
        self.v = v
        self.d = d

    def _lift(self, other) -> QSqrtD:
        if isinstance(other, QSqrtD):
            if other.d != self.d and other.v and self.v:
                raise ValueError("mismatched radicands")
            return other
        if isinstance(other, (int, Fraction)):
            return QSqrtD(other, 0, self.d)
        return NotImplemented

    def _radicand(self, o: QSqrtD) -> int:
        if self.v:
            return self.d
        return o.d

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QSqrtD(self.u + o.u, self.v + o.v, self._radicand(o))

    __radd__ = __add__

    def __neg__(self) -> QSqrtD:
        return QSqrtD(-self.u, -self.v, self.d)

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QSqrtD(self.u - o.u, self.v - o.v, self._radicand(o))

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        d = self._radicand(o)
        return QSqrtD(self.u * o.u + self.v * o.v * d, self.u * o.v + self.v * o.u, d)

    __rmul__ = __mul__

    def conjugate(self) -> QSqrtD:
        return QSqrtD(self.u, -self.v, self.d)

    def field_norm(self) -> Fraction:
        return self.u * self.u - self.v * self.v * self.d

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        n = o.field_norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt d)")
        num = self * o.conjugate()
        return QSqrtD(num.u / n, num.v / n, num.d)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def sign(self) -> int:
        su = (self.u > 0) - (self.u < 0)
        sv = (self.v > 0) - (self.v < 0)
        if sv == 0:
            return su
        if su == 0 or su == sv:
            return sv
        # opposite signs: compare u^2 with v^2 d
        diff = self.u * self.u - self.v * self.v * self.d
        if diff == 0:
            return 0
        return su if diff > 0 else sv

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() == 0

    def __lt__(self, other) -> bool:
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return (self - o).sign() < 0

    def __hash__(self) -> int:
        if not self.v:
            return hash(self.u)
        return hash((self.u, self.v, self.d))

    def __float__(self) -> float:
        return float(self.u) + float(self.v) * math.sqrt(self.d)

    def is_rational(self) -> bool:
        return self.v == 0

    def floor(self) -> int:
        n = math.floor(float(self))
        while self < n:
            n -= 1
        while self >= n + 1:
            n += 1
        return n

    def __repr__(self) -> str:
        return f"QSqrtD({self.u}, {self.v}, {self.d})"

    def __str__(self) -> str:
        if not self.v:
            return str(self.u)
        return f"{self.u} + {self.v}*sqrt({self.d})"


def cmp(x: QSqrtD, y: QSqrtD) -> int:
    return (x - y).sign()


# ---------------------------------------------------------------------------
# Points of the plane


class AlgebraicPoint:
    """x + i*y with coordinates in Q(sqrt(D))."""

    __slots__ = ("x", "y")

    def __init__(self, x: QSqrtD, y: QSqrtD):
        self.x = x
        self.y = y

    @classmethod
    def from_rationals(cls, x: Rational, y: Rational, D: int) -> AlgebraicPoint:
        return cls(QSqrtD(x, 0, D), QSqrtD(y, 0, D))

    @property
    def D(self) -> int:
        return self.x.d

    def __add__(self, other: AlgebraicPoint) -> AlgebraicPoint:
        return AlgebraicPoint(self.x + other.x, self.y + other.y)

    def __sub__(self, other: AlgebraicPoint) -> AlgebraicPoint:
        return AlgebraicPoint(self.x - other.x, self.y - other.y)

    def __neg__(self) -> AlgebraicPoint:
        return AlgebraicPoint(-self.x, -self.y)

    def __mul__(self, other):
        if isinstance(other, AlgebraicPoint):
            return AlgebraicPoint(
                self.x * other.x - self.y * other.y, self.x * other.y + self.y * other.x
            )
        if isinstance(other, (int, Fraction, QSqrtD)):
            return AlgebraicPoint(self.x * other, self.y * other)
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, AlgebraicPoint):
            return NotImplemented
        return self.x == other.x and self.y == other.y

    def __hash__(self) -> int:
        return hash((self.x, self.y))

    def abs_sq(self) -> QSqrtD:
        return self.x * self.x + self.y * self.y

    def dot(self, other: AlgebraicPoint) -> QSqrtD:
        return self.x * other.x + self.y * other.y

    def conj(self) -> AlgebraicPoint:
        return AlgebraicPoint(self.x, -self.y)

    def complex(self) -> complex:
        return complex(float(self.x), float(self.y))

    def __repr__(self) -> str:
        return f"AlgebraicPoint({self.x!r}, {self.y!r})"

    # protocol shared with FieldElement -------------------------------------

    def translate(self, z: RingElement) -> AlgebraicPoint:
        return self + embed(z)

    def side(self, n: RingElement, c: Rational) -> int:
        """Sign of 2*Re(self * conj(n)) - c."""
        return (2 * self.dot(embed(n)) - c).sign()

    def basis_coords(self, order: IQOrder) -> tuple[float, float]:
        """Approximate coordinates (s, t) with self = s + t*reduced_tau."""
        t = float(self.y) * 2 / math.sqrt(order.D)
        s = float(self.x) - float(order.frac_re_tau) * t
        return s, t


def embed(z: RingElement) -> AlgebraicPoint:
    o = z.order
    return AlgebraicPoint(
        QSqrtD(Fraction(2 * z.a + z.b * o.p, 2), 0, o.D), QSqrtD(0, Fraction(z.b, 2), o.D)
    )


def abs_sq(pt) -> QSqrtD | Fraction:
    return pt.abs_sq()


class FieldElement:
    """(a + b*tau)/den, an exact element of Q(tau) with den > 0 and gcd(a, b, den) = 1."""

    __slots__ = ("a", "b", "den", "order")

    def __init__(self, a: int, b: int, den: int, order: IQOrder):
        if den <= 0:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            a, b, den = -a, -b, -den
        g = math.gcd(math.gcd(a, b), den)
        if g > 1:
            a //= g
            b //= g
            den //= g
        self.a = a
        self.b = b
        self.den = den
        self.order = order

    @classmethod
    def from_ring(cls, z: RingElement, den: int = 1) -> FieldElement:
        return cls(z.a, z.b, den, z.order)

    @classmethod
    def from_rational(cls, x: Rational, order: IQOrder) -> FieldElement:
        x = Fraction(x)
        return cls(x.numerator, 0, x.denominator, order)

    def numerator(self) -> RingElement:
        return RingElement(self.a, self.b, self.order)

    def is_integral(self) -> bool:
        return self.den == 1

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, RingElement):
            return FieldElement(other.a, other.b, 1, self.order)
        if isinstance(other, (int, Fraction)):
            return FieldElement.from_rational(other, self.order)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d1, d2 = self.den, o.den
        return FieldElement(self.a * d2 + o.a * d1, self.b * d2 + o.b * d1, d1 * d2, self.order)

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(-self.a, -self.b, self.den, self.order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p, q = self.order.p, self.order.q
        a1, b1, a2, b2 = self.a, self.b, o.a, o.b
        return FieldElement(
            a1 * a2 - q * b1 * b2, a1 * b2 + a2 * b1 + p * b1 * b2, self.den * o.den, self.order
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        # 1/z = conj(z)/N(z)
        n = o.numerator()
        nn = n.norm()
        if nn == 0:
            raise ZeroDivisionError("division by zero in Q(tau)")
        c = n.conj()
        return self * FieldElement(c.a * o.den, c.b * o.den, nn, self.order)

    def mul_tau(self, k: int = 1) -> FieldElement:
        if k >= 0:
            return self * (self.order.tau ** k)
        return self.div_tau(-k)

    def div_tau(self, k: int = 1) -> FieldElement:
        if k < 0:
            return self.mul_tau(-k)
        c = self.order.tau.conj() ** k
        num = self.numerator() * c
        return FieldElement(num.a, num.b, self.den * self.order.q ** k, self.order)

    def __eq__(self, other) -> bool:
        if isinstance(other, (RingElement, int)):
            other = self._coerce(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return (self.a, self.b, self.den) == (other.a, other.b, other.den)

    def __hash__(self) -> int:
        return hash((self.a, self.b, self.den))

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __repr__(self) -> str:
        return f"FieldElement({self.a}, {self.b}, {self.den})"

    def abs_sq(self) -> Fraction:
        return Fraction(self.numerator().norm(), self.den * self.den)

    def to_point(self) -> AlgebraicPoint:
        o = self.order
        return AlgebraicPoint(
            QSqrtD(Fraction(2 * self.a + self.b * o.p, 2 * self.den), 0, o.D),
            QSqrtD(0, Fraction(self.b, 2 * self.den), o.D),
        )

    def complex(self) -> complex:
        o = self.order
        return complex(
            (self.a + self.b * o.p / 2) / self.den, self.b * math.sqrt(o.D) / 2 / self.den
        )

    # protocol shared with AlgebraicPoint -----------------------------------

    def translate(self, z: RingElement) -> FieldElement:
        return FieldElement(self.a + z.a * self.den, self.b + z.b * self.den, self.den, self.order)

    def twice_dot_num(self, n: RingElement) -> int:
        """2*Re((a + b tau) * conj(n)), an integer."""
        p, q = self.order.p, self.order.q
        return 2 * self.a * n.a + p * (self.a * n.b + self.b * n.a) + 2 * q * self.b * n.b

    def side(self, n: RingElement, c: Rational) -> int:
        """Sign of 2*Re(self * conj(n)) - c."""
        if isinstance(c, int):
            v = self.twice_dot_num(n) - c * self.den
        else:
            c = Fraction(c)
            v = self.twice_dot_num(n) * c.denominator - c.numerator * self.den
        return (v > 0) - (v < 0)

    def dot(self, n: RingElement) -> Fraction:
        return Fraction(self.twice_dot_num(n), 2 * self.den)

    def basis_coords_exact(self) -> tuple[Fraction, Fraction]:
        """(s, t) with self = s + t*reduced_tau."""
        sh = self.order.shift
        return Fraction(self.a + sh * self.b, self.den), Fraction(self.b, self.den)

    def basis_coords(self, order: IQOrder | None = None) -> tuple[float, float]:
        s, t = self.basis_coords_exact()
        return float(s), float(t)


def point_of(pt, order: IQOrder):
    """Normalise RingElement / rational inputs to a point object."""
    if isinstance(pt, RingElement):
        return FieldElement.from_ring(pt)
    if isinstance(pt, (int, Fraction)):
        return FieldElement.from_rational(pt, order)
    return pt
