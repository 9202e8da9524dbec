"""Minimal-norm digit sets modulo tau^w."""

from __future__ import annotations

from functools import lru_cache

from .geometry import frac_ztau, voronoi_cell
from .ring import FieldElement, IQOrder, RingElement, canonical_residues, residue_key, residue_key_ab
from .svg import polygons_svg


class DigitSet:
    """Zero plus one minimal-norm representative of every class mod tau^w not divisible by tau."""

    def __init__(self, order: IQOrder, w: int, digits: list[RingElement], lookup: dict):
        self.order = order
        self.w = w
        self.digits = digits
        self.lookup = lookup
        self._raw = {k: (d.a, d.b) for k, d in lookup.items()}
        self._cache: dict = {}

    @property
    def nonzero(self) -> list[RingElement]:
        return self.digits[1:]

    @property
    def warning(self) -> str | None:
        if self.order.p == 0 and self.order.q == 2:
            return "p=0, q=2: other boundary conventions may break the ball-inclusion checks"
        return None

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __contains__(self, z: RingElement) -> bool:
        return z in set(self.digits)

    def __repr__(self) -> str:
        o = self.order
        return f"DigitSet(p={o.p}, q={o.q}, w={self.w}, |D|={len(self.digits)})"

    def max_abs(self) -> float:
        return max(abs(d.complex()) for d in self.digits)


def expected_size(q: int, w: int) -> int:
    return q ** (w - 1) * (q - 1) + 1


@lru_cache(maxsize=None)
def build_digit_set(order: IQOrder, w: int) -> DigitSet:
    if w < 2:
        raise ValueError("w must be at least 2")
    tw = order.tau ** w
    digits = [order(0)]
    lookup = {}
    for key, r in canonical_residues(order, w):
        if key[0] == 0:
            continue
        pt = FieldElement.from_ring(r).div_tau(w)
        u = frac_ztau(pt).lattice_part
        eta = r - tw * u
        lookup[residue_key(eta, w)] = eta
        digits.append(eta)
    digits[1:] = sorted(digits[1:], key=lambda d: (d.norm(), d.b, d.a))
    return DigitSet(order, w, digits, lookup)


def digit_for(ds: DigitSet, z: RingElement) -> RingElement:
    if z.divides_tau():
        raise ValueError(f"{z} is divisible by tau; no nonzero digit is congruent to it")
    return ds.lookup[residue_key(z, ds.w)]


def digit_raw(ds: DigitSet, a: int, b: int) -> tuple[int, int]:
    """Coordinates of the digit congruent to a + b*tau (which must not be divisible by tau)."""
    o = ds.order
    return ds._raw[residue_key_ab(a, b, o.p, o.q, ds.w)]


def digit_cells_svg(ds: DigitSet) -> str:
    """The cells eta + V of all digits drawn over tau^w V."""
    cell = voronoi_cell(ds.order)
    big = [v.mul_tau(ds.w).complex() for v in cell.vertices]
    polys = [(big, "#d5d8dc")]
    for d in ds.digits:
        polys.append((cell.polygon(d), "#2471a3" if d else "#c0392b"))
    o = ds.order
    return polygons_svg(polys, title=f"digits of tau^2 - {o.p} tau + {o.q}, w = {ds.w}")
