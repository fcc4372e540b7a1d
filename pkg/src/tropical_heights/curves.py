"""Elliptic curves over Q in long Weierstrass form, with the exact group
law, standard invariants, and coordinate changes.

A curve is y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6 with rational
coefficients; all derived quantities (b2..b8, c4, c6, disc, j) are computed
once at construction and are exact Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError


@dataclass(frozen=True)
class CurvePoint:
    """Affine rational point or the point at infinity."""

    x: Fraction | None = None
    y: Fraction | None = None
    infinity: bool = False

    @classmethod
    def zero(cls) -> "CurvePoint":
        return cls(infinity=True)

    @classmethod
    def affine(cls, x, y) -> "CurvePoint":
        return cls(x=Fraction(x), y=Fraction(y))

    def __bool__(self):
        return not self.infinity

    def __repr__(self):
        return "O" if self.infinity else f"({self.x}, {self.y})"


@dataclass(frozen=True)
class WeierstrassCurve:
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.discriminant == 0:
            raise InputError("singular Weierstrass equation (disc = 0)")

    @classmethod
    def from_coeffs(cls, a1, a2, a3, a4, a6) -> "WeierstrassCurve":
        return cls(Fraction(a1), Fraction(a2), Fraction(a3), Fraction(a4), Fraction(a6))

    # -- invariants ----------------------------------------------------------

    @property
    def b2(self) -> Fraction:
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self) -> Fraction:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> Fraction:
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self) -> Fraction:
        return (
            self.a1**2 * self.a6
            + 4 * self.a2 * self.a6
            - self.a1 * self.a3 * self.a4
            + self.a2 * self.a3**2
            - self.a4**2
        )

    @property
    def c4(self) -> Fraction:
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self) -> Fraction:
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2**2 * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self) -> Fraction:
        return self.c4**3 / self.discriminant

    def is_integral(self) -> bool:
        return all(
            getattr(self, n).denominator == 1 for n in ("a1", "a2", "a3", "a4", "a6")
        )

    # -- membership and group law --------------------------------------------

    def contains(self, p: CurvePoint) -> bool:
        if p.infinity:
            return True
        x, y = p.x, p.y
        return (
            y**2 + self.a1 * x * y + self.a3 * y
            == x**3 + self.a2 * x**2 + self.a4 * x + self.a6
        )

    def _require(self, p: CurvePoint):
        if not self.contains(p):
            raise InputError(f"point {p} is not on the curve")

    def negate(self, p: CurvePoint) -> CurvePoint:
        if p.infinity:
            return p
        return CurvePoint.affine(p.x, -p.y - self.a1 * p.x - self.a3)

    def add(self, p: CurvePoint, q: CurvePoint) -> CurvePoint:
        if p.infinity:
            return q
        if q.infinity:
            return p
        if p.x == q.x:
            if p.y + q.y + self.a1 * q.x + self.a3 == 0:
                return CurvePoint.zero()
            # tangent slope
            lam = (
                3 * p.x**2 + 2 * self.a2 * p.x + self.a4 - self.a1 * p.y
            ) / (2 * p.y + self.a1 * p.x + self.a3)
        else:
            lam = (q.y - p.y) / (q.x - p.x)
        nu = p.y - lam * p.x
        x3 = lam**2 + self.a1 * lam - self.a2 - p.x - q.x
        y3 = -(lam + self.a1) * x3 - nu - self.a3
        return CurvePoint.affine(x3, y3)

    def double(self, p: CurvePoint) -> CurvePoint:
        return self.add(p, p)

    def multiply(self, n: int, p: CurvePoint) -> CurvePoint:
        if n < 0:
            return self.multiply(-n, self.negate(p))
        out = CurvePoint.zero()
        acc = p
        while n:
            if n & 1:
                out = self.add(out, acc)
            acc = self.double(acc)
            n >>= 1
        return out

    def torsion_order(self, p: CurvePoint, bound: int = 12) -> int | None:
        """Order of p if it is torsion of order <= bound (Mazur's bound for
        curves over Q), else None."""
        acc = CurvePoint.zero()
        for n in range(1, bound + 1):
            acc = self.add(acc, p)
            if acc.infinity:
                return n
        return None

    # -- coordinate changes ----------------------------------------------------

    def transform(self, u, r, s, t) -> "WeierstrassCurve":
        """Substitution x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""
        u, r, s, t = Fraction(u), Fraction(r), Fraction(s), Fraction(t)
        if u == 0:
            raise InputError("u must be nonzero")
        a1 = (self.a1 + 2 * s) / u
        a2 = (self.a2 - s * self.a1 + 3 * r - s**2) / u**2
        a3 = (self.a3 + r * self.a1 + 2 * t) / u**3
        a4 = (
            self.a4 - s * self.a3 + 2 * r * self.a2 - (t + r * s) * self.a1
            + 3 * r**2 - 2 * s * t
        ) / u**4
        a6 = (
            self.a6 + r * self.a4 + r**2 * self.a2 + r**3
            - t * self.a3 - t**2 - r * t * self.a1
        ) / u**6
        return WeierstrassCurve(a1, a2, a3, a4, a6)

    @staticmethod
    def transform_point(p: CurvePoint, u, r, s, t) -> CurvePoint:
        """Image of a point under the same substitution (old -> new)."""
        if p.infinity:
            return p
        u, r, s, t = Fraction(u), Fraction(r), Fraction(s), Fraction(t)
        x_new = (p.x - r) / u**2
        y_new = (p.y - s * (p.x - r) - t) / u**3
        return CurvePoint.affine(x_new, y_new)


def naive_height(x: Fraction) -> float:
    """log max(|numerator|, denominator) of a rational number."""
    import math

    x = Fraction(x)
    return math.log(max(abs(x.numerator), x.denominator, 1))
