"""Exact scalar arithmetic: rationals, p-adic valuations, truncated p-adics,
and dense rational power series.

Rational numbers are ``fractions.Fraction`` throughout the package: the
stdlib type already guarantees reduced form with positive denominator and
arbitrary precision, which is exactly the contract the rest of the code
relies on.

p-adic elements are stored as an exact rational unit part together with a
valuation and a certified precision.  All arithmetic is exact on the
rational representatives; ``precision`` tracks, pessimistically, how many
digits of agreement with the intended p-adic limit are certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, PrecisionError


class _Infinity:
    """Positive infinity for p-adic valuations.

    A dedicated singleton (never an ``int``) so that arithmetic on +inf
    cannot silently happen: only comparisons and addition with integers
    are defined.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "+Infinity"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("padic-infinity")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__


INFINITY = _Infinity()


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit inputs and beyond
    (the witness set is sufficient for n < 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def val_p(x: Fraction | int, p: int):
    """p-adic valuation of a rational number; ``INFINITY`` exactly for 0."""
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    x = Fraction(x)
    if x == 0:
        return INFINITY
    v = 0
    n = x.numerator
    while n % p == 0:
        n //= p
        v += 1
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def unit_part(x: Fraction, p: int) -> Fraction:
    """x / p**val_p(x); requires x != 0."""
    v = val_p(x, p)
    return x / Fraction(p) ** v


def bernoulli2(t: Fraction | int) -> Fraction:
    """Second Bernoulli polynomial t^2 - t + 1/6, evaluated exactly."""
    t = Fraction(t)
    return t * t - t + Fraction(1, 6)


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" (or plain integer) strings into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"not a rational: {text!r}") from exc


def format_rational(x: Fraction) -> str:
    """Canonical "p/q" string (plain integer when the denominator is 1)."""
    x = Fraction(x)
    return str(x)


# ---------------------------------------------------------------------------
# Truncated p-adic elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PadicElement:
    """A p-adic number known modulo p**(valuation + precision).

    ``unit`` is an exact rational with p-adic valuation 0 (except for the
    exact zero, where it is 0).  The represented value is
    ``p**valuation * unit``; only the digits up to the stated precision are
    certified to agree with the intended limit.
    """

    prime: int
    unit: Fraction
    valuation: int
    precision: int

    def __post_init__(self):
        if not is_prime(self.prime):
            raise InputError(f"{self.prime} is not prime")
        if self.unit != 0:
            if val_p(self.unit, self.prime) != 0:
                raise InputError("unit part must have valuation 0")
            if self.precision < 1:
                raise PrecisionError("no certified digits remain")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_rational(cls, prime: int, value: Fraction | int, precision: int) -> "PadicElement":
        value = Fraction(value)
        if value == 0:
            return cls.exact_zero(prime)
        v = val_p(value, prime)
        return cls(prime, value / Fraction(prime) ** v, v, precision)

    @classmethod
    def exact_zero(cls, prime: int) -> "PadicElement":
        return cls(prime, Fraction(0), 0, 1)

    # -- views -------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def rational(self) -> Fraction:
        """The exact rational representative."""
        return self.unit * Fraction(self.prime) ** self.valuation

    @property
    def known_mod(self):
        """Exponent k such that the element is certified mod p**k."""
        if self.is_zero():
            return INFINITY
        return self.valuation + self.precision

    def val(self):
        return INFINITY if self.is_zero() else self.valuation

    def residue(self, k: int) -> int:
        """Integer representative modulo p**k (element must be integral)."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise InputError("residue of a non-integral element")
        if self.known_mod is not INFINITY and k > self.known_mod:
            raise PrecisionError(f"only certified mod {self.prime}^{self.known_mod}")
        if self.valuation >= k:
            return 0
        m = self.prime ** (k - self.valuation)
        num = self.unit.numerator % m
        den_inv = pow(self.unit.denominator, -1, m)
        return (num * den_inv % m) * self.prime**self.valuation % self.prime**k

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "PadicElement"):
        if self.prime != other.prime:
            raise InputError("mixed primes in p-adic arithmetic")

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicElement(self.prime, -self.unit, self.valuation, self.precision)

    def _promote(self, value) -> "PadicElement":
        """Wrap an exactly known scalar without degrading this element's
        certified precision."""
        value = Fraction(value)
        if value == 0:
            return PadicElement.exact_zero(self.prime)
        v = val_p(value, self.prime)
        known = self.known_mod
        precision = 1 if known is INFINITY else max(known - v + 1, 1)
        return PadicElement(self.prime, unit_part(value, self.prime), v, precision)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._promote(other)
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        known = min(self.known_mod, other.known_mod)
        total = self.rational + other.rational
        if total == 0:
            return PadicElement.exact_zero(self.prime)
        v = val_p(total, self.prime)
        if v >= known:
            raise PrecisionError(
                f"cancellation past certified precision (mod {self.prime}^{known})"
            )
        return PadicElement(self.prime, unit_part(total, self.prime), v, known - v)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self._promote(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other == 0:
                return PadicElement.exact_zero(self.prime)
            v = val_p(other, self.prime)
            if self.is_zero():
                return self
            return PadicElement(
                self.prime, self.unit * unit_part(other, self.prime),
                self.valuation + v, self.precision,
            )
        self._check(other)
        if self.is_zero() or other.is_zero():
            return PadicElement.exact_zero(self.prime)
        return PadicElement(
            self.prime,
            self.unit * other.unit,
            self.valuation + other.valuation,
            min(self.precision, other.precision),
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PadicElement.from_rational(self.prime, other, self.precision)
        self._check(other)
        if other.is_zero():
            raise ZeroDivisionError("p-adic division by zero")
        if self.is_zero():
            return self
        return PadicElement(
            self.prime,
            self.unit / other.unit,
            self.valuation - other.valuation,
            min(self.precision, other.precision),
        )

    def __pow__(self, n: int):
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError
            return PadicElement(self.prime, self.unit**n, self.valuation * n, self.precision)
        if n == 0:
            return PadicElement(self.prime, Fraction(1), 0, self.precision or 1)
        if self.is_zero():
            return self
        return PadicElement(self.prime, self.unit**n, self.valuation * n, self.precision)

    def __eq__(self, other):
        if not isinstance(other, PadicElement):
            return NotImplemented
        return (
            self.prime == other.prime
            and self.rational == other.rational
            and self.precision == other.precision
        )

    def __repr__(self):
        if self.is_zero():
            return f"PadicElement({self.prime}, 0)"
        return (
            f"PadicElement({self.prime}, {self.unit}*{self.prime}^{self.valuation}"
            f" + O({self.prime}^{self.known_mod}))"
        )


# ---------------------------------------------------------------------------
# Dense rational power series
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerSeries:
    """Truncated power series sum(c[i] x^i, i < truncation_order)."""

    coefficients: tuple
    # truncation_order == len(coefficients); kept explicit per data contract
    truncation_order: int

    @classmethod
    def from_list(cls, coeffs, order: int | None = None) -> "PowerSeries":
        coeffs = [Fraction(c) for c in coeffs]
        if order is None:
            order = len(coeffs)
        if order < len(coeffs):
            coeffs = coeffs[:order]
        coeffs += [Fraction(0)] * (order - len(coeffs))
        return cls(tuple(coeffs), order)

    @classmethod
    def identity(cls, order: int) -> "PowerSeries":
        return cls.from_list([0, 1], order)

    def __getitem__(self, i: int) -> Fraction:
        return self.coefficients[i]

    def __len__(self):
        return self.truncation_order

    def truncate(self, order: int) -> "PowerSeries":
        return PowerSeries.from_list(self.coefficients[:order], order)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.truncation_order, other.truncation_order)
        return PowerSeries.from_list(
            [self[i] + other[i] for i in range(n)], n
        )

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        n = min(self.truncation_order, other.truncation_order)
        return PowerSeries.from_list(
            [self[i] - other[i] for i in range(n)], n
        )

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return PowerSeries.from_list(
                [c * other for c in self.coefficients], self.truncation_order
            )
        n = min(self.truncation_order, other.truncation_order)
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coefficients[:n]):
            if a == 0:
                continue
            for j in range(n - i):
                b = other.coefficients[j]
                if b:
                    out[i + j] += a * b
        return PowerSeries.from_list(out, n)

    __rmul__ = __mul__

    def multiplicative_inverse(self) -> "PowerSeries":
        """1/self; requires an invertible constant term."""
        if self[0] == 0:
            raise InputError("constant term is not a unit")
        n = self.truncation_order
        inv = [Fraction(0)] * n
        inv[0] = 1 / self[0]
        for k in range(1, n):
            acc = Fraction(0)
            for i in range(1, k + 1):
                acc += self[i] * inv[k - i]
            inv[k] = -acc / self[0]
        return PowerSeries.from_list(inv, n)

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """self(inner(x)); inner must have zero constant term."""
        if inner[0] != 0:
            raise InputError("composition needs inner constant term 0")
        n = min(self.truncation_order, inner.truncation_order)
        result = PowerSeries.from_list([self[n - 1]], n)
        # Horner scheme in the truncated ring.
        for k in range(n - 2, -1, -1):
            result = result * inner + PowerSeries.from_list([self[k]], n)
        return result

    def evaluate(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc


def series_compose_invert(s: PowerSeries) -> PowerSeries:
    """Compositional inverse of s(x) = x + O(x^2) (unit leading coefficient
    allowed), truncated to the same order.

    Solves s(g(x)) = x coefficient by coefficient; the triangular structure
    makes each new coefficient of g a linear problem.
    """
    if s[0] != 0:
        raise InputError("series must vanish at 0")
    if s.truncation_order < 2 or s[1] == 0:
        raise InputError("leading coefficient is not a unit")
    n = s.truncation_order
    g = [Fraction(0), 1 / s[1]]
    for k in range(2, n):
        partial = PowerSeries.from_list(g + [Fraction(0)], k + 1)
        composed = s.truncate(k + 1).compose(partial)
        # coefficient of x^k in s(g + t x^k) is composed[k] + s1 * t
        g.append(-composed[k] / s[1])
    return PowerSeries.from_list(g, n)
