"""Global canonical height assembly over Q and the independent doubling
oracle.

The global sum over places of normalized local heights (v-unit values times
log p, plus the archimedean value) is compared against half the
x-coordinate canonical height

    hhat_x(P) = lim 4^{-n} h(x([2^n] P)),

computed by exact rational doubling.  The factor one half is the
divisor-degree bookkeeping between the origin divisor and the x-line
bundle; it is pinned here by the torsion and doubling calibration tests
rather than assumed.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .arch import arch_context, local_height_arch
from .curves import CurvePoint, WeierstrassCurve
from .errors import AdditiveReductionError, InputError
from .exact import INFINITY, is_prime, val_p
from .linalg import determinant
from .tate import local_height_report, minimal_model_at, reduction_type


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = 128
    n_max: int = 10
    tolerance: float = 1e-6
    seed: int = 0
    output_format: str = "table"
    cvp_radius: int = 4  # box radius of the exhaustive verification oracle

    def __post_init__(self):
        if (
            self.precision_bits < 53
            or self.n_max < 2
            or self.tolerance <= 0
            or self.cvp_radius < 1
        ):
            raise InputError("RunConfig bounds must be positive")


# ---------------------------------------------------------------------------
# Factoring (trial division + Pollard rho), desk scale
# ---------------------------------------------------------------------------


def factorize(n: int) -> dict:
    n = abs(int(n))
    if n in (0, 1):
        return {}
    out: dict = {}

    def record(p):
        out[p] = out.get(p, 0) + 1

    for p in (2, 3, 5):
        while n % p == 0:
            record(p)
            n //= p
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < 100000:
        while n % f == 0:
            record(f)
            n //= f
        f += wheel[i]
        i = (i + 1) % 8
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            record(m)
            continue
        d = _pollard_rho(m)
        stack.extend([d, m // d])
    return dict(sorted(out.items()))


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        x = y = rng.randrange(2, n)
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = gcd(abs(x - y), n)
        if d != n:
            return d


# ---------------------------------------------------------------------------
# Doubling oracle
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DoublingOracleResult:
    value: float          # extrapolated 1/2 * hhat_x
    estimates: tuple      # 4^{-n} h(x(2^n P)) for n = 1..n_max
    is_torsion: bool


def _resultant_bound(curve: WeierstrassCurve) -> int:
    """Integer resultant of the x-duplication numerator and denominator;
    every common factor appearing during the doubling iteration divides it."""
    b2, b4, b6, b8 = curve.b2, curve.b4, curve.b6, curve.b8
    f = [Fraction(c) for c in (-b8, -2 * b6, -b4, Fraction(0), Fraction(1))]
    g = [Fraction(c) for c in (b6, 2 * b4, b2, Fraction(4))]
    # Sylvester matrix of (deg 4, deg 3): 7x7
    rows = []
    for shift in range(3):
        rows.append([Fraction(0)] * shift + list(reversed(f)) + [Fraction(0)] * (2 - shift))
    for shift in range(4):
        rows.append([Fraction(0)] * shift + list(reversed(g)) + [Fraction(0)] * (3 - shift))
    res = determinant(rows)
    if res.denominator != 1 or res == 0:
        raise InputError("degenerate duplication resultant")
    return abs(res.numerator)


def _int_invariant(x: Fraction) -> int:
    if x.denominator != 1:
        raise InputError("integral model required")
    return x.numerator


def _x_double(n: int, d: int, curve: WeierstrassCurve, res_bound: int) -> tuple:
    """One x-only duplication step on a coprime integer pair (n : d).

    The gcd of the output pair divides the duplication resultant, so full
    reduction needs only one small-modulus gcd instead of a gcd of the
    full-size integers.
    """
    b2, b4, b6, b8 = (
        _int_invariant(curve.b2),
        _int_invariant(curve.b4),
        _int_invariant(curve.b6),
        _int_invariant(curve.b8),
    )
    n2, d2 = n * n, d * d
    n3, d3 = n2 * n, d2 * d
    num = n2 * n2 - b4 * n2 * d2 - 2 * b6 * n * d3 - b8 * d2 * d2
    den = 4 * n3 * d + b2 * n2 * d2 + 2 * b4 * n * d3 + b6 * d2 * d2
    if den == 0:
        return (1, 0)  # hit the origin: 2P = O
    g = gcd(gcd(num % res_bound, res_bound), den % res_bound)
    if g > 1:
        num //= g
        den //= g
    if den < 0:
        num, den = -num, -den
    return num, den


def doubling_oracle(
    curve: WeierstrassCurve, point: CurvePoint, n_max: int = 10
) -> DoublingOracleResult:
    """Half the x-coordinate canonical height by exact doubling.

    Works on an integral model (points mapped along), doubling the
    x-coordinate as a coprime integer pair; torsion is detected by cycling
    or by hitting the origin, giving an exact zero.
    """
    if point.infinity:
        return DoublingOracleResult(0.0, (), True)
    scale = 1
    for name in ("a1", "a2", "a3", "a4", "a6"):
        den = getattr(curve, name).denominator
        scale = scale * den // gcd(scale, den)
    work = curve.transform(Fraction(1, scale), 0, 0, 0)
    moved = WeierstrassCurve.transform_point(point, Fraction(1, scale), 0, 0, 0)
    res_bound = _resultant_bound(work)
    n, d = moved.x.numerator, moved.x.denominator
    estimates = []
    seen = {(n, d)}
    torsion = False
    for step in range(1, n_max + 1):
        n, d = _x_double(n, d, work, res_bound)
        if d == 0:
            torsion = True
            break
        if (n, d) in seen:
            torsion = True
            break
        seen.add((n, d))
        estimates.append(math.log(max(abs(n), d)) / 4**step)
    if torsion:
        return DoublingOracleResult(0.0, tuple(estimates), True)
    if len(estimates) >= 2:
        value = (4 * estimates[-1] - estimates[-2]) / 3
    else:
        value = estimates[-1]
    return DoublingOracleResult(value / 2, tuple(estimates), False)


# ---------------------------------------------------------------------------
# Global assembly
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GlobalHeightReport:
    curve: WeierstrassCurve
    point: CurvePoint
    local_reports: tuple          # non-archimedean LocalHeightReport entries
    arch_value: float
    global_sum: float
    oracle_value: float
    discrepancy: float
    checked_good_primes: tuple    # primes off the list verified to give 0


def bad_primes(curve: WeierstrassCurve) -> list:
    """Primes with v_p(minimal discriminant) > 0."""
    primes = set()
    for name in ("a1", "a2", "a3", "a4", "a6"):
        primes.update(factorize(getattr(curve, name).denominator))
    primes.update(factorize(curve.discriminant.numerator))
    primes.update(factorize(curve.discriminant.denominator))
    out = []
    for p in sorted(primes):
        minimal, _ = minimal_model_at(curve, p)
        v = val_p(minimal.discriminant, p)
        if v is not INFINITY and v > 0:
            out.append(p)
    return out


def is_semistable(curve: WeierstrassCurve) -> bool:
    for p in bad_primes(curve):
        minimal, _ = minimal_model_at(curve, p)
        if reduction_type(minimal, p).kind == "additive":
            return False
    return True


def place_list(curve: WeierstrassCurve, point: CurvePoint) -> list:
    primes = set(bad_primes(curve))
    primes.update(factorize(point.x.denominator))
    return sorted(primes)


def global_height(
    curve: WeierstrassCurve, point: CurvePoint, config: RunConfig = RunConfig()
) -> GlobalHeightReport:
    """Sum of normalized local heights over all places, with the doubling
    oracle comparison.  Aborts with the offending primes at additive places."""
    if point.infinity:
        raise InputError("global height of the origin is not defined here")
    if not curve.contains(point):
        raise InputError("point is not on the curve")
    places = place_list(curve, point)
    additive = []
    reports = []
    for p in places:
        try:
            reports.append(local_height_report(curve, p, point))
        except AdditiveReductionError:
            additive.append(p)
    if additive:
        raise AdditiveReductionError(
            f"additive reduction at {additive}; restrict to semistable curves"
        )
    ctx = arch_context(curve, config.precision_bits)
    arch_value = local_height_arch(ctx, point)
    total = arch_value + sum(
        float(rep.lambda_v) * math.log(rep.prime) for rep in reports
    )
    oracle = doubling_oracle(curve, point, config.n_max)
    # place coverage tripwire: lambda' vanishes at good primes off the list
    rng = random.Random(config.seed)
    checked = []
    candidates = [p for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43)
                  if p not in places]
    for p in rng.sample(candidates, min(5, len(candidates))):
        rep = local_height_report(curve, p, point)
        if rep.lambda_v != 0:
            raise InputError(
                f"place coverage violated: nonzero local height at good prime {p}"
            )
        checked.append(p)
    return GlobalHeightReport(
        curve=curve,
        point=point,
        local_reports=tuple(reports),
        arch_value=arch_value,
        global_sum=total,
        oracle_value=oracle.value,
        discrepancy=abs(total - oracle.value),
        checked_good_primes=tuple(checked),
    )


# ---------------------------------------------------------------------------
# Built-in curve search (demo and acceptance support)
# ---------------------------------------------------------------------------


def _rational_points_small(curve: WeierstrassCurve, x_range=24) -> list:
    """Small search for rational points: integer x and a few quarter and
    ninth denominators."""
    points = []
    xs = [Fraction(n) for n in range(-x_range, x_range + 1)]
    xs += [Fraction(n, 4) for n in range(-4 * 8, 4 * 8 + 1) if n % 4]
    xs += [Fraction(n, 9) for n in range(-9 * 5, 9 * 5 + 1) if n % 9]
    for x in xs:
        lin = curve.a1 * x + curve.a3
        rhs = x**3 + curve.a2 * x**2 + curve.a4 * x + curve.a6
        disc = lin * lin + 4 * rhs
        if disc < 0:
            continue
        num, den = disc.numerator, disc.denominator
        rn, rd = isqrt(num), isqrt(den)
        if rn * rn != num or rd * rd != den:
            continue
        root = Fraction(rn, rd)
        for sign in (1, -1):
            y = (-lin + sign * root) / 2
            p = CurvePoint.affine(x, y)
            if curve.contains(p) and p not in points:
                points.append(p)
        if len(points) > 40:
            break
    return points


def find_semistable_examples(
    count: int = 10, max_coeff: int = 10, want_torsion: bool = False
) -> list:
    """Deterministic scan over small Weierstrass coefficients for semistable
    curves carrying a rational point of the requested kind.

    Returns (curve, point) pairs; points are non-torsion by Mazur's bound
    unless ``want_torsion``, in which case they have finite order > 1.
    Curves with a1 = a3 = 0 are scanned last: they are all additive at 2.
    """
    found = []
    seen_j = set()
    by_abs = sorted(range(-max_coeff, max_coeff + 1), key=lambda v: (abs(v), v))
    for a1, a3 in ((1, 0), (1, 1), (0, 1), (0, 0)):
        for a2 in (0, -1, 1):
            for a4 in by_abs:
                for a6 in by_abs:
                    if len(found) >= count:
                        return found
                    try:
                        curve = WeierstrassCurve.from_coeffs(a1, a2, a3, a4, a6)
                    except InputError:
                        continue
                    key = curve.j_invariant
                    if key in seen_j:
                        continue
                    if not is_semistable(curve):
                        continue
                    point = None
                    for cand in _rational_points_small(curve, x_range=12):
                        order = curve.torsion_order(cand)
                        if want_torsion and order is not None and order > 1:
                            point = cand
                            break
                        if not want_torsion and order is None:
                            point = cand
                            break
                    if point is None:
                        continue
                    seen_j.add(key)
                    found.append((curve, point))
    return found
