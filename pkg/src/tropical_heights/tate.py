"""Per-prime arithmetic for elliptic curves over Q: minimal models,
reduction types, multiplicative-reduction parameters and the normalized
canonical local heights at non-archimedean places.

All local height values are exact rationals in v-units (a uniformizer has
valuation one); multiply by log p only at global assembly time.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .curves import CurvePoint, WeierstrassCurve
from .errors import (
    AdditiveReductionError,
    InputError,
    OnDivisorError,
    PreconditionError,
    PrecisionError,
)
from .exact import (
    INFINITY,
    PadicElement,
    PowerSeries,
    bernoulli2,
    is_prime,
    series_compose_invert,
    val_p,
)


# ---------------------------------------------------------------------------
# Integer q-expansions
# ---------------------------------------------------------------------------


def sigma_coefficients(k: int, order: int) -> list:
    """[0, sigma_k(1), ..., sigma_k(order-1)] by divisor sieving."""
    out = [0] * order
    for d in range(1, order):
        step = d**k
        for n in range(d, order, d):
            out[n] += step
    return out


def eisenstein4_coefficients(order: int) -> list:
    s3 = sigma_coefficients(3, order)
    return [1 if n == 0 else 240 * s3[n] for n in range(order)]


def eisenstein6_coefficients(order: int) -> list:
    s5 = sigma_coefficients(5, order)
    return [1 if n == 0 else -504 * s5[n] for n in range(order)]


def tate_a4_coefficients(order: int) -> list:
    s3 = sigma_coefficients(3, order)
    return [-5 * c for c in s3]


def tate_a6_coefficients(order: int) -> list:
    s3 = sigma_coefficients(3, order)
    s5 = sigma_coefficients(5, order)
    out = []
    for n in range(order):
        num = 5 * s3[n] + 7 * s5[n]
        if num % 12 != 0:
            raise AssertionError("5 sigma3 + 7 sigma5 must be divisible by 12")
        out.append(-num // 12)
    return out


def _poly_mul(a: list, b: list, order: int) -> list:
    out = [0] * order
    for i, x in enumerate(a[:order]):
        if x == 0:
            continue
        for j in range(min(len(b), order - i)):
            if b[j]:
                out[i + j] += x * b[j]
    return out


def _poly_inverse(a: list, order: int) -> list:
    if a[0] not in (1, -1):
        raise InputError("constant term must be a unit for integer inversion")
    inv = [0] * order
    inv[0] = a[0]
    for n in range(1, order):
        acc = 0
        for i in range(1, min(n, len(a) - 1) + 1):
            if a[i]:
                acc += a[i] * inv[n - i]
        inv[n] = -a[0] * acc
    return inv


def discriminant_coefficients(order: int) -> list:
    """q-expansion of q prod (1-q^n)^24, computed as (E4^3 - E6^2)/1728."""
    e4 = eisenstein4_coefficients(order)
    e6 = eisenstein6_coefficients(order)
    e4cubed = _poly_mul(_poly_mul(e4, e4, order), e4, order)
    e6sq = _poly_mul(e6, e6, order)
    out = []
    for n in range(order):
        num = e4cubed[n] - e6sq[n]
        if num % 1728 != 0:
            raise AssertionError("E4^3 - E6^2 must be divisible by 1728")
        out.append(num // 1728)
    return out


def j_times_q_coefficients(order: int) -> list:
    """Integer expansion of q*j(q) = 1 + 744 q + 196884 q^2 + ..."""
    e4 = eisenstein4_coefficients(order)
    e4cubed = _poly_mul(_poly_mul(e4, e4, order), e4, order)
    disc = discriminant_coefficients(order + 1)
    disc_over_q = disc[1 : order + 1]
    return _poly_mul(e4cubed, _poly_inverse(disc_over_q, order), order)


def inverse_j_coefficients(order: int) -> list:
    """Integer coefficients g_n with q = sum g_n w^n, w = 1/j.

    Obtained by compositional inversion of w(q) = q / (q j(q)).
    """
    jq = j_times_q_coefficients(order)
    w = [0] + _poly_inverse(jq, order - 1 if order > 1 else 1)
    series = PowerSeries.from_list(w, order)
    inv = series_compose_invert(series)
    out = []
    for c in inv.coefficients:
        if Fraction(c).denominator != 1:
            raise AssertionError("reversion of w(q) must stay integral")
        out.append(int(c))
    return out


def _eval_int_series(coeffs: list, q: PadicElement) -> tuple:
    """Exact rational value of sum c_n q^n truncated against q.known_mod.

    Returns (representative, known_mod): the true p-adic value agrees with
    the representative modulo p**known_mod.
    """
    ell = q.val()
    if ell is INFINITY or ell <= 0:
        raise InputError("parameter must have positive valuation")
    known = q.known_mod
    n_max = -((-known) // ell)  # ceil(known / ell)
    q_rep = q.rational
    acc = Fraction(0)
    power = Fraction(1)
    for n in range(min(len(coeffs), n_max + 1)):
        if coeffs[n]:
            acc += coeffs[n] * power
        power *= q_rep
    return acc, known


# ---------------------------------------------------------------------------
# Minimal models and reduction types
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Transformation:
    """Composable Weierstrass substitution x = u^2 x' + r, y = u^3 y' + s u^2 x' + t."""

    u: Fraction
    r: Fraction
    s: Fraction
    t: Fraction

    @classmethod
    def identity(cls) -> "Transformation":
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(0))

    def then(self, other: "Transformation") -> "Transformation":
        return Transformation(
            u=self.u * other.u,
            r=self.u**2 * other.r + self.r,
            s=self.s + self.u * other.s,
            t=self.u**3 * other.t + self.s * self.u**2 * other.r + self.t,
        )

    def push_point(self, p: CurvePoint) -> CurvePoint:
        return WeierstrassCurve.transform_point(p, self.u, self.r, self.s, self.t)


def _vp(x: Fraction, p: int):
    return val_p(Fraction(x), p)


def _p_integral(curve: WeierstrassCurve, p: int) -> bool:
    vals = [_vp(getattr(curve, n), p) for n in ("a1", "a2", "a3", "a4", "a6")]
    return all(v is INFINITY or v >= 0 for v in vals)


def minimal_model_at(curve: WeierstrassCurve, p: int) -> tuple:
    """A p-minimal model together with the transformation old -> new.

    First scales into p-integrality, then greedily searches one u = p step
    at a time over the complete residue ranges r mod p^2, s mod p,
    t mod p^3; the loop reduces v_p(disc) by 12 each time it succeeds, so
    termination and minimality are immediate.
    """
    if not is_prime(p):
        raise InputError(f"{p} is not prime")
    trans = Transformation.identity()
    cur = curve
    # clear p from denominators
    worst = 0
    for i, name in ((1, "a1"), (2, "a2"), (3, "a3"), (4, "a4"), (6, "a6")):
        v = _vp(getattr(curve, name), p)
        if v is not INFINITY and v < 0:
            need = (-v + i - 1) // i
            worst = max(worst, need)
    if worst:
        step = Transformation(Fraction(1, p**worst), Fraction(0), Fraction(0), Fraction(0))
        cur = cur.transform(step.u, step.r, step.s, step.t)
        trans = trans.then(step)

    while True:
        vd = _vp(cur.discriminant, p)
        vc4 = _vp(cur.c4, p)
        if vd is INFINITY:
            raise InputError("singular curve")
        if vd < 12 or (vc4 is not INFINITY and vc4 < 4):
            break
        found = None
        for r, s, t in _substitution_candidates(cur, p):
            cand = cur.transform(p, r, s, t)
            if _p_integral(cand, p):
                found = (
                    Transformation(Fraction(p), Fraction(r), Fraction(s), Fraction(t)),
                    cand,
                )
                break
        if not found:
            break
        step, cur = found
        trans = trans.then(step)
    return cur, trans


def _mod_pk(x: Fraction, p: int, k: int) -> int:
    x = Fraction(x)
    m = p**k
    if x.denominator % p == 0:
        raise InputError("value is not p-integral")
    return x.numerator * pow(x.denominator, -1, m) % m


def _substitution_candidates(curve: WeierstrassCurve, p: int):
    """Complete residue triples (r mod p^2, s mod p, t mod p^3) that could
    make transform(p, r, s, t) p-integral.

    For p >= 5 integrality of a1', a2', a3' pins the triple uniquely; for
    p in {2, 3} the full (small) ranges are searched.
    """
    if p <= 3:
        for r in range(p**2):
            for s in range(p):
                for t in range(p**3):
                    yield r, s, t
        return
    inv2 = pow(2, -1, p**3)
    inv3 = pow(3, -1, p**2)
    s = -_mod_pk(curve.a1, p, 1) * inv2 % p
    r = (_mod_pk(curve.a2, p, 2) - s * s - s * _mod_pk(curve.a1, p, 2)) * (-inv3) % p**2
    t = (-_mod_pk(curve.a3, p, 3) - r * _mod_pk(curve.a1, p, 3)) * inv2 % p**3
    yield r, s, t


def _mod_p(x: Fraction, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise InputError("reduction mod p of a non p-integral value")
    return x.numerator * pow(x.denominator, -1, p) % p


@dataclass(frozen=True)
class ReductionType:
    kind: str  # "good" | "split multiplicative" | "nonsplit multiplicative" | "additive"
    multiplicity: int  # v_p(minimal discriminant); 0 for good reduction

    @property
    def is_good(self) -> bool:
        return self.kind == "good"

    @property
    def is_multiplicative(self) -> bool:
        return self.kind.endswith("multiplicative")


def _singular_point_mod_p(curve: WeierstrassCurve, p: int) -> tuple:
    """The unique singular point of the reduced curve (multiplicative or
    additive reduction), as residues (x0, y0)."""
    a1, a2, a3, a4, a6 = (
        _mod_p(curve.a1, p),
        _mod_p(curve.a2, p),
        _mod_p(curve.a3, p),
        _mod_p(curve.a4, p),
        _mod_p(curve.a6, p),
    )
    for x in range(p):
        for y in range(p):
            on_curve = (
                y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)
            ) % p == 0
            if not on_curve:
                continue
            dx = (a1 * y - (3 * x * x + 2 * a2 * x + a4)) % p
            dy = (2 * y + a1 * x + a3) % p
            if dx == 0 and dy == 0:
                return x, y
    raise InputError("no singular point found; reduction is good")


def reduction_type(curve: WeierstrassCurve, p: int) -> ReductionType:
    """Reduction type of a p-minimal integral model.

    Split vs nonsplit: for p > 3, split iff -c6 is a square mod p; for
    p in {2, 3}, by factoring the tangent-cone quadratic at the node.
    """
    if not _p_integral(curve, p):
        raise PreconditionError(f"curve is not p-integral at {p}")
    minimal, _ = minimal_model_at(curve, p)
    if _vp(minimal.discriminant, p) != _vp(curve.discriminant, p):
        raise PreconditionError(f"curve is not p-minimal at {p}")
    vd = _vp(curve.discriminant, p)
    if vd is INFINITY:
        raise InputError("singular curve")
    if vd == 0:
        return ReductionType("good", 0)
    vc4 = _vp(curve.c4, p)
    if vc4 is INFINITY or vc4 > 0:
        return ReductionType("additive", vd)
    # multiplicative; decide splitness
    if p > 3:
        val = _mod_p(-curve.c6, p)
        split = pow(val, (p - 1) // 2, p) == 1
    else:
        x0, y0 = _singular_point_mod_p(curve, p)
        shifted = curve.transform(1, x0, 0, y0)
        a1 = _mod_p(shifted.a1, p)
        a2 = _mod_p(shifted.a2, p)
        # tangent cone at the node: T^2 + a1 T - a2
        if p == 2:
            if a1 % 2 == 0:
                raise InputError("inseparable tangent cone at p=2; not a node")
            split = a2 % 2 == 0  # T^2 + T + c reducible over F_2 iff c = 0
        else:
            disc = (a1 * a1 + 4 * a2) % 3
            if disc == 0:
                raise InputError("degenerate tangent cone; not a node")
            split = disc == 1
    kind = "split multiplicative" if split else "nonsplit multiplicative"
    return ReductionType(kind, vd)


# ---------------------------------------------------------------------------
# Local height reports
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalHeightReport:
    prime: int
    reduction: ReductionType
    intersection: Fraction      # i(x, D), in v-units
    component: Fraction         # m = min(i, ell - i) in [0, ell/2]
    lambda_v: Fraction          # lambda' in v-units; real value = lambda_v * log p
    note: str = ""

    @property
    def real_value(self) -> float:
        import math

        return float(self.lambda_v) * math.log(self.prime)


def _x_valuation(point: CurvePoint, p: int):
    if point.infinity:
        raise PreconditionError("local height undefined at the origin")
    return _vp(point.x, p)


def _require_on_curve(curve: WeierstrassCurve, p: int, point: CurvePoint, ell: int):
    """Exact membership, or p-adic membership deep enough that every
    valuation the height formulas read is certified.  Accepts the exact
    rational representatives produced by the Tate coordinate series."""
    res = (
        point.y**2 + curve.a1 * point.x * point.y + curve.a3 * point.y
        - (point.x**3 + curve.a2 * point.x**2 + curve.a4 * point.x + curve.a6)
    )
    if res == 0:
        return
    if val_p(res, p) < 3 * ell + 6:
        raise InputError("point is not on the curve (even p-adically)")


def intersection_multiplicity(point: CurvePoint, p: int) -> Fraction:
    """max(0, -v_p(x)/2); odd negative valuations are impossible over Q_p
    when the point reduces into the smooth locus, so they signal a bug."""
    v = _x_valuation(point, p)
    if v is INFINITY or v >= 0:
        return Fraction(0)
    if v % 2 != 0:
        raise InputError(f"odd negative valuation v_{p}(x) = {v}; inconsistent input")
    return Fraction(-v, 2)


def local_height_good(curve: WeierstrassCurve, p: int, point: CurvePoint) -> LocalHeightReport:
    """Good reduction: the normalized local height is the intersection
    multiplicity itself."""
    if point.infinity:
        raise PreconditionError("local height undefined at the origin")
    red = reduction_type(curve, p)
    if not red.is_good:
        raise PreconditionError(f"curve does not have good reduction at {p}")
    _require_on_curve(curve, p, point, 0)
    i = intersection_multiplicity(point, p)
    return LocalHeightReport(p, red, i, Fraction(0), i)


def _has_singular_reduction(curve: WeierstrassCurve, p: int, point: CurvePoint) -> bool:
    vx = _vp(point.x, p)
    vy = _vp(point.y, p)
    if (vx is not INFINITY and vx < 0) or (vy is not INFINITY and vy < 0):
        return False  # reduces to the origin, which is smooth
    x0, y0 = _singular_point_mod_p(curve, p)
    return _mod_p(point.x, p) == x0 and _mod_p(point.y, p) == y0


def component_index(curve: WeierstrassCurve, p: int, point: CurvePoint) -> Fraction:
    """Symmetrized component index m in [0, ell/2] on a p-minimal model
    with multiplicative reduction.

    For a point with singular reduction, w = v_p(2y + a1 x + a3) equals
    min(i, ell - i) exactly except on the component opposite the identity
    (ell even, i = ell/2), where cancellation can push w above ell/2; the
    cap min(w, ell/2) therefore recovers min(i, ell - i) in every case.
    Validated against parameter-built Tate points, where v(z) is ground
    truth (see the test suite).
    """
    red = reduction_type(curve, p)
    if not red.is_multiplicative:
        raise PreconditionError(f"reduction at {p} is not multiplicative")
    ell = red.multiplicity
    if point.infinity:
        raise PreconditionError("component index undefined at the origin")
    if not _has_singular_reduction(curve, p, point):
        return Fraction(0)
    w = _vp(2 * point.y + curve.a1 * point.x + curve.a3, p)
    half = Fraction(ell, 2)
    m = half if (w is INFINITY or w >= half) else Fraction(w)
    if m.denominator != 1:
        raise InputError(
            f"non-integral component index {m} at p={p}; inconsistent input"
        )
    return m


def local_height_multiplicative(
    curve: WeierstrassCurve, p: int, point: CurvePoint
) -> LocalHeightReport:
    """Normalized local height at a multiplicative place of a p-minimal
    model: lambda' = i(x, D) + (ell/2) B2(m/ell) in v-units.

    Nonsplit places are handled by the same formulas, computed as over the
    unramified quadratic extension (same uniformizer and valuations), and
    flagged in the report.
    """
    if point.infinity:
        raise PreconditionError("local height undefined at the origin")
    red = reduction_type(curve, p)
    if not red.is_multiplicative:
        raise PreconditionError(f"reduction at {p} is not multiplicative")
    ell = red.multiplicity
    _require_on_curve(curve, p, point, ell)
    m = component_index(curve, p, point)
    i = intersection_multiplicity(point, p)
    lam = i + Fraction(ell, 2) * bernoulli2(m / ell)
    note = "" if red.kind == "split multiplicative" else "via unramified quadratic extension"
    return LocalHeightReport(p, red, i, m, lam, note)


def local_height_report(curve: WeierstrassCurve, p: int, point: CurvePoint) -> LocalHeightReport:
    """Normalized local height at p for any semistable place: minimalizes,
    maps the point along, and dispatches on the reduction type."""
    minimal, trans = minimal_model_at(curve, p)
    moved = trans.push_point(point)
    red = reduction_type(minimal, p)
    if red.is_good:
        return local_height_good(minimal, p, moved)
    if red.is_multiplicative:
        return local_height_multiplicative(minimal, p, moved)
    raise AdditiveReductionError(f"additive reduction at {p} is out of scope")


# ---------------------------------------------------------------------------
# Tate parameters and parameter-built points
# ---------------------------------------------------------------------------


def tate_parameter(curve: WeierstrassCurve, p: int, precision: int = 20) -> PadicElement:
    """The multiplicative parameter q with j(q) = j(E), certified so that
    j evaluated at the result matches j(E) modulo p**precision."""
    j = curve.j_invariant
    vj = val_p(j, p)
    if vj is INFINITY or vj >= 0:
        raise PreconditionError(
            f"v_{p}(j) = {vj} >= 0: curve has potentially good reduction at {p}"
        )
    ell = -vj
    target = ell + precision + 2 * ell  # certify j round-trips mod p^precision
    n_terms = target // ell + 2
    coeffs = inverse_j_coefficients(n_terms + 1)
    w = 1 / j
    acc = Fraction(0)
    power = Fraction(1)
    for n in range(len(coeffs)):
        if coeffs[n]:
            acc += coeffs[n] * power
        power *= w
    q = PadicElement(p, acc / Fraction(p) ** ell, ell, target - ell)
    if q.val() != ell:
        raise PrecisionError("parameter valuation mismatch")
    return q


def j_from_parameter(q: PadicElement) -> tuple:
    """(representative of j(q), certified absolute precision exponent)."""
    ell = q.val()
    e4, known = _eval_int_series(eisenstein4_coefficients(q.known_mod // ell + 2), q)
    disc, _ = _eval_int_series(discriminant_coefficients(q.known_mod // ell + 2), q)
    j_rep = e4**3 / disc
    return j_rep, known - 2 * ell


def tate_curve(q: PadicElement) -> WeierstrassCurve:
    """Curve y^2 + x y = x^3 + a4(q) x + a6(q) with exact rational
    representatives of the coefficient series."""
    ell = q.val()
    order = q.known_mod // ell + 2
    a4, _ = _eval_int_series(tate_a4_coefficients(order), q)
    a6, _ = _eval_int_series(tate_a6_coefficients(order), q)
    return WeierstrassCurve(Fraction(1), Fraction(0), Fraction(0), a4, a6)


def normalize_parameter(q: PadicElement, z: PadicElement) -> PadicElement:
    """Multiply z by a power of q so that 0 <= v(z) < v(q)."""
    ell = q.val()
    if ell is INFINITY or ell <= 0:
        raise InputError("parameter must have positive valuation")
    if z.is_zero():
        raise InputError("z must be nonzero")
    if 0 <= z.val() < ell:
        return z
    k = z.val() // ell
    return z * q ** (-k)


def tate_curve_point(q: PadicElement, z: PadicElement) -> CurvePoint:
    """Point of the Tate curve at parameter z, via the standard coordinate
    series; exact rational representatives certified against q.known_mod.

    The two-sided sums over q^n z collapse to one-sided ones through
    t -> 1/t: the x-summand t/(1-t)^2 is invariant, while the y-summand
    t^2/(1-t)^3 turns into -t/(1-t)^3 at t = q^n / z.
    """
    ell = q.val()
    z = normalize_parameter(q, z)
    if z.rational == 1:
        raise InputError("z in q^Z maps to the origin")
    known = min(q.known_mod, z.known_mod) if z.known_mod is not INFINITY else q.known_mod
    n_max = (known + 3 * ell) // ell + 2
    qr = q.rational
    zr = z.rational

    def f(t: Fraction) -> Fraction:
        return t / (1 - t) ** 2

    def g(t: Fraction) -> Fraction:
        return t * t / (1 - t) ** 3

    def h(t: Fraction) -> Fraction:
        return -t / (1 - t) ** 3

    s1 = Fraction(0)
    x = f(zr)
    y = g(zr)
    qn = Fraction(1)
    for n in range(1, n_max + 1):
        qn *= qr
        s1 += n * qn / (1 - qn)
        x += f(qn * zr) + f(qn / zr)
        y += g(qn * zr) + h(qn / zr)
    return CurvePoint.affine(x - 2 * s1, y + s1)


def theta_valuation(q: PadicElement, z: PadicElement) -> Fraction:
    """Valuation of theta(z) = (1-z) prod (1-q^n z)(1-q^n/z), in v-units.

    With z normalized to 0 <= v(z) < v(q), every factor beyond the first is
    a unit, so truncating once n v(q) exceeds the working precision is
    exact.  Raises OnDivisorError when theta vanishes to working precision.
    """
    ell = q.val()
    z = normalize_parameter(q, z)
    zr = z.rational
    if zr == 1:
        raise OnDivisorError("z lies on the divisor (z in q^Z)")
    known = min(q.known_mod, z.known_mod) if z.known_mod is not INFINITY else q.known_mod
    p = q.prime
    total = 0
    lead = val_p(1 - zr, p)
    if lead is INFINITY or lead >= known:
        raise OnDivisorError("theta(z) vanishes to working precision")
    total += lead
    qr = q.rational
    qn = Fraction(1)
    n = 1
    while n * ell < known:
        qn *= qr
        for factor in (1 - qn * zr, 1 - qn / zr):
            v = val_p(factor, p)
            if v is INFINITY or v >= known:
                raise OnDivisorError("theta(z) vanishes to working precision")
            total += v
        n += 1
    return Fraction(total)


def local_height_from_parameter(q: PadicElement, z: PadicElement) -> Fraction:
    """Normalized local height of the point with parameter z on the Tate
    curve of parameter q, in v-units:

        lambda' = (ell/2) B2(v(z)/ell) + v(theta(z)).
    """
    ell = q.val()
    z = normalize_parameter(q, z)
    t = Fraction(z.val(), ell)
    return Fraction(ell, 2) * bernoulli2(t) + theta_valuation(q, z)
