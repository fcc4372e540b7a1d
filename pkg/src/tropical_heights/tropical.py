"""Tropicalized theta functions from finite Fourier data, their
normalization, the tropical Riemann theta function, theta characteristics
and quantization checks.

A tropicalized theta function is the concave piecewise affine function

    value(nu) = min over terms (u, a)  of  a + <u, nu>

extended to all of X*_R by the lattice automorphy factor.  The finite term
list carries a margin certificate: evaluation in the fundamental domain is
trusted only when the minimizing term has a full shell of lattice
translates present, so a too-small list fails loudly instead of returning
a wrong minimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .cvp import closest_lattice_point, floor_sqrt
from .degeneration import (
    DegenerationData,
    automorphy_factor,
    component_group,
    trivialization_valuation,
    trivialization_valuation_real,
)
from .errors import (
    InputError,
    InsufficientTermsError,
    NotPrincipallyPolarizedData,
)
from .linalg import mat_inverse, mat_vec


def _ceil_sqrt(x: Fraction) -> int:
    r = floor_sqrt(x)
    return r if Fraction(r) ** 2 == x else r + 1


@dataclass(frozen=True)
class TropicalTheta:
    """Finite Fourier data (u, a_u) over degeneration data.

    ``terms`` maps integer X-vectors (tuples) to exact rational
    coefficients.  ``margin`` is the number of lattice-translate shells
    required around a certified minimizer.
    """

    data: DegenerationData
    terms: dict
    margin: int = 2

    def __post_init__(self):
        if not self.terms:
            raise InputError("term list must be non-empty")
        if self.margin < 1:
            raise InputError("margin must be at least 1 for certified evaluation")
        clean = {}
        for u, a in dict(self.terms).items():
            key = tuple(int(x) for x in u)
            if len(key) != self.data.rank:
                raise InputError("Fourier index of wrong rank")
            if key in clean:
                raise InputError(f"duplicate Fourier index {key}")
            clean[key] = Fraction(a)
        object.__setattr__(self, "terms", clean)
        try:
            floats = [(float(a), u) for u, a in clean.items()]
        except OverflowError:
            floats = None  # fall back to exact-only scans
        object.__setattr__(self, "_float_terms", floats)

    # -- evaluation ----------------------------------------------------------

    def _min_term(self, nu0):
        """Exact minimum over the term list.

        Large lists are pre-screened in floating point with a conservative
        error margin; the winner is still decided by exact comparisons, so
        the result is certified.  Falls back to a full exact scan whenever
        the float path misbehaves (overflow, NaN).
        """
        items = self.terms.items()
        if self._float_terms is not None and len(self.terms) > 64:
            shortlist = self._float_shortlist(nu0)
            if shortlist is not None:
                items = shortlist
        best = None
        best_u = None
        for u, a in items:
            val = a + sum(Fraction(ui) * x for ui, x in zip(u, nu0))
            if best is None or val < best:
                best, best_u = val, [u]
            elif val == best:
                best_u.append(u)
        return best, best_u

    def _float_shortlist(self, nu0):
        import math

        nu_f = [float(x) for x in nu0]
        g = len(nu_f)
        fmin = math.inf
        scale = 1.0
        values = []
        for a_f, u in self._float_terms:
            acc = a_f
            mag = abs(a_f)
            for ui, xf in zip(u, nu_f):
                prod = ui * xf
                acc += prod
                mag += abs(prod)
            values.append(acc)
            if not math.isfinite(acc):
                return None
            if acc < fmin:
                fmin = acc
            if mag > scale:
                scale = mag
        # |float - exact| <= (g + 2) eps scale, doubled for safety
        margin = 2 * (g + 2) * 2.3e-16 * scale
        cutoff = fmin + margin
        out = []
        for acc, (a_f, u) in zip(values, self._float_terms):
            if acc <= cutoff:
                out.append((u, self.terms[u]))
        return out

    def _is_interior(self, u) -> bool:
        f = self.data.polarization_matrix
        rng = range(-self.margin, self.margin + 1)
        for shift in product(rng, repeat=self.data.rank):
            if all(s == 0 for s in shift):
                continue
            moved = tuple(
                u[i] + sum(f[i][j] * shift[j] for j in range(self.data.rank))
                for i in range(self.data.rank)
            )
            if moved not in self.terms:
                return False
        return True

    def value(self, nu) -> Fraction:
        """Tropicalized theta at nu, via reduction to the fundamental
        parallelotope and the translation cocycle."""
        nu = [Fraction(x) for x in nu]
        nu0, w = self.data.reduce_mod_lattice(nu)
        best, argmins = self._min_term(nu0)
        if not any(self._is_interior(u) for u in argmins):
            raise InsufficientTermsError(nu0)
        if all(x == 0 for x in w):
            return best
        return best - automorphy_factor(self.data, w, nu0)

    def normalized_value(self, nu) -> Fraction:
        """Lattice-invariant normalization: value + quadratic extension."""
        nu = [Fraction(x) for x in nu]
        return self.value(nu) + trivialization_valuation_real(self.data, nu)

    def active_term(self, nu) -> tuple:
        """A minimizing Fourier index at the reduced point (for cell
        bookkeeping); prefers an interior one."""
        nu0, _ = self.data.reduce_mod_lattice([Fraction(x) for x in nu])
        _, argmins = self._min_term(nu0)
        for u in argmins:
            if self._is_interior(u):
                return u
        raise InsufficientTermsError(nu0)


def generate_theta_terms(
    data: DegenerationData,
    margin: int = 2,
    constant: Fraction | int = 0,
    box_radius: int | None = None,
) -> TropicalTheta:
    """Build a certified-sufficient Fourier term list from (G, l).

    Terms are indexed by u = F w over a coordinate box of lattice vectors
    w, with coefficients c(w) + constant, where c is the trivialization
    valuation.  The box is sized so that for every point of the fundamental
    parallelotope the true minimizer lies at least ``margin`` shells away
    from the boundary: a Babai bound on the quadratic part gives a radius
    that provably contains all minimizers.
    """
    g = data.rank
    ginv = mat_inverse(data.gram)
    h = [x / 2 for x in mat_vec(ginv, data.linear_part)]
    r2 = Fraction(sum(abs(x) for row in data.gram for x in row), 4)
    if box_radius is None:
        bounds = []
        for i in range(g):
            spread = max(abs(h[i]), abs(1 + h[i]))
            coord = _ceil_sqrt(r2 * ginv[i][i])
            extra = spread.numerator // spread.denominator + 1
            bounds.append(extra + coord + margin)
    else:
        bounds = [int(box_radius)] * g
    total = 1
    for b in bounds:
        total *= 2 * b + 1
    if total > 300000:
        raise InputError(
            f"certified term box needs {total} terms; the Gram matrix is too "
            "ill-conditioned for a static term list at this rank"
        )
    f = data.polarization_matrix
    terms = {}
    for w in product(*[range(-b, b + 1) for b in bounds]):
        u = tuple(
            sum(f[i][j] * w[j] for j in range(g)) for i in range(g)
        )
        terms[u] = trivialization_valuation(data, w) + Fraction(constant)
    return TropicalTheta(data=data, terms=terms, margin=margin)


# ---------------------------------------------------------------------------
# Tropical Riemann theta function (closest-vector form)
# ---------------------------------------------------------------------------


def normalized_tropical_riemann_theta(data: DegenerationData, nu) -> Fraction:
    """Half the squared lattice distance min over w of (t+w)^T G (t+w) / 2,
    where t are the lattice coordinates of nu.  Exact, via certified CVP."""
    t = data.to_lattice_coords([Fraction(x) for x in nu])
    _, minimum = closest_lattice_point(data.gram, t)
    return minimum / 2


def tropical_riemann_theta(data: DegenerationData, nu) -> Fraction:
    """Concave min-form min over w of ([Mw, Mw]/2 + [Mw, nu]).

    Computed from the normalized variant by subtracting the quadratic term;
    always <= 0, and 0 exactly on the Voronoi cell of the origin.
    """
    nu = [Fraction(x) for x in nu]
    return normalized_tropical_riemann_theta(data, nu) - data.inner_product(nu, nu) / 2


def closest_lattice_vector(data: DegenerationData, nu) -> tuple[list, Fraction]:
    """Lattice vector (X*-coordinates) closest to nu, with the half squared
    distance."""
    t = data.to_lattice_coords([Fraction(x) for x in nu])
    w, minimum = closest_lattice_point(data.gram, t)
    return data.from_lattice_coords([-x for x in w]), minimum / 2


# ---------------------------------------------------------------------------
# Theta characteristic (principally polarized data)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ThetaCharacteristic:
    shift: list          # k, X*-coordinates (rationals), 2k integral
    shift_mod_lattice: list  # k reduced into the fundamental parallelotope
    constant: Fraction   # r with ||theta|| = ||Psi|| o translate(k) + r
    base_constant: Fraction  # r' in the decomposition r = -[k,k]/2 + r'


def evaluation_grid(data: DegenerationData, min_count: int = 50) -> list:
    """Deterministic rational grid inside the fundamental parallelotope.

    Denominator-7 lattice points (which avoid cell walls for generic data)
    visited in a strided order for coverage, topped up with denominator-53
    diagonal points when the rank-g grid alone is too small.
    """
    g = data.rank
    strides = [3, 5, 2, 6][:g] + [3] * max(0, g - 4)
    total = 7**g
    points = []
    for k in range(min(total, min_count)):
        digits = [(k // 7**i) % 7 for i in range(g)]
        t = [Fraction((strides[i] * (digits[i] + k) + i) % 7, 7) for i in range(g)]
        points.append(data.from_lattice_coords(t))
    j = 1
    while len(points) < min_count:
        points.append(data.from_lattice_coords([Fraction(j % 52 + 1, 53)] * g))
        j += 1
    return points


def theta_characteristic(theta: TropicalTheta, grid_size: int = 50) -> ThetaCharacteristic:
    """Solve for the translation relating the normalized theta to the
    normalized tropical Riemann theta, and certify the constant offset on a
    deterministic grid (exact equality at every point)."""
    data = theta.data
    if not data.is_principally_polarized():
        raise NotPrincipallyPolarizedData(
            "polarization map is not unimodular; no theta characteristic"
        )
    # Solve <F w, k> = l(w)/2 for all w, i.e. F^T (2k) = l.
    ft = [list(row) for row in zip(*data.polarization_matrix)]
    two_k = mat_vec(mat_inverse(ft), [Fraction(x) for x in data.linear_part])
    for x in two_k:
        if Fraction(x).denominator != 1:
            raise NotPrincipallyPolarizedData("2k is not an integral vector")
    k = [Fraction(x) / 2 for x in two_k]

    base = [Fraction(0)] * data.rank
    r = theta.normalized_value(base) - normalized_tropical_riemann_theta(
        data, [b + ki for b, ki in zip(base, k)]
    )
    for nu in evaluation_grid(data, grid_size):
        shifted = [x + ki for x, ki in zip(nu, k)]
        value = theta.normalized_value(nu) - normalized_tropical_riemann_theta(
            data, shifted
        )
        if value != r:
            raise NotPrincipallyPolarizedData(
                f"offset not constant: {value} != {r} at {nu}"
            )
    kappa, _ = data.reduce_mod_lattice(k)
    r_base = r + data.inner_product(k, k) / 2
    return ThetaCharacteristic(
        shift=k, shift_mod_lattice=kappa, constant=r, base_constant=r_base
    )


# ---------------------------------------------------------------------------
# Quantization over the component group
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuantizationReport:
    modulus: int               # N with N * (X*/Y) = 0
    values: list               # (representative, normalized value) pairs
    violations: list

    @property
    def passed(self) -> bool:
        return not self.violations


def quantization_check(theta: TropicalTheta, modulus: int | None = None) -> QuantizationReport:
    """Check that the normalized theta takes values in (1/2N) Z on the
    component group X*/Y, with N annihilating the group."""
    group = component_group(theta.data)
    if group.representatives is None:
        raise InputError("component group too large to enumerate")
    n = group.exponent if modulus is None else int(modulus)
    if n % group.exponent != 0:
        raise InputError(
            f"modulus {n} does not annihilate the component group "
            f"(exponent {group.exponent})"
        )
    values = []
    violations = []
    for rep in group.representatives:
        val = theta.normalized_value([Fraction(x) for x in rep])
        values.append((list(rep), val))
        if (2 * n * val).denominator != 1:
            violations.append((list(rep), val))
    return QuantizationReport(modulus=n, values=values, violations=violations)


# ---------------------------------------------------------------------------
# Tensor product of normalized theta data
# ---------------------------------------------------------------------------


def tensor_normalized(t1: TropicalTheta, t2: TropicalTheta) -> TropicalTheta:
    """Tropical product: Gram matrices and linear parts add, coefficients
    combine by min-plus convolution.  The normalized value of the result is
    the pointwise sum of the inputs' normalized values."""
    d1, d2 = t1.data, t2.data
    if d1.rank != d2.rank:
        raise InputError("rank mismatch in tensor product")
    if d1.embedding != d2.embedding:
        raise InputError("tensor product requires identical period lattices")
    data = DegenerationData(
        rank=d1.rank,
        embedding=d1.embedding,
        gram=[
            [d1.gram[i][j] + d2.gram[i][j] for j in range(d1.rank)]
            for i in range(d1.rank)
        ],
        linear_part=[a + b for a, b in zip(d1.linear_part, d2.linear_part)],
    )
    terms: dict = {}
    for u1, a1 in t1.terms.items():
        for u2, a2 in t2.terms.items():
            u = tuple(x + y for x, y in zip(u1, u2))
            val = a1 + a2
            if u not in terms or val < terms[u]:
                terms[u] = val
    return TropicalTheta(data=data, terms=terms, margin=min(t1.margin, t2.margin))
