"""Degeneration data for a totally degenerate abelian variety and the
integer-valued quadratic map attached to its trivialization.

Concrete coordinate conventions (fixed once, used everywhere):

* ``X*`` is Z^g with its standard basis; evaluation against the dual
  lattice ``X`` is the ordinary dot product.
* The period lattice ``Y`` sits inside X* as the column span of the
  ``embedding`` matrix M, so a lattice vector with Y-coordinates w is the
  X*-vector M w.
* ``gram`` is the positive definite symmetric integer matrix G of the
  pairing on Y-coordinates, ``linear_part`` the integer vector l of the
  linear correction, so the trivialization valuation on the lattice is
  w -> (w^T G w + l^T w) / 2.
* The polarization map from Y-coordinates to X is forced by the cocycle
  identity to be F = M^{-T} G, which must therefore be an integer matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InputError
from .linalg import (
    determinant,
    int_matrix_inverse,
    is_positive_definite,
    is_symmetric,
    mat_inverse,
    mat_mul,
    mat_vec,
    smith_normal_form,
    transpose,
)

DEFAULT_ENUMERATION_BOUND = 10**6


@dataclass(frozen=True)
class DegenerationData:
    """Rank, lattice embedding, Gram matrix and linear part.

    Immutable; derived matrices are computed once in ``__post_init__``.
    """

    rank: int
    embedding: list  # g x g integer matrix M, columns = Y-generators in X*
    gram: list       # g x g integer symmetric positive definite matrix G
    linear_part: list  # length-g integer vector l

    def __post_init__(self):
        g = self.rank
        if g < 1:
            raise InputError("rank must be >= 1")
        for name, m in (("embedding", self.embedding), ("gram", self.gram)):
            if len(m) != g or any(len(row) != g for row in m):
                raise InputError(f"{name} must be {g}x{g}")
            if any(not isinstance(x, int) for row in m for x in row):
                raise InputError(f"{name} must have integer entries")
        if len(self.linear_part) != g or any(
            not isinstance(x, int) for x in self.linear_part
        ):
            raise InputError("linear_part must be a length-g integer vector")
        if determinant(self.embedding) == 0:
            raise InputError("embedding matrix must be nonsingular")
        if not is_symmetric(self.gram):
            raise InputError("gram matrix must be symmetric")
        if not is_positive_definite(self.gram):
            raise InputError("gram matrix must be positive definite")
        minv = mat_inverse(self.embedding)
        phi = mat_mul(transpose(minv), [[Fraction(x) for x in row] for row in self.gram])
        for row in phi:
            for x in row:
                if Fraction(x).denominator != 1:
                    raise InputError(
                        "gram matrix incompatible with embedding: the induced "
                        "polarization map M^{-T} G is not integral"
                    )
        for i in range(g):
            if (self.gram[i][i] + self.linear_part[i]) % 2 != 0:
                raise InputError(
                    "parity violation: gram[i][i] + linear_part[i] must be even "
                    "for the trivialization valuation to be integer-valued"
                )
        object.__setattr__(self, "_embedding_inv", minv)
        object.__setattr__(
            self, "_polarization", [[int(x) for x in row] for row in phi]
        )

    # -- derived matrices ----------------------------------------------------

    @property
    def embedding_inverse(self) -> list:
        return self._embedding_inv

    @property
    def polarization_matrix(self) -> list:
        """Integer matrix F = M^{-T} G mapping Y-coordinates into X."""
        return self._polarization

    @property
    def covolume(self) -> int:
        return abs(int(determinant(self.embedding)))

    def is_principally_polarized(self) -> bool:
        return abs(int(determinant(self.polarization_matrix))) == 1

    def inner_product_matrix(self) -> list:
        """Rational matrix H of the induced inner product on X*-coordinates:
        [mu, nu] = mu^T H nu, normalized so [Mw, Mw'] = w^T G w'."""
        minv = self.embedding_inverse
        return mat_mul(transpose(minv), mat_mul(self.gram, minv))

    # -- coordinate helpers ---------------------------------------------------

    def to_lattice_coords(self, nu) -> list:
        """X*-vector (rationals) -> Y-coordinates (rationals)."""
        return mat_vec(self.embedding_inverse, [Fraction(x) for x in nu])

    def from_lattice_coords(self, w) -> list:
        return mat_vec(self.embedding, list(w))

    def reduce_mod_lattice(self, nu) -> tuple[list, list]:
        """Split nu = nu0 + M w with w integral and M^{-1} nu0 in [0, 1)^g.

        Returns (nu0, w).
        """
        t = self.to_lattice_coords(nu)
        w = [x.numerator // x.denominator for x in t]  # floor
        nu0 = [Fraction(a) - b for a, b in zip(nu, self.from_lattice_coords(w))]
        return nu0, w

    def inner_product(self, mu, nu) -> Fraction:
        h = self.inner_product_matrix()
        mu = [Fraction(x) for x in mu]
        nu = [Fraction(x) for x in nu]
        return sum(
            mu[i] * h[i][j] * nu[j] for i in range(self.rank) for j in range(self.rank)
        )


def trivialization_valuation(data: DegenerationData, w) -> Fraction:
    """Quadratic-plus-linear valuation (w^T G w + l^T w)/2 on Y-coordinates.

    Integer-valued on the lattice by the parity condition enforced at
    construction; returned as an exact Fraction for uniformity.
    """
    w = list(w)
    g = data.gram
    quad = sum(w[i] * g[i][j] * w[j] for i in range(data.rank) for j in range(data.rank))
    lin = sum(a * b for a, b in zip(data.linear_part, w))
    return Fraction(quad + lin, 2)


def trivialization_valuation_real(data: DegenerationData, nu) -> Fraction:
    """Unique quadratic extension of the lattice valuation to X*_Q.

    Evaluates (t^T G t + l^T t)/2 with t the Y-coordinates of nu; restricted
    to the lattice it agrees with ``trivialization_valuation``.
    """
    t = data.to_lattice_coords(nu)
    g = data.gram
    quad = sum(t[i] * g[i][j] * t[j] for i in range(data.rank) for j in range(data.rank))
    lin = sum(a * b for a, b in zip(data.linear_part, t))
    return (quad + lin) / 2


def automorphy_factor(data: DegenerationData, w, nu) -> Fraction:
    """1-cocycle value c(w) + <F w, nu> controlling lattice translations."""
    fw = mat_vec(data.polarization_matrix, list(w))
    pairing = sum(Fraction(a) * Fraction(b) for a, b in zip(fw, nu))
    return trivialization_valuation(data, w) + pairing


@dataclass(frozen=True)
class ComponentGroup:
    """The finite group X*/Y presented by its invariant factors."""

    invariant_factors: list  # d_1 | d_2 | ... with unit factors dropped
    exponent: int
    representatives: list | None  # X*-vectors, one per element (or None)
    _transform: list = field(repr=False)        # U with U M V = diag
    _transform_inv: list = field(repr=False)    # U^{-1}
    _diagonal: list = field(repr=False)         # full SNF diagonal incl. units

    @property
    def order(self) -> int:
        out = 1
        for d in self._diagonal:
            out *= d
        return out

    def reduce(self, v) -> tuple:
        """Canonical residue tuple of an X*-vector modulo the lattice."""
        image = mat_vec(self._transform, list(v))
        return tuple(int(x) % d for x, d in zip(image, self._diagonal))

    def representative(self, residue) -> list:
        return mat_vec(self._transform_inv, list(residue))


def component_group(
    data: DegenerationData, enumeration_bound: int = DEFAULT_ENUMERATION_BOUND
) -> ComponentGroup:
    """Component group of the degeneration via Smith normal form.

    Representatives are enumerated only when the order is at most
    ``enumeration_bound``.
    """
    diag, u, _v = smith_normal_form(data.embedding)
    if any(d == 0 for d in diag):
        raise InputError("embedding matrix must be nonsingular")
    u_inv = int_matrix_inverse(u)
    factors = [d for d in diag if d != 1]
    exponent = diag[-1] if diag else 1
    order = 1
    for d in diag:
        order *= d
    reps = None
    if order <= enumeration_bound:
        reps = []
        idx = [0] * len(diag)
        while True:
            reps.append(mat_vec(u_inv, idx))
            for k in range(len(diag) - 1, -1, -1):
                idx[k] += 1
                if idx[k] < diag[k]:
                    break
                idx[k] = 0
            else:
                break
    return ComponentGroup(
        invariant_factors=factors if factors else [1],
        exponent=exponent,
        representatives=reps,
        _transform=u,
        _transform_inv=u_inv,
        _diagonal=diag,
    )
