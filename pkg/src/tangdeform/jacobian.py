"""The degree-d piece of the Jacobian ideal of a form f.

It is spanned by the (n+1)^2 products x_b * df/dx_g and is the tangent space
at f to its GL(n+1)-orbit.  Coordinates are taken in the grevlex-decreasing
monomial basis of the degree-d forms.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegreeMismatch, DimensionMismatch, MixedFields, ZeroPolynomial
from .linalg import DenseMatrix, rref, solve
from .poly import HomPoly, monomial_basis, partial_derivative, variable, zero_form


@dataclass(frozen=True)
class CoeffMatrix:
    """Coefficients a[b][g] of h = sum a[b][g] * x_b * df/dx_g."""

    a: DenseMatrix

    @property
    def size(self) -> int:
        return self.a.rows

    def expand(self, f: HomPoly) -> HomPoly:
        """Re-expand the combination against ``f``."""
        if self.a.field != f.field:
            raise MixedFields(f"{self.a.field} and {f.field}")
        if self.a.rows != f.nvars:
            raise DimensionMismatch(f"{self.a.rows}x{self.a.rows} coefficients for {f.nvars} variables")
        partials = [partial_derivative(f, g) for g in range(f.nvars)]
        out = zero_form(f.nvars, f.degree, f.field)
        for b in range(f.nvars):
            xb = variable(b, f.nvars, f.field)
            for g in range(f.nvars):
                c = self.a[b, g]
                if c and partials[g]:
                    out = out + (xb * partials[g]).scale(c)
        return out


@dataclass(frozen=True)
class JacobianPiece:
    f: HomPoly
    generators: tuple  # ((b, g, x_b * df/dx_g), ...) in (b, g) lexicographic order
    basis: tuple  # echelonized coordinate vectors
    dimension: int

    @property
    def ambient_dimension(self) -> int:
        return len(monomial_basis(self.f.nvars, self.f.degree))

    def generator_matrix(self) -> DenseMatrix:
        """Columns are the generator coordinate vectors."""
        cols = [g.to_vector() for _, _, g in self.generators]
        return DenseMatrix.from_columns(cols, self.f.field)

    def basis_polys(self) -> list:
        f = self.f
        return [HomPoly.from_vector(v, f.nvars, f.degree, f.field) for v in self.basis]


def _generators(f: HomPoly) -> tuple:
    partials = [partial_derivative(f, g) for g in range(f.nvars)]
    gens = []
    for b in range(f.nvars):
        xb = variable(b, f.nvars, f.field)
        for g in range(f.nvars):
            gens.append((b, g, HomPoly(f.nvars, f.degree, f.field, (xb * partials[g]).terms)))
    return tuple(gens)


def jacobian_piece(f: HomPoly) -> JacobianPiece:
    if f.is_zero():
        raise ZeroPolynomial("Jacobian piece of the zero polynomial")
    if f.degree < 1:
        raise DegreeMismatch("degree must be at least 1")
    gens = _generators(f)
    ech = rref(DenseMatrix(f.field, [g.to_vector() for _, _, g in gens]))
    basis = tuple(tuple(r) for r in ech.reduced.entries[:ech.rank])
    return JacobianPiece(f, gens, basis, ech.rank)


def membership(h: HomPoly, J: JacobianPiece) -> CoeffMatrix | None:
    """Coefficients writing ``h`` in terms of the generators, or None.

    When the generators are dependent, free coefficients are set to zero.
    """
    f = J.f
    if h.nvars != f.nvars:
        raise DimensionMismatch(f"{h.nvars} vs {f.nvars} variables")
    if h.field != f.field:
        raise MixedFields(f"{h.field} and {f.field}")
    if h.degree != f.degree and not h.is_zero():
        raise DegreeMismatch(f"h has degree {h.degree}, f has degree {f.degree}")
    x = solve(J.generator_matrix(), h.to_vector() if h.degree == f.degree else [f.field.zero] * J.ambient_dimension)
    if x is None:
        return None
    n1 = f.nvars
    coeffs = CoeffMatrix(DenseMatrix(f.field, [x[b * n1:(b + 1) * n1] for b in range(n1)]))
    if coeffs.expand(f) != HomPoly(n1, f.degree, f.field, h.terms):
        raise ArithmeticError("membership witness failed re-expansion")
    return coeffs


def generators_rank(p: HomPoly) -> int:
    """Rank of the full family {x_i * dp/dx_j}."""
    return jacobian_piece(p).dimension
