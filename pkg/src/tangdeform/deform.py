"""Tangential deformations f + h with h in the degree-d Jacobian piece of f.

Covers the smoothability decision for forms with isolated singularities, a
seeded random search for smoothing deformations, obstruction certificates
at points of multiplicity >= 3, explicit totally tangentially unstable
products, the Weierstrass cubic check and the tangent-space intersection
experiment.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from .errors import (
    DimensionMismatch,
    IncompletePointList,
    MultiplicityMismatch,
    MultiplicityTooLow,
    NotASquare,
    NotSingular,
    NotSmooth,
    SingularCubic,
    UnsupportedField,
    ZeroPolynomial,
)
from .jacobian import CoeffMatrix, JacobianPiece, generators_rank, jacobian_piece, membership
from .linalg import DenseMatrix, rref, subspace_intersection
from .poly import HomPoly, ProjPoint, gradient_vanishes_at, monomial_basis, multiplicity_at, substitute_matrix
from .scalar import QQ, Field
from .smoothness import check_characteristic, has_isolated_singularities, is_smooth, points_complete

SMOOTHABLE = "Smoothable"
OBSTRUCTED = "Obstructed"
NOT_APPLICABLE = "NotApplicable"


def trial_rng(seed: int, index: int) -> random.Random:
    """Independent generator for one trial, derived from (seed, index) only."""
    return random.Random(f"{seed}:{index}")


@dataclass(frozen=True)
class ObstructionCertificate:
    f: HomPoly
    point: ProjPoint
    multiplicity: int
    # (n+1)^2 entries in (b, g) order; math.inf marks a zero generator
    generator_multiplicities: tuple


@dataclass(frozen=True)
class SmoothabilityDecision:
    decision: str
    points: tuple  # ((ProjPoint, multiplicity), ...)
    certificate: ObstructionCertificate | None = None
    reason: str | None = None


@dataclass(frozen=True)
class SmoothingCertificate:
    f: HomPoly
    coeffs: CoeffMatrix
    h: HomPoly
    verified_smooth: bool
    trials_used: int
    seed: int

    def revalidate(self) -> bool:
        return self.coeffs.expand(self.f) == self.h and is_smooth(self.f + self.h)


@dataclass
class SmoothingSearch:
    """Outcome of a budgeted search; ``certificate`` is None on failure."""

    certificate: SmoothingCertificate | None
    trials_used: int
    seed: int
    budget: int
    failures: dict = field(default_factory=dict)


def obstruction_certificate(f: HomPoly, p: ProjPoint) -> ObstructionCertificate:
    m = multiplicity_at(f, p)
    if m <= 2:
        raise MultiplicityTooLow(f"multiplicity {m} at {p}")
    mults = []
    for _, _, g in jacobian_piece(f).generators:
        mults.append(math.inf if g.is_zero() else multiplicity_at(g, p))
    if min(mults) < 2:
        raise ArithmeticError(f"generator with multiplicity {min(mults)} at a point of multiplicity {m}")
    return ObstructionCertificate(f, p, m, tuple(mults))


def decide_smoothable(f: HomPoly, singular_points: Sequence[ProjPoint], *, verify_complete: bool = True
                      ) -> SmoothabilityDecision:
    """Smoothable iff every singular point has multiplicity exactly 2.

    The supplied points must all be singular and, unless ``verify_complete``
    is off, account for the whole singular locus over the algebraic closure.
    """
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial")
    if is_smooth(f):
        raise NotSingular(f"{f} is smooth")
    if not has_isolated_singularities(f):
        return SmoothabilityDecision(NOT_APPLICABLE, (), reason="singular locus has positive dimension")
    for p in singular_points:
        if not gradient_vanishes_at(f, p):
            raise IncompletePointList(f"{p} is not a singular point")
    if verify_complete and not points_complete(f, singular_points):
        raise IncompletePointList("the supplied points miss part of the singular locus")
    points = tuple((p, multiplicity_at(f, p)) for p in singular_points)
    for p, m in points:
        if m >= 3:
            return SmoothabilityDecision(OBSTRUCTED, points, obstruction_certificate(f, p))
    return SmoothabilityDecision(SMOOTHABLE, points)


def random_coeffs(f: HomPoly, rng: random.Random, bound: int = 3) -> CoeffMatrix:
    K, n1 = f.field, f.nvars
    return CoeffMatrix(DenseMatrix(K, [[K.random_element(rng, bound) for _ in range(n1)] for _ in range(n1)]))


def smoothing_search(f: HomPoly, singular_points: Sequence[ProjPoint] = (), budget: int = 200, seed: int = 0,
                     bound: int = 3) -> SmoothingSearch:
    """Try up to ``budget`` random h in the Jacobian piece until f + h is smooth.

    Coefficients are uniform on [-bound, bound] over Q and on F_p otherwise.
    A trial whose f + h is still singular at one of ``singular_points`` is
    rejected without a Groebner computation.
    """
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial")
    check_characteristic(f)
    if is_smooth(f):
        raise NotSingular(f"{f} is smooth")
    failures = {"zero": 0, "singular_at_supplied_point": 0, "singular_elsewhere": 0}
    for trial in range(1, budget + 1):
        coeffs = random_coeffs(f, trial_rng(seed, trial), bound)
        h = coeffs.expand(f)
        g = f + h
        if g.is_zero():
            failures["zero"] += 1
        elif any(gradient_vanishes_at(g, p) for p in singular_points):
            failures["singular_at_supplied_point"] += 1
        elif not is_smooth(g):
            failures["singular_elsewhere"] += 1
        else:
            cert = SmoothingCertificate(f, coeffs, h, True, trial, seed)
            return SmoothingSearch(cert, trial, seed, budget, failures)
    return SmoothingSearch(None, budget, seed, budget, failures)


def find_smoothing(f: HomPoly, singular_points: Sequence[ProjPoint] = (), budget: int = 200, seed: int = 0,
                   bound: int = 3) -> SmoothingCertificate | None:
    return smoothing_search(f, singular_points, budget, seed, bound).certificate


def smoothing_generator_at(f: HomPoly, p: ProjPoint):
    """First (b, g, x_b*df/dx_g), in (b, g) order, with f + generator smooth at p."""
    m = multiplicity_at(f, p)
    if m != 2:
        raise MultiplicityMismatch(f"multiplicity {m} at {p}, expected 2")
    for b, g, gen in jacobian_piece(f).generators:
        h = f + gen
        if h and multiplicity_at(h, p) <= 1:
            return b, g, gen
    return None


# -- totally tangentially unstable products ---------------------------------

TTU_FLAGS = ("p1_smooth", "p2_smooth", "d1_ge_3", "d2_ge_3", "degrees_distinct", "total_ge_7",
             "rank_full_p1", "rank_full_p2")


@dataclass(frozen=True)
class TtuConstruction:
    p1: HomPoly
    p2: HomPoly
    f: HomPoly
    d1: int
    d2: int
    hypothesis_report: dict

    @property
    def certified(self) -> bool:
        return certify(self.hypothesis_report)


def certify(report: dict) -> bool:
    return all(report[k] for k in TTU_FLAGS)


def construct_ttu(p1: HomPoly, p2: HomPoly) -> TtuConstruction:
    """f = p1 * p2 with the hypotheses under which f is certified TTU."""
    if p1.nvars != p2.nvars:
        raise DimensionMismatch(f"{p1.nvars} vs {p2.nvars} variables")
    if p1.nvars < 3:
        raise DimensionMismatch("needs at least 3 variables")
    for p in (p1, p2):
        if p.is_zero():
            raise ZeroPolynomial("factor is zero")
    full = p1.nvars**2
    d1, d2 = p1.degree, p2.degree
    report = {
        "p1_smooth": is_smooth(p1),
        "p2_smooth": is_smooth(p2),
        "d1_ge_3": d1 >= 3,
        "d2_ge_3": d2 >= 3,
        "degrees_distinct": d1 != d2,
        "total_ge_7": d1 + d2 >= 7,
        "rank_full_p1": generators_rank(p1) == full,
        "rank_full_p2": generators_rank(p2) == full,
    }
    return TtuConstruction(p1, p2, p1 * p2, d1, d2, report)


# -- Weierstrass cubic ------------------------------------------------------


@dataclass(frozen=True)
class WeierstrassCheck:
    f: HomPoly
    h: HomPoly
    t: object
    s: object
    coeffs: CoeffMatrix | None
    membership: bool
    substitution_check: bool
    independent_of_f: bool

    @property
    def passed(self) -> bool:
        return self.membership and self.substitution_check and self.independent_of_f


def weierstrass_cubic(a, b, field: Field = QQ) -> HomPoly:
    """z*y^2 - x^3 - a*z^2*x - b*z^3 with (x, y, z) = (x0, x1, x2)."""
    K = field
    a, b = K(a), K(b)
    terms = {(0, 2, 1): K.one, (3, 0, 0): K.neg(K.one), (1, 0, 2): K.neg(a), (0, 0, 3): K.neg(b)}
    return HomPoly(3, 3, K, terms)


def verify_weierstrass_counterexample(a, b, t, s=None, field: Field = QQ) -> WeierstrassCheck:
    """Check that h = z*y^2 is a nontrivial tangentially trivial direction.

    f + t*h must equal f composed with y -> s*y, where s^2 = 1 + t.
    """
    K = field
    a, b, t = K(a), K(b), K(t)
    disc = K.add(K.mul(K.from_int(4), K.pow(a, 3)), K.mul(K.from_int(27), K.pow(b, 2)))
    if not disc:
        raise SingularCubic("4a^3 + 27b^2 = 0")
    target = K.add(K.one, t)
    if s is None:
        s = K.sqrt(target)
        if s is None:
            raise NotASquare(f"1 + t = {K.format(target)} has no square root in {K}")
    else:
        s = K(s)
        if K.mul(s, s) != target:
            raise NotASquare(f"{K.format(s)}^2 != 1 + t")
    f = weierstrass_cubic(a, b, K)
    h = HomPoly(3, 3, K, {(0, 2, 1): K.one})
    coeffs = membership(h, jacobian_piece(f))
    A = DenseMatrix.diagonal([K.one, s, K.one], K)
    substitution_ok = f + h.scale(t) == substitute_matrix(f, A)
    independent = rref(DenseMatrix(K, [f.to_vector(), h.to_vector()])).rank == 2
    return WeierstrassCheck(f, h, t, s, coeffs, coeffs is not None, substitution_ok, independent)


# -- tangent space intersections --------------------------------------------


@dataclass(frozen=True)
class IntersectionExperiment:
    dimensions: tuple
    forms: tuple
    seed: int

    @property
    def succeeded(self) -> bool:
        return self.dimensions[-1] == 0


def intersection_dimensions(forms: Sequence[HomPoly]) -> list:
    """dim of J_{g_1,d} cap ... cap J_{g_i,d} for i = 1, 2, ..."""
    first = forms[0]
    dim = len(monomial_basis(first.nvars, first.degree))
    dims, current = [], None
    for g in forms:
        piece: JacobianPiece = jacobian_piece(g)
        bases = [list(piece.basis)] if current is None else [current, list(piece.basis)]
        current = subspace_intersection(bases, g.field, dim)
        dims.append(len(current))
    return dims


def tangent_intersection_experiment(f: HomPoly, count: int, seed: int = 0, bound: int = 3) -> IntersectionExperiment:
    """Intersect Jacobian pieces of ``count`` nearby forms f + r_i/(10+i).

    r_i has integer coefficients uniform on [-bound, bound], drawn from the
    generator for (seed, i).
    """
    if f.field != QQ:
        raise UnsupportedField("the experiment runs over Q")
    if count < 1:
        raise ValueError("count must be positive")
    if not is_smooth(f):
        raise NotSmooth(f"{f} is singular")
    K = f.field
    monos = monomial_basis(f.nvars, f.degree)
    forms = []
    for i in range(1, count + 1):
        rng = trial_rng(seed, i)
        eps = mpq(1, 10 + i)
        r = HomPoly(f.nvars, f.degree, K, {m: K.mul(eps, K.from_int(rng.randint(-bound, bound))) for m in monos})
        forms.append(f + r)
    return IntersectionExperiment(tuple(intersection_dimensions(forms)), tuple(forms), seed)


__all__ = [
    "IntersectionExperiment",
    "ObstructionCertificate",
    "SmoothabilityDecision",
    "SmoothingCertificate",
    "SmoothingSearch",
    "TtuConstruction",
    "WeierstrassCheck",
    "certify",
    "construct_ttu",
    "decide_smoothable",
    "find_smoothing",
    "intersection_dimensions",
    "obstruction_certificate",
    "smoothing_generator_at",
    "smoothing_search",
    "tangent_intersection_experiment",
    "verify_weierstrass_counterexample",
    "weierstrass_cubic",
]
