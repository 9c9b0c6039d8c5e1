"""Brute-force finite-field oracles.

Everything here enumerates: matrices of GL(n+1, F_p) for projective
equivalence and tangential triviality, normalized forms for divisor search,
fibers of a pencil, and Moebius maps permuting the roots of a binary form.
The finite-field scans are heuristic stand-ins for statements about
complex forms: "for all small t" becomes "for all t in F_p".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import gmpy2
from gmpy2 import mpq

from .errors import (
    BudgetExceeded,
    DegreeMismatch,
    DimensionMismatch,
    MixedFields,
    NotBinaryForm,
    NotCoprime,
    TooFewPoints,
    UnsupportedField,
    ZeroPolynomial,
)
from .jacobian import jacobian_piece
from .linalg import DenseMatrix, rref, solve
from .poly import HomPoly, ProjPoint, divide_exact, monomial_basis, projective_points, substitute_matrix
from .scalar import Field

STRICT = "Strict"
PROJECTIVE = "Projective"
INVERTIBLE_ONLY = "InvertibleOnly"
ALL_MATRICES = "AllMatrices"

# largest p allowed for matrix enumeration, keyed by n = nvars - 1
DEFAULT_CAPS = {1: 13, 2: 5, 3: 3}
DEFAULT_DIVISOR_CAP = 10**6


def _require_prime_field(*forms: HomPoly) -> Field:
    K = forms[0].field
    for f in forms[1:]:
        if f.field != K:
            raise MixedFields(f"{f.field} and {K}")
    if not K.is_prime_field:
        raise UnsupportedField("finite-field oracles need --field fp:<p>")
    return K


def check_enumeration_budget(nvars: int, p: int, caps: dict | None = None):
    caps = DEFAULT_CAPS if caps is None else caps
    n = nvars - 1
    if n not in caps or p > caps[n]:
        raise BudgetExceeded(f"matrix enumeration over GL({nvars}, F_{p}) exceeds the cost cap {caps}")


# -- projective equivalence ---------------------------------------------------


@dataclass(frozen=True)
class EquivalenceWitness:
    """``f o A == lam * g`` (``lam == 1`` in Strict mode)."""

    A: DenseMatrix
    lam: int
    mode: str

    def verify(self, f: HomPoly, g: HomPoly) -> bool:
        return substitute_matrix(f, self.A) == g.scale(self.lam)


def _value_table(f: HomPoly, vectors: Sequence[tuple]) -> dict:
    return {v: f.evaluate(v) for v in vectors}


def _matrix_search(f: HomPoly, g: HomPoly, lam: int, invertible: bool):
    """First A, in column-major odometer order, with f o A == lam * g.

    Columns are chosen one at a time; after fixing c_0..c_k every point
    X = (x_0..x_k, 0..0) with x_k != 0 must satisfy f(sum x_i c_i) = lam*g(X),
    which prunes almost every branch.  Survivors are confirmed symbolically.
    """
    K = f.field
    p, n1 = K.characteristic, f.nvars
    vectors = list(itertools.product(range(p), repeat=n1))
    fval = _value_table(f, vectors)
    gval = {v: K.mul(lam, c) for v, c in _value_table(g, vectors).items()}
    target = g.scale(lam)
    prefixes = [[x for x in itertools.product(range(p), repeat=k + 1) if x[k]] for k in range(n1)]
    cols: list = []
    spans: list = [{(0,) * n1}]  # spans[k] = span of the first k columns

    def combo(x):
        out = [0] * n1
        for coef, c in zip(x, cols):
            if coef:
                for j in range(n1):
                    out[j] = (out[j] + coef * c[j]) % p
        return tuple(out)

    def dfs(k):
        if k == n1:
            A = DenseMatrix(K, [[cols[c][j] for c in range(n1)] for j in range(n1)])
            return A if substitute_matrix(f, A) == target else None
        for v in vectors:
            if invertible and v in spans[k]:
                continue
            cols.append(v)
            ok = all(fval[combo(x)] == gval[x + (0,) * (n1 - k - 1)] for x in prefixes[k])
            if ok:
                if invertible:
                    spans.append({tuple((a + c * b) % p for a, b in zip(s, v)) for s in spans[k] for c in range(p)})
                found = dfs(k + 1)
                if invertible:
                    spans.pop()
                if found is not None:
                    return found
            cols.pop()
        return None

    return dfs(0)


def is_equivalent_fp(f: HomPoly, g: HomPoly, mode: str = STRICT, *, all_matrices: bool = False,
                     caps: dict | None = None) -> EquivalenceWitness | None:
    """Exhaustive search for A (and a scalar in Projective mode) with f o A = lam*g.

    Scalars are tried in increasing order; for each, the first matrix in
    column-major odometer order wins.  ``all_matrices`` admits singular A.
    """
    K = _require_prime_field(f, g)
    if f.nvars != g.nvars:
        raise DimensionMismatch(f"{f.nvars} vs {g.nvars} variables")
    check_enumeration_budget(f.nvars, K.characteristic, caps)
    if mode not in (STRICT, PROJECTIVE):
        raise ValueError(f"unknown mode {mode!r}")
    if f.degree != g.degree and f and g:
        return None
    lams = [1] if mode == STRICT else range(1, K.characteristic)
    for lam in lams:
        A = _matrix_search(f, g, lam, invertible=not all_matrices)
        if A is not None:
            return EquivalenceWitness(A, lam, mode)
    return None


# -- tangential triviality ----------------------------------------------------


@dataclass(frozen=True)
class CandidateResult:
    h: HomPoly
    passes: bool
    witnesses: dict  # t -> EquivalenceWitness | None
    degenerate_t: tuple  # t values with f + t*h == 0, excluded in Projective mode


@dataclass(frozen=True)
class TrivialityScan:
    f: HomPoly
    tested: tuple
    mode: str
    equivalence: str


def triviality_scan_fp(f: HomPoly, candidates: Sequence[HomPoly] | None = None, mode: str = INVERTIBLE_ONLY,
                       equivalence: str = STRICT, *, caps: dict | None = None) -> TrivialityScan:
    """For each candidate h, test f + t*h against f for every t in F_p.

    ``mode`` AllMatrices also accepts f o A with A singular.  Candidates
    default to the echelonized basis of the Jacobian piece of f.
    """
    K = _require_prime_field(f)
    check_enumeration_budget(f.nvars, K.characteristic, caps)
    if mode not in (INVERTIBLE_ONLY, ALL_MATRICES):
        raise ValueError(f"unknown mode {mode!r}")
    if candidates is None:
        candidates = jacobian_piece(f).basis_polys()
    results = []
    for h in candidates:
        if h.degree != f.degree and h:
            raise DegreeMismatch(f"candidate of degree {h.degree} for a form of degree {f.degree}")
        witnesses, degenerate = {}, []
        for t in K.elements():
            g = f + h.scale(t)
            if g.is_zero() and equivalence == PROJECTIVE:
                degenerate.append(t)
                continue
            witnesses[t] = is_equivalent_fp(g, f, equivalence, all_matrices=mode == ALL_MATRICES, caps=caps)
        passes = all(w is not None for w in witnesses.values())
        results.append(CandidateResult(h, passes, witnesses, tuple(degenerate)))
    return TrivialityScan(f, tuple(results), mode, equivalence)


# -- divisors and pencils ------------------------------------------------------


def quotient_by_solve(F: HomPoly, g: HomPoly) -> HomPoly | None:
    """q with F == g*q, found as a linear solve in the coefficients of q."""
    K = F.field
    e = F.degree - g.degree
    if e < 0:
        return None
    qmonos = monomial_basis(F.nvars, e)
    cols = []
    for m in qmonos:
        mono = HomPoly(F.nvars, e, K, {m: K.one})
        cols.append((g * mono).to_vector())
    x = solve(DenseMatrix.from_columns(cols, K), F.to_vector())
    if x is None:
        return None
    return HomPoly(F.nvars, e, K, dict(zip(qmonos, x)))


def normalized_forms(nvars: int, k: int, K: Field):
    """Degree-k forms with first nonzero coefficient 1, one per projective class."""
    monos = monomial_basis(nvars, k)
    p = K.characteristic
    M = len(monos)
    for lead in range(M):
        for tail in itertools.product(range(p), repeat=M - lead - 1):
            coeffs = (0,) * lead + (1,) + tail
            yield HomPoly(nvars, k, K, dict(zip(monos, coeffs)))


def divisor_search(F: HomPoly, k: int, cap: int = DEFAULT_DIVISOR_CAP) -> HomPoly | None:
    """First normalized degree-k form dividing F, or None."""
    K = _require_prime_field(F)
    if F.is_zero():
        raise ZeroPolynomial("divisors of the zero form")
    if not 1 <= k <= F.degree // 2:
        raise DegreeMismatch(f"k must lie in [1, {F.degree // 2}]")
    p = K.characteristic
    M = len(monomial_basis(F.nvars, k))
    count = (p**M - 1) // (p - 1)
    if count > cap:
        raise BudgetExceeded(f"{count} candidate divisors exceed the cap {cap}")
    for g in normalized_forms(F.nvars, k, K):
        if quotient_by_solve(F, g) is not None:
            return g
    return None


def coprime(f: HomPoly, g: HomPoly) -> bool:
    """gcd(f, g) == 1, by injectivity of (a, b) -> a*f - b*g.

    With deg a = deg g - 1 and deg b = deg f - 1, a*f = b*g forces a = b = 0
    exactly when f and g share no factor.
    """
    if f.is_zero() or g.is_zero():
        return False
    K = f.field
    cols = []
    for m in monomial_basis(f.nvars, g.degree - 1):
        cols.append((f * HomPoly(f.nvars, g.degree - 1, K, {m: K.one})).to_vector())
    for m in monomial_basis(f.nvars, f.degree - 1):
        cols.append((-(g * HomPoly(f.nvars, f.degree - 1, K, {m: K.one}))).to_vector())
    if not cols:
        return True
    return rref(DenseMatrix.from_columns(cols, K)).rank == len(cols)


@dataclass(frozen=True)
class Fiber:
    parameter: ProjPoint  # (lambda : mu)
    fiber: HomPoly
    reducible: bool
    factor_witness: HomPoly | None


@dataclass(frozen=True)
class PencilReport:
    f: HomPoly
    g: HomPoly
    fibers: tuple
    reducible_count: int
    generic_irreducible: bool
    bound: int

    @property
    def within_bound(self) -> bool:
        return not self.generic_irreducible or self.reducible_count <= self.bound


def pencil_scan_fp(f: HomPoly, g: HomPoly, cap: int = DEFAULT_DIVISOR_CAP) -> PencilReport:
    """Classify every fiber lambda*f + mu*g over P^1(F_p) as reducible or not."""
    K = _require_prime_field(f, g)
    if f.nvars != g.nvars:
        raise DimensionMismatch(f"{f.nvars} vs {g.nvars} variables")
    if f.nvars < 3:
        raise DimensionMismatch("pencils are scanned in at least 3 variables")
    if f.degree != g.degree:
        raise DegreeMismatch(f"degrees {f.degree} and {g.degree}")
    if not coprime(f, g):
        raise NotCoprime("the two forms share a factor")
    d = f.degree
    fibers = []
    for t in projective_points(K, 2):
        lam, mu = t.coords
        F = f.scale(lam) + g.scale(mu)
        witness = None
        for k in range(1, d // 2 + 1):
            witness = divisor_search(F, k, cap)
            if witness is not None:
                break
        fibers.append(Fiber(t, F, witness is not None, witness))
    count = sum(fb.reducible for fb in fibers)
    generic = any(not fb.reducible for fb in fibers)
    return PencilReport(f, g, tuple(fibers), count, generic, d * d - 1)


# -- binary forms and their Moebius symmetries ------------------------------


def _binary_linear_factor(p: ProjPoint) -> HomPoly:
    """The linear form vanishing at p = (a : b): b*x0 - a*x1."""
    K = p.field
    a, b = p.coords
    return HomPoly(2, 1, K, {(1, 0): b, (0, 1): K.neg(a)})


def _root_multiplicity(f: HomPoly, p: ProjPoint) -> int:
    lin = _binary_linear_factor(p)
    m = 0
    while f:
        q = divide_exact(f, lin)
        if q is None:
            break
        f, m = q, m + 1
    return m


def _divisors(n: int) -> list:
    n = abs(n)
    small = [k for k in range(1, gmpy2.isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def _rational_candidates(f: HomPoly) -> list:
    """Rational roots of f(t, 1) by the rational root theorem."""
    K = f.field
    coeffs = [K.zero] * (f.degree + 1)
    for (a, _), c in f.terms.items():
        coeffs[a] = c
    lcm = 1
    for c in coeffs:
        lcm = gmpy2.lcm(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    low = next(i for i, c in enumerate(ints) if c)
    ints = ints[low:]
    roots = [mpq(0)] if low else []
    if len(ints) <= 1:
        return roots
    for r in _divisors(ints[0]):
        for s in _divisors(ints[-1]):
            for sign in (1, -1):
                cand = mpq(sign * r, s)
                if cand not in roots and sum(c * cand**i for i, c in enumerate(ints)) == 0:
                    roots.append(cand)
    return sorted(roots)


def binary_roots(f: HomPoly) -> list | None:
    """Roots of a binary form over its base field with multiplicities.

    Returns None when the form does not split into linear factors there.
    """
    if f.nvars != 2:
        raise NotBinaryForm(f"{f.nvars} variables")
    if f.is_zero():
        raise ZeroPolynomial("roots of the zero form")
    K = f.field
    if K.is_prime_field:
        pool = list(projective_points(K, 2))
    else:
        pool = [ProjPoint(K, (r, 1)) for r in _rational_candidates(f)] + [ProjPoint(K, (1, 0))]
    roots = []
    for p in pool:
        m = _root_multiplicity(f, p)
        if m:
            roots.append((p, m))
    if sum(m for _, m in roots) < f.degree:
        return None
    return roots


@dataclass(frozen=True)
class MobiusMap:
    """An element of PGL(2): 2x2 invertible matrix, first nonzero entry 1."""

    field: Field
    m: tuple  # (a, b, c, d) for [[a, b], [c, d]]

    def __post_init__(self):
        K = self.field
        a, b, c, d = (K(x) for x in self.m)
        if not K.sub(K.mul(a, d), K.mul(b, c)):
            raise ValueError("singular Moebius matrix")
        lead = next(x for x in (a, b, c, d) if x)
        inv = K.inv(lead)
        object.__setattr__(self, "m", tuple(K.mul(x, inv) for x in (a, b, c, d)))

    @classmethod
    def identity(cls, field: Field) -> MobiusMap:
        return cls(field, (1, 0, 0, 1))

    def __call__(self, p: ProjPoint) -> ProjPoint:
        K = self.field
        a, b, c, d = self.m
        x, y = p.coords
        return ProjPoint(K, (K.add(K.mul(a, x), K.mul(b, y)), K.add(K.mul(c, x), K.mul(d, y))))

    def __matmul__(self, other: MobiusMap) -> MobiusMap:
        """Composition: (self @ other)(p) == self(other(p))."""
        K = self.field
        a, b, c, d = self.m
        e, f, g, h = other.m
        return MobiusMap(K, (K.add(K.mul(a, e), K.mul(b, g)), K.add(K.mul(a, f), K.mul(b, h)),
                             K.add(K.mul(c, e), K.mul(d, g)), K.add(K.mul(c, f), K.mul(d, h))))

    def inverse(self) -> MobiusMap:
        K = self.field
        a, b, c, d = self.m
        return MobiusMap(K, (d, K.neg(b), K.neg(c), a))

    def is_identity(self) -> bool:
        return self == MobiusMap.identity(self.field)

    def __str__(self):
        a, b, c, d = (self.field.format(x) for x in self.m)
        return f"[[{a}, {b}], [{c}, {d}]]"


def _frame(p0: ProjPoint, p1: ProjPoint, p2: ProjPoint) -> MobiusMap:
    """The map sending 0, oo, 1 to p0, p1, p2."""
    K = p0.field
    (a0, b0), (a1, b1), (a2, b2) = p0.coords, p1.coords, p2.coords
    # p2 = alpha * p0 + beta * p1
    x = solve(DenseMatrix(K, [[a0, a1], [b0, b1]]), [a2, b2])
    alpha, beta = x
    # columns beta*p1 (image of oo = (1:0)) and alpha*p0 (image of 0 = (0:1))
    return MobiusMap(K, (K.mul(beta, a1), K.mul(alpha, a0), K.mul(beta, b1), K.mul(alpha, b0)))


def mobius_through(src: Sequence[ProjPoint], dst: Sequence[ProjPoint]) -> MobiusMap:
    """The unique map sending three distinct points src[i] to dst[i]."""
    return _frame(*dst) @ _frame(*src).inverse()


def lin_group_binary(roots: Sequence) -> list:
    """Moebius maps preserving a root multiset.

    ``roots`` holds ProjPoints or (ProjPoint, multiplicity) pairs.  Every
    candidate sends the first three distinct roots to an ordered triple of
    distinct roots; the identity therefore comes first.
    """
    mult: dict = {}
    for r in roots:
        p, m = r if isinstance(r, tuple) else (r, 1)
        mult[p] = mult.get(p, 0) + m
    pts = list(mult)
    if len(pts) < 3:
        raise TooFewPoints(f"{len(pts)} distinct roots; a Moebius map needs 3")
    src = pts[:3]
    group = []
    for dst in itertools.permutations(pts, 3):
        phi = mobius_through(src, dst)
        if all(mult.get(phi(p)) == m for p, m in mult.items()):
            group.append(phi)
    return group


__all__ = [
    "ALL_MATRICES",
    "INVERTIBLE_ONLY",
    "PROJECTIVE",
    "STRICT",
    "CandidateResult",
    "EquivalenceWitness",
    "Fiber",
    "MobiusMap",
    "PencilReport",
    "TrivialityScan",
    "binary_roots",
    "coprime",
    "divisor_search",
    "is_equivalent_fp",
    "lin_group_binary",
    "mobius_through",
    "normalized_forms",
    "pencil_scan_fp",
    "quotient_by_solve",
    "triviality_scan_fp",
]
