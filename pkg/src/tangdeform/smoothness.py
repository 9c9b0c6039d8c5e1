"""Buchberger's algorithm and the smoothness tests built on it.

Inside this module monomials are stored in *grevlex-encoded* form
``(deg, -e_n, ..., -e_0)``: plain tuple comparison is then grevlex, and the
encoding is additive, so products and divisibility stay componentwise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .errors import CharacteristicTooSmall, DimensionMismatch, MixedFields, NotSingular, ZeroPolynomial
from .poly import HomPoly, Polynomial, ProjPoint, gradient, gradient_vanishes_at, multiplicity_at, projective_points
from .scalar import Field


def _enc(m: tuple) -> tuple:
    return (sum(m),) + tuple(-e for e in reversed(m))


def _dec(k: tuple) -> tuple:
    return tuple(-x for x in reversed(k[1:]))


def _divides(a: tuple, b: tuple) -> bool:
    # a | b  <=>  every exponent of a <= that of b  <=>  -a_i >= -b_i
    return all(x >= y for x, y in zip(a[1:], b[1:]))


def _lcm(a: tuple, b: tuple) -> tuple:
    neg = tuple(min(x, y) for x, y in zip(a[1:], b[1:]))
    return (-sum(neg),) + neg


def _quot(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _mono_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


class _Engine:
    """Polynomial kernels on encoded dicts for one field."""

    def __init__(self, K: Field):
        self.K = K

    def monic(self, p: dict) -> dict:
        K = self.K
        lc = p[max(p)]
        if lc == K.one:
            return p
        inv = K.inv(lc)
        return {m: K.mul(c, inv) for m, c in p.items()}

    def sub_mul(self, p: dict, c, shift: tuple, g: dict):
        """p -= c * x^shift * g, in place."""
        K = self.K
        for gm, gc in g.items():
            m = _mono_mul(gm, shift)
            v = K.sub(p[m], K.mul(c, gc)) if m in p else K.neg(K.mul(c, gc))
            if v:
                p[m] = v
            else:
                del p[m]

    def reduce(self, p: dict, basis: Sequence[tuple]) -> dict:
        """Full reduction of ``p`` by monic ``(lm, poly)`` pairs."""
        p = dict(p)
        rem: dict = {}
        while p:
            m = max(p)
            c = p[m]
            for lm, g in basis:
                if _divides(lm, m):
                    self.sub_mul(p, c, _quot(m, lm), g)
                    break
            else:
                rem[m] = c
                del p[m]
        return rem

    def spoly(self, f: tuple, g: tuple) -> dict:
        (lf, pf), (lg, pg) = f, g
        L = _lcm(lf, lg)
        out = {}
        K = self.K
        for m, c in pf.items():
            out[_mono_mul(m, _quot(L, lf))] = c
        self.sub_mul(out, K.one, _quot(L, lg), pg)
        return out


@dataclass
class GroebnerBasis:
    """Reduced grevlex Groebner basis."""

    generators: list
    nvars: int
    field: Field
    order: str = "grevlex"
    reduced: bool = True
    _encoded: list = field(default_factory=list, repr=False)

    def leading_monomials(self) -> list:
        return [_dec(lm) for lm, _ in self._encoded]

    def is_unit_ideal(self) -> bool:
        return any(lm[0] == 0 for lm, _ in self._encoded)


def _wrap(terms: dict, nvars: int, K: Field) -> Polynomial:
    plain = {_dec(m): c for m, c in terms.items()}
    degrees = {m[0] for m in terms}
    if len(degrees) == 1:
        return HomPoly(nvars, degrees.pop(), K, plain)
    return Polynomial(nvars, K, plain)


def _common_ring(gens: Sequence[Polynomial], nvars: int | None, K: Field | None):
    for g in gens:
        if nvars is None:
            nvars = g.nvars
        if K is None:
            K = g.field
        if g.nvars != nvars:
            raise DimensionMismatch(f"{g.nvars} vs {nvars} variables")
        if g.field != K:
            raise MixedFields(f"{g.field} and {K}")
    if nvars is None or K is None:
        raise ValueError("cannot infer the ring of an empty generator list; pass nvars and field")
    return nvars, K


def buchberger(gens: Sequence[Polynomial], nvars: int | None = None, field: Field | None = None) -> GroebnerBasis:
    """Reduced Groebner basis under grevlex.

    Pairs are taken by the normal strategy (smallest lcm degree, then pair
    index); the coprime-leading-term and chain criteria skip useless pairs.
    """
    nvars, K = _common_ring(gens, nvars, field)
    eng = _Engine(K)
    basis: list = []
    for g in gens:
        if g:
            p = eng.monic({_enc(m): c for m, c in g.terms.items()})
            basis.append((max(p), p))
    pairs = {(i, j) for j in range(len(basis)) for i in range(j)}

    def pair_key(ij):
        i, j = ij
        return (_lcm(basis[i][0], basis[j][0])[0], i, j)

    while pairs:
        i, j = min(pairs, key=pair_key)
        pairs.discard((i, j))
        li, lj = basis[i][0], basis[j][0]
        L = _lcm(li, lj)
        if L[0] == li[0] + lj[0]:
            continue  # coprime leading monomials
        if any(k != i and k != j and _divides(basis[k][0], L)
               and (min(i, k), max(i, k)) not in pairs and (min(j, k), max(j, k)) not in pairs
               for k in range(len(basis))):
            continue  # chain criterion
        r = eng.reduce(eng.spoly(basis[i], basis[j]), basis)
        if r:
            r = eng.monic(r)
            basis.append((max(r), r))
            n = len(basis) - 1
            pairs.update((k, n) for k in range(n))

    # minimalize, then inter-reduce
    minimal = []
    for idx, (lm, p) in enumerate(basis):
        if any(_divides(lm2, lm) and (lm2 != lm or idx2 < idx)
               for idx2, (lm2, _) in enumerate(basis) if idx2 != idx):
            continue
        minimal.append((lm, p))
    reduced = []
    for idx, (lm, p) in enumerate(minimal):
        others = [b for k, b in enumerate(minimal) if k != idx]
        tail = dict(p)
        c = tail.pop(lm)
        tail = eng.reduce(tail, others)
        tail[lm] = c
        reduced.append((lm, eng.monic(tail)))
    reduced.sort(key=lambda b: b[0], reverse=True)
    return GroebnerBasis(
        generators=[_wrap(p, nvars, K) for _, p in reduced],
        nvars=nvars,
        field=K,
        _encoded=reduced,
    )


def s_polynomial(f: Polynomial, g: Polynomial) -> Polynomial:
    eng = _Engine(f.field)
    ef = eng.monic({_enc(m): c for m, c in f.terms.items()})
    eg = eng.monic({_enc(m): c for m, c in g.terms.items()})
    return _wrap(eng.spoly((max(ef), ef), (max(eg), eg)), f.nvars, f.field)


def normal_form(h: Polynomial, G: GroebnerBasis) -> Polynomial:
    """Remainder of ``h`` on full division by ``G``; zero iff h is in the ideal."""
    if h.field != G.field:
        raise MixedFields(f"{h.field} and {G.field}")
    if h.nvars != G.nvars:
        raise DimensionMismatch(f"{h.nvars} vs {G.nvars} variables")
    r = _Engine(G.field).reduce({_enc(m): c for m, c in h.terms.items()}, G._encoded)
    return Polynomial(h.nvars, h.field, {_dec(m): c for m, c in r.items()})


def _dimension_from_leading(lms: Sequence[tuple], nvars: int) -> int:
    if any(sum(m) == 0 for m in lms):
        return -1  # unit ideal: empty zero set
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in lms]
    for size in range(nvars, -1, -1):
        for U in itertools.combinations(range(nvars), size):
            Uset = set(U)
            if not any(s <= Uset for s in supports):
                return size
    return 0


def ideal_dimension(gens: Sequence[Polynomial], nvars: int | None = None, field: Field | None = None) -> int:
    """Krull dimension of the affine zero set of the ideal (-1 for the unit ideal).

    Read off the leading-term ideal: the largest set of variables containing
    the support of no leading monomial.
    """
    gens = [g for g in gens if g]
    if not gens:
        if nvars is None:
            raise ValueError("nvars is required for an empty generator list")
        return nvars
    G = buchberger(gens, nvars, field)
    return _dimension_from_leading(G.leading_monomials(), G.nvars)


def check_characteristic(f: HomPoly):
    p = f.field.characteristic
    if p and p <= f.degree:
        raise CharacteristicTooSmall(f"characteristic {p} does not exceed degree {f.degree}")


def gradient_basis(f: HomPoly) -> GroebnerBasis:
    return buchberger([df for df in gradient(f) if df], f.nvars, f.field)


def is_smooth(f: HomPoly) -> bool:
    """True iff the partials of ``f`` vanish together only at the origin.

    Decided over the algebraic closure: the reduced basis of the gradient
    ideal must contain a pure power of every variable among its leading
    monomials.
    """
    if f.is_zero():
        raise ZeroPolynomial("smoothness of the zero polynomial")
    check_characteristic(f)
    lms = gradient_basis(f).leading_monomials()
    for i in range(f.nvars):
        if not any(m[i] and sum(m) == m[i] for m in lms):
            return False
    return True


def has_isolated_singularities(f: HomPoly) -> bool:
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial")
    check_characteristic(f)
    G = gradient_basis(f)
    dim = _dimension_from_leading(G.leading_monomials(), f.nvars)
    if dim <= 0:
        raise NotSingular(f"{f} is smooth")
    return dim <= 1


def points_complete(f: HomPoly, points: Sequence[ProjPoint]) -> bool:
    """Whether ``points`` contain every singular point of ``f`` over the closure.

    Radical membership by the Rabinowitsch trick: every product
    l_1 ... l_m, with l_i a linear form vanishing at points[i], must lie in the
    radical of the gradient ideal.
    """
    K, n1 = f.field, f.nvars
    partials = [df for df in gradient(f) if df]
    lifted = [Polynomial(n1 + 1, K, {m + (0,): c for m, c in df.terms.items()}) for df in partials]

    def point_forms(p: ProjPoint) -> list:
        forms = []
        for a, b in itertools.combinations(range(n1), 2):
            # p_b x_a - p_a x_b vanishes at p
            t = {}
            if p.coords[b]:
                t[tuple(1 if i == a else 0 for i in range(n1)) + (0,)] = p.coords[b]
            if p.coords[a]:
                t[tuple(1 if i == b else 0 for i in range(n1)) + (0,)] = K.neg(p.coords[a])
            if t:
                forms.append(Polynomial(n1 + 1, K, t))
        return forms

    one = Polynomial(n1 + 1, K, {(0,) * (n1 + 1): K.one})
    y = Polynomial(n1 + 1, K, {(0,) * n1 + (1,): K.one})
    for combo in itertools.product(*(point_forms(p) for p in points)):
        q = one
        for l in combo:
            q = q * l
        G = buchberger(lifted + [one - y * q], n1 + 1, K)
        if not G.is_unit_ideal():
            return False
    return True


@dataclass
class SingularLocusReport:
    smooth: bool
    rational_singular_points: list
    ideal_dimension: int
    exhaustive_over: Field | None
    rejected_candidates: list = field(default_factory=list)


def singular_points_scan(f: HomPoly, candidates: Sequence[ProjPoint] | None = None) -> SingularLocusReport:
    """Rational singular points with multiplicities.

    Over F_p every rational point is tested; over Q only ``candidates`` are
    checked (the rejected ones are reported separately).
    """
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial")
    check_characteristic(f)
    K = f.field
    G = gradient_basis(f)
    dim = _dimension_from_leading(G.leading_monomials(), f.nvars)
    smooth = dim <= 0
    partials = gradient(f)
    found, rejected = [], []
    if K.is_prime_field:
        pool, exhaustive = projective_points(K, f.nvars), K
    else:
        pool, exhaustive = candidates or [], None
    for p in pool:
        if all(not df.evaluate(p.coords) for df in partials):
            found.append((p, multiplicity_at(f, p)))
        elif not K.is_prime_field:
            rejected.append(p)
    return SingularLocusReport(smooth, found, dim, exhaustive, rejected)


__all__ = [
    "GroebnerBasis",
    "SingularLocusReport",
    "buchberger",
    "gradient_vanishes_at",
    "has_isolated_singularities",
    "ideal_dimension",
    "is_smooth",
    "normal_form",
    "points_complete",
    "s_polynomial",
    "singular_points_scan",
]
