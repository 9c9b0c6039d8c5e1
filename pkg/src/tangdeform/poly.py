"""Sparse multivariate polynomials over an exact field.

Monomials are exponent tuples ``(e_0, ..., e_n)`` in the variables
``x0 > x1 > ... > xn`` and every ordering decision uses graded reverse
lexicographic order.  :class:`HomPoly` is the workhorse: a form of fixed
degree.  :class:`AffinePoly` is what :func:`localize_at` produces.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import (
    DegreeMismatch,
    DimensionMismatch,
    IndexOutOfRange,
    MixedFields,
    NotBinaryForm,
    NotHomogeneous,
    PolySyntaxError,
    ZeroPolynomial,
)
from .scalar import QQ, Field, Scalar

Monomial = tuple


def grevlex_key(m: Monomial):
    """Sort key: larger key means larger monomial in grevlex."""
    return (sum(m), tuple(-e for e in reversed(m)))


@functools.lru_cache(maxsize=None)
def monomial_basis(nvars: int, d: int) -> tuple:
    """All monomials of degree ``d`` in ``nvars`` variables, grevlex-decreasing."""
    if nvars == 0:
        return ((),) if d == 0 else ()
    monos = []
    for combo in itertools.combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        monos.append(tuple(e))
    monos.sort(key=grevlex_key, reverse=True)
    return tuple(monos)


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


class Polynomial:
    """A polynomial as a map from monomials to nonzero raw field elements."""

    __slots__ = ("nvars", "field", "terms")

    def __init__(self, nvars: int, field: Field, terms: dict | None = None):
        self.nvars = nvars
        self.field = field
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    # -- construction helpers -------------------------------------------

    def _like(self, terms: dict) -> Polynomial:
        return Polynomial(self.nvars, self.field, terms)

    def _check(self, other: Polynomial):
        if other.field != self.field:
            raise MixedFields(f"{self.field} and {other.field}")
        if other.nvars != self.nvars:
            raise DimensionMismatch(f"{self.nvars} vs {other.nvars} variables")

    # -- inspection -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def monomials(self) -> list:
        return sorted(self.terms, key=grevlex_key, reverse=True)

    def sorted_terms(self) -> list:
        return [(m, self.terms[m]) for m in self.monomials()]

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ZeroPolynomial("zero polynomial has no leading term")
        return max(self.terms, key=grevlex_key)

    def leading_coefficient(self):
        return self.terms[self.leading_monomial()]

    def coefficient(self, m: Monomial):
        return self.terms.get(tuple(m), self.field.zero)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def lowest_degree(self) -> int:
        return min((sum(m) for m in self.terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def evaluate(self, point: Sequence):
        K = self.field
        pt = [K(v) for v in point]
        if len(pt) != self.nvars:
            raise DimensionMismatch(f"point has {len(pt)} coordinates, expected {self.nvars}")
        total = K.zero
        for m, c in self.terms.items():
            v = c
            for x, e in zip(pt, m):
                if e:
                    v = K.mul(v, K.pow(x, e))
            total = K.add(total, v)
        return total

    # -- arithmetic -------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, self.field, frozenset(self.terms.items())))

    def _add_terms(self, other: Polynomial, sign: int) -> dict:
        self._check(other)
        K = self.field
        out = dict(self.terms)
        for m, c in other.terms.items():
            c = c if sign > 0 else K.neg(c)
            s = K.add(out[m], c) if m in out else c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return out

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._like(self._add_terms(other, +1))

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._like(self._add_terms(other, -1))

    def __neg__(self):
        K = self.field
        return self._like({m: K.neg(c) for m, c in self.terms.items()})

    def scale(self, c) -> Polynomial:
        K = self.field
        c = K(c)
        return self._like({m: K.mul(c, v) for m, v in self.terms.items()})

    def _mul_terms(self, other: Polynomial) -> dict:
        self._check(other)
        K = self.field
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = K.mul(c1, c2)
                if m in out:
                    v = K.add(out[m], v)
                    if v:
                        out[m] = v
                    else:
                        del out[m]
                else:
                    out[m] = v
        return out

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            return Polynomial(self.nvars, self.field, self._mul_terms(other))
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Scalar)):
            return self.scale(other)
        return NotImplemented

    # -- text -------------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        K = self.field
        pieces = []
        for m, c in self.sorted_terms():
            negative = K.characteristic == 0 and c < 0
            mag = -c if negative else c
            factors = [f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(m) if e]
            if not factors:
                body = K.format(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = K.format(mag) + "*" + "*".join(factors)
            pieces.append(("-" if negative else "+", body))
        sign, body = pieces[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"{type(self).__name__}({self.to_text()!r}, nvars={self.nvars}, field={self.field})"


class HomPoly(Polynomial):
    """A homogeneous polynomial (form) of a fixed degree.

    The zero form keeps its degree as metadata.
    """

    __slots__ = ("degree",)

    def __init__(self, nvars: int, degree: int, field: Field, terms: dict | None = None):
        super().__init__(nvars, field, terms)
        self.degree = degree
        bad = {sum(m) for m in self.terms} - {degree}
        if bad:
            raise NotHomogeneous(bad | {degree})
        for m in self.terms:
            if len(m) != nvars:
                raise DimensionMismatch(f"monomial {m} has wrong length for {nvars} variables")

    @classmethod
    def from_polynomial(cls, p: Polynomial, degree: int | None = None) -> HomPoly:
        if degree is None:
            degrees = {sum(m) for m in p.terms}
            if len(degrees) > 1:
                raise NotHomogeneous(degrees)
            degree = degrees.pop() if degrees else 0
        return cls(p.nvars, degree, p.field, p.terms)

    def _like(self, terms: dict) -> HomPoly:
        return HomPoly(self.nvars, self.degree, self.field, terms)

    def _combine(self, other, sign):
        if not isinstance(other, Polynomial):
            return NotImplemented
        if isinstance(other, HomPoly) and other.degree != self.degree:
            if other and self:
                raise DegreeMismatch(f"degrees {self.degree} and {other.degree}")
            if not self:
                # a zero form takes the degree of the other summand
                return HomPoly(self.nvars, other.degree, self.field, self._add_terms(other, sign))
        return self._like(self._add_terms(other, sign))

    def __add__(self, other):
        return self._combine(other, +1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, other):
        if isinstance(other, HomPoly):
            return HomPoly(self.nvars, self.degree + other.degree, self.field, self._mul_terms(other))
        return super().__mul__(other)

    def __eq__(self, other):
        if isinstance(other, HomPoly) and not self.terms and not other.terms:
            return self.nvars == other.nvars and self.field == other.field and self.degree == other.degree
        return super().__eq__(other)

    __hash__ = Polynomial.__hash__

    def to_vector(self) -> list:
        """Coefficients in the grevlex-decreasing monomial basis of its degree."""
        return [self.terms.get(m, self.field.zero) for m in monomial_basis(self.nvars, self.degree)]

    @classmethod
    def from_vector(cls, vec: Sequence, nvars: int, degree: int, field: Field) -> HomPoly:
        basis = monomial_basis(nvars, degree)
        if len(vec) != len(basis):
            raise DimensionMismatch(f"vector of length {len(vec)} for {len(basis)} monomials")
        return cls(nvars, degree, field, dict(zip(basis, vec)))


class AffinePoly(Polynomial):
    """Dehomogenized local form of a HomPoly.

    ``chart`` is the index of the variable set to 1 and ``base_point`` the
    projective point moved to the origin; the remaining variables keep their
    relative order.
    """

    __slots__ = ("chart", "base_point")

    def __init__(self, nvars: int, field: Field, terms: dict | None = None, chart: int | None = None,
                 base_point: ProjPoint | None = None):
        super().__init__(nvars, field, terms)
        self.chart = chart
        self.base_point = base_point

    def _like(self, terms: dict) -> AffinePoly:
        return AffinePoly(self.nvars, self.field, terms, self.chart, self.base_point)


def variable(i: int, nvars: int, field: Field = QQ) -> HomPoly:
    if not 0 <= i < nvars:
        raise IndexOutOfRange(f"x{i} with {nvars} variables")
    m = [0] * nvars
    m[i] = 1
    return HomPoly(nvars, 1, field, {tuple(m): field.one})


def zero_form(nvars: int, degree: int, field: Field = QQ) -> HomPoly:
    return HomPoly(nvars, degree, field)


# -- parsing ---------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            raise PolySyntaxError(f"expected {ch!r}, found {found!r}", self.pos)
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            found = self.text[start] if start < len(self.text) else "end of input"
            raise PolySyntaxError(f"expected an integer, found {found!r}", start)
        return int(self.text[start:self.pos])

    def factor(self) -> tuple[int, int, int]:
        start = self.pos
        self.expect("x")
        if self.pos >= len(self.text) or not self.text[self.pos].isdigit():
            raise PolySyntaxError("expected a variable index after 'x'", self.pos)
        index = self.integer()
        exp = 1
        if self.peek() == "^":
            self.pos += 1
            exp = self.integer()
        return index, exp, start

    def term(self):
        """Returns (numerator, denominator, [(index, exp, pos), ...])."""
        num, den, factors = 1, 1, []
        if self.peek().isdigit():
            num = self.integer()
            if self.peek() == "/":
                self.pos += 1
                den = self.integer()
                if den == 0:
                    raise PolySyntaxError("zero denominator", self.pos - 1)
            if self.peek() != "*":
                return num, den, factors
            self.pos += 1
        factors.append(self.factor())
        while self.peek() == "*":
            self.pos += 1
            factors.append(self.factor())
        return num, den, factors

    def poly(self):
        terms = []
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        terms.append((sign, *self.term()))
        while self.peek() in ("+", "-"):
            sign = 1 if self.peek() == "+" else -1
            self.pos += 1
            terms.append((sign, *self.term()))
        if self.peek():
            raise PolySyntaxError(f"unexpected {self.peek()!r}", self.pos)
        return terms


def parse_poly(text: str, nvars: int | None = None, field: Field = QQ) -> HomPoly:
    """Parse a homogeneous polynomial in ``x0 ... xn``.

    ``nvars=None`` infers the variable count from the largest index used.
    Raises PolySyntaxError (kind ``SyntaxError``) or NotHomogeneous.
    """
    raw_terms = _Parser(text).poly()
    max_index = max((i for *_, fs in raw_terms for i, _, _ in fs), default=-1)
    if nvars is None:
        nvars = max(max_index + 1, 1)
    elif max_index >= nvars:
        for *_, fs in raw_terms:
            for i, _, pos in fs:
                if i >= nvars:
                    raise IndexOutOfRange(f"x{i} at position {pos} exceeds {nvars} variables")
    K = field
    acc: dict = {}
    raw_degrees = set()
    for sign, num, den, factors in raw_terms:
        e = [0] * nvars
        for i, exp, _ in factors:
            e[i] += exp
        m = tuple(e)
        raw_degrees.add(sum(m))
        c = K.parse(f"{sign * num}/{den}")
        acc[m] = K.add(acc[m], c) if m in acc else c
    terms = {m: c for m, c in acc.items() if c}
    degrees = {sum(m) for m in terms}
    if len(degrees) > 1:
        raise NotHomogeneous(degrees)
    if degrees:
        degree = degrees.pop()
    elif len(raw_degrees) == 1:
        degree = raw_degrees.pop()
    else:
        raise NotHomogeneous(raw_degrees)
    return HomPoly(nvars, degree, K, terms)


# -- projective points -------------------------------------------------------


@dataclass(frozen=True)
class ProjPoint:
    """A point of projective space, scaled so its last nonzero coordinate is 1."""

    field: Field
    coords: tuple

    def __post_init__(self):
        K = self.field
        coords = tuple(K(c) for c in self.coords)
        nz = [i for i, c in enumerate(coords) if c]
        if not nz:
            raise ValueError("the zero vector is not a projective point")
        k = nz[-1]
        if coords[k] != K.one:
            inv = K.inv(coords[k])
            coords = tuple(K.mul(c, inv) for c in coords)
        object.__setattr__(self, "coords", coords)

    @property
    def chart(self) -> int:
        return max(i for i, c in enumerate(self.coords) if c)

    @property
    def nvars(self) -> int:
        return len(self.coords)

    def __str__(self):
        return "(" + ":".join(self.field.format(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"ProjPoint{self}"


def parse_point(text: str, field: Field = QQ) -> ProjPoint:
    body = text.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise PolySyntaxError(f"point must look like (a:b:c), got {text!r}", 0)
    parts = body[1:-1].split(":")
    try:
        return ProjPoint(field, tuple(field.parse(p) for p in parts))
    except ValueError as exc:
        raise PolySyntaxError(str(exc), 0) from None


def projective_points(field: Field, nvars: int) -> Iterator[ProjPoint]:
    """Every rational point of P^{nvars-1} over a prime field, each once."""
    p = field.characteristic
    for k in range(nvars - 1, -1, -1):
        for head in itertools.product(range(p), repeat=k):
            yield ProjPoint(field, head + (1,) + (0,) * (nvars - 1 - k))


# -- calculus and substitution ---------------------------------------------


def partial_derivative(f: HomPoly, i: int) -> HomPoly:
    if not 0 <= i < f.nvars:
        raise IndexOutOfRange(f"x{i} with {f.nvars} variables")
    K = f.field
    out = {}
    for m, c in f.terms.items():
        if m[i]:
            v = K.mul(K.from_int(m[i]), c)
            if v:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = v
    return HomPoly(f.nvars, max(f.degree - 1, 0), K, out)


def gradient(f: HomPoly) -> list:
    return [partial_derivative(f, i) for i in range(f.nvars)]


def euler_combination(f: HomPoly) -> HomPoly:
    """``sum_i x_i * df/dx_i``, computed from the partial derivatives."""
    total = zero_form(f.nvars, f.degree, f.field)
    for i, df in enumerate(gradient(f)):
        total = total + variable(i, f.nvars, f.field) * df
    return HomPoly(f.nvars, f.degree, f.field, total.terms)


def _matrix_rows(A, nvars: int, field: Field) -> list:
    rows = A.to_rows() if hasattr(A, "to_rows") else [list(r) for r in A]
    if len(rows) != nvars or any(len(r) != nvars for r in rows):
        raise DimensionMismatch(f"need a {nvars}x{nvars} matrix")
    if getattr(A, "field", field) != field:
        raise MixedFields(f"matrix over {A.field}, polynomial over {field}")
    return [[field(x) for x in r] for r in rows]


def substitute_matrix(f: HomPoly, A) -> HomPoly:
    """``(f o A)(X) = f(A X)``: variable x_j becomes ``sum_k A[j][k] x_k``."""
    K, n1 = f.field, f.nvars
    rows = _matrix_rows(A, n1, K)
    unit = [tuple(1 if i == k else 0 for i in range(n1)) for k in range(n1)]
    linear = [{unit[k]: a for k, a in enumerate(row) if a} for row in rows]
    one = {(0,) * n1: K.one}
    powers = [[one] for _ in range(n1)]

    def mul(a: dict, b: dict) -> dict:
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(x + y for x, y in zip(m1, m2))
                out[m] = K.add(out[m], K.mul(c1, c2)) if m in out else K.mul(c1, c2)
        return {m: c for m, c in out.items() if c}

    def power(j: int, e: int) -> dict:
        cache = powers[j]
        while len(cache) <= e:
            cache.append(mul(cache[-1], linear[j]))
        return cache[e]

    total: dict = {}
    for m, c in f.terms.items():
        prod = {(0,) * n1: c}
        for j, e in enumerate(m):
            if e:
                prod = mul(prod, power(j, e))
        for mm, v in prod.items():
            total[mm] = K.add(total[mm], v) if mm in total else v
    return HomPoly(n1, f.degree, K, total)


def localize_at(f: HomPoly, p: ProjPoint) -> AffinePoly:
    """Dehomogenize at the chart of ``p`` and translate ``p`` to the origin."""
    if p.nvars != f.nvars:
        raise DimensionMismatch(f"point in P^{p.nvars - 1}, polynomial in {f.nvars} variables")
    if p.field != f.field:
        raise MixedFields(f"{p.field} and {f.field}")
    K = f.field
    k = p.chart
    others = [i for i in range(f.nvars) if i != k]
    m_vars = len(others)
    # binomial expansion of (y + a)^e, cached per (variable, exponent)
    expansions: dict = {}

    def shifted(slot: int, e: int) -> list:
        key = (slot, e)
        if key not in expansions:
            a = p.coords[others[slot]]
            expansions[key] = [(j, K.mul(K.from_int(math.comb(e, j)), K.pow(a, e - j)))
                               for j in range(e + 1) if e - j == 0 or a]
        return expansions[key]

    out: dict = {}
    for m, c in f.terms.items():
        partial = {(0,) * m_vars: c}
        for slot, i in enumerate(others):
            e = m[i]
            if not e:
                continue
            nxt: dict = {}
            for mono, v in partial.items():
                for j, coef in shifted(slot, e):
                    mm = mono[:slot] + (mono[slot] + j,) + mono[slot + 1:]
                    w = K.mul(v, coef)
                    nxt[mm] = K.add(nxt[mm], w) if mm in nxt else w
            partial = nxt
        for mono, v in partial.items():
            out[mono] = K.add(out[mono], v) if mono in out else v
    return AffinePoly(m_vars, K, out, chart=k, base_point=p)


def multiplicity_at(f: HomPoly, p: ProjPoint) -> int:
    """Lowest degree of the local expansion of ``f`` at ``p`` (0 when f(p) != 0)."""
    if f.is_zero():
        raise ZeroPolynomial("multiplicity of the zero polynomial")
    return localize_at(f, p).lowest_degree()


def gradient_vanishes_at(f: HomPoly, p: ProjPoint) -> bool:
    return all(not df.evaluate(p.coords) for df in gradient(f))


# -- binary forms ---------------------------------------------------------


def _x1_valuation(f: HomPoly) -> int:
    return min(m[1] for m in f.terms)


def _univariate(f: HomPoly) -> list:
    """Dehomogenize at x1 = 1; coefficient list, index = power of x0."""
    K = f.field
    coeffs = [K.zero] * (f.degree + 1)
    for (a, _), c in f.terms.items():
        coeffs[a] = c
    while len(coeffs) > 1 and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _uni_divmod(K: Field, a: list, b: list):
    a = list(a)
    q = [K.zero] * max(len(a) - len(b) + 1, 1)
    inv_lead = K.inv(b[-1])
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        c = K.mul(a[-1], inv_lead)
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] = K.sub(a[i + shift], K.mul(c, bc))
        a.pop()
        while len(a) > 1 and not a[-1]:
            a.pop()
    return q, a


def _uni_gcd(K: Field, a: list, b: list) -> list:
    while any(b):
        _, r = _uni_divmod(K, a, b)
        while len(r) > 1 and not r[-1]:
            r.pop()
        a, b = b, r
    inv = K.inv(a[-1])
    return [K.mul(c, inv) for c in a]


def binary_gcd(f: HomPoly, g: HomPoly) -> HomPoly:
    """Monic gcd of two binary forms (leading x0-power coefficient 1)."""
    for h in (f, g):
        if h.nvars != 2:
            raise NotBinaryForm(f"{h.nvars} variables")
        if h.is_zero():
            raise ZeroPolynomial("gcd with the zero form")
    if f.field != g.field:
        raise MixedFields(f"{f.field} and {g.field}")
    K = f.field
    shared = min(_x1_valuation(f), _x1_valuation(g))
    u = _uni_gcd(K, _univariate(f), _univariate(g))
    e = len(u) - 1
    terms = {(a, e - a + shared): c for a, c in enumerate(u) if c}
    return HomPoly(2, e + shared, K, terms)


def divide_exact(f: HomPoly, g: HomPoly) -> HomPoly | None:
    """The quotient f / g when g divides f exactly, else None.

    Multivariate division by the grevlex leading term; the remainder is zero
    exactly when g | f, because the leading term of any multiple of g is
    divisible by lm(g).
    """
    f._check(g)
    if g.is_zero():
        raise ZeroPolynomial("division by the zero form")
    K = f.field
    lm, lc = g.leading_monomial(), g.leading_coefficient()
    inv = K.inv(lc)
    rem = dict(f.terms)
    quot: dict = {}
    while rem:
        m = max(rem, key=grevlex_key)
        if not _divides(lm, m):
            return None
        qm = tuple(a - b for a, b in zip(m, lm))
        qc = K.mul(rem[m], inv)
        quot[qm] = qc
        for gm, gc in g.terms.items():
            mm = tuple(a + b for a, b in zip(gm, qm))
            v = K.sub(rem.get(mm, K.zero), K.mul(qc, gc))
            if v:
                rem[mm] = v
            else:
                rem.pop(mm, None)
    return HomPoly(f.nvars, f.degree - g.degree, K, quot)


