import random

import pytest
from hypothesis import strategies as st

from tangdeform.linalg import DenseMatrix
from tangdeform.poly import HomPoly, monomial_basis, parse_poly
from tangdeform.scalar import GF, QQ


def P(text, nvars=3, field=QQ):
    return parse_poly(text, nvars, field)


def random_form(rng, nvars, degree, field, bound=3, density=1.0):
    terms = {}
    for m in monomial_basis(nvars, degree):
        if rng.random() <= density:
            terms[m] = field.random_element(rng, bound)
    return HomPoly(nvars, degree, field, terms)


def random_invertible(rng, n, field, bound=3):
    while True:
        A = DenseMatrix(field, [[field.random_element(rng, bound) for _ in range(n)] for _ in range(n)])
        if A.is_invertible():
            return A


@st.composite
def fields(draw, primes=(2, 3, 5, 7, 11, 101)):
    if draw(st.booleans()):
        return QQ
    return GF(draw(st.sampled_from(primes)))


@st.composite
def forms(draw, field=None, nvars=None, degree=None, max_nvars=4, max_degree=6):
    K = field if field is not None else draw(fields())
    nv = nvars if nvars is not None else draw(st.integers(1, max_nvars))
    d = degree if degree is not None else draw(st.integers(0, max_degree))
    seed = draw(st.integers(0, 2**32))
    return random_form(random.Random(seed), nv, d, K, density=draw(st.sampled_from([0.3, 0.7, 1.0])))


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture
def report(capsys):
    """Print one PASS/FAIL line per acceptance criterion, uncaptured."""

    def _report(criterion, ok, detail=""):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok

    return _report
