import random

import pytest
import sympy as sp

from conftest import P
from tangdeform.deform import (
    NOT_APPLICABLE,
    OBSTRUCTED,
    SMOOTHABLE,
    TTU_FLAGS,
    construct_ttu,
    decide_smoothable,
    find_smoothing,
    intersection_dimensions,
    obstruction_certificate,
    random_coeffs,
    smoothing_generator_at,
    smoothing_search,
    tangent_intersection_experiment,
    trial_rng,
    verify_weierstrass_counterexample,
    weierstrass_cubic,
)
from tangdeform.errors import (
    IncompletePointList,
    MultiplicityMismatch,
    MultiplicityTooLow,
    NotASquare,
    NotSingular,
    NotSmooth,
    SingularCubic,
    UnsupportedField,
)
from tangdeform.jacobian import jacobian_piece, membership
from tangdeform.linalg import row_basis
from tangdeform.poly import gradient, parse_point
from tangdeform.scalar import GF, QQ

NODAL_CUBIC = "x1^2*x2 - x0^3 - x0^2*x2"
NODAL_QUARTIC = "x1^2*x2^2 - x0^4 + x1^4"
TACNODE_LIKE = "x0^4 + x1^3*x2"
ORIGIN = "(0:0:1)"


def sympy_smooth(f):
    """Independent smoothness oracle: pure powers among sympy's grevlex leading terms."""
    xs = sp.symbols(f"x0:{f.nvars}")
    expr = sp.sympify(f.to_text().replace("^", "**"))
    G = sp.groebner([sp.diff(expr, x) for x in xs], *xs, order="grevlex")
    lms = [sp.Poly(g, *xs).monoms(order="grevlex")[0] for g in G.exprs]
    return all(any(m[i] and sum(m) == m[i] for m in lms) for i in range(f.nvars))


def singular_at(f, p):
    return all(not g.evaluate(p.coords) for g in gradient(f)) and not f.evaluate(p.coords)


def test_decisions():
    o = parse_point(ORIGIN)
    assert decide_smoothable(P(NODAL_CUBIC), [o]).decision == SMOOTHABLE
    assert decide_smoothable(P(NODAL_QUARTIC), [o]).decision == SMOOTHABLE
    d = decide_smoothable(P(TACNODE_LIKE), [o])
    assert d.decision == OBSTRUCTED and d.certificate.multiplicity == 3
    assert decide_smoothable(P("x0^2*x2^2"), []).decision == NOT_APPLICABLE


def test_decision_guards():
    with pytest.raises(NotSingular):
        decide_smoothable(P("x0^3 + x1^3 + x2^3"), [])
    with pytest.raises(IncompletePointList):
        decide_smoothable(P(NODAL_CUBIC), [])
    with pytest.raises(IncompletePointList):
        decide_smoothable(P(NODAL_CUBIC), [parse_point("(1:0:0)")])


def test_obstruction_certificate():
    o = parse_point(ORIGIN)
    cert = obstruction_certificate(P("x0^5 + x1^4*x2"), o)
    assert cert.multiplicity == 4
    assert len(cert.generator_multiplicities) == 9
    assert min(cert.generator_multiplicities) >= 2
    with pytest.raises(MultiplicityTooLow):
        obstruction_certificate(P(NODAL_CUBIC), o)


def test_smoothing_certificate_independent():
    f = P(NODAL_CUBIC)
    cert = find_smoothing(f, [parse_point(ORIGIN)], budget=200, seed=42)
    assert cert is not None and cert.revalidate()
    assert membership(cert.h, jacobian_piece(f)) is not None
    assert sympy_smooth(f + cert.h)


def test_search_is_deterministic():
    f = P(NODAL_QUARTIC)
    a = smoothing_search(f, [parse_point(ORIGIN)], budget=50, seed=7)
    b = smoothing_search(f, [parse_point(ORIGIN)], budget=50, seed=7)
    assert a.certificate.h == b.certificate.h and a.trials_used == b.trials_used
    assert trial_rng(7, 3).random() == trial_rng(7, 3).random()
    assert random_coeffs(f, trial_rng(1, 1)).a == random_coeffs(f, trial_rng(1, 1)).a


def test_search_fails_when_obstructed():
    f = P(TACNODE_LIKE)
    res = smoothing_search(f, [parse_point(ORIGIN)], budget=30, seed=1)
    assert res.certificate is None and res.trials_used == 30
    assert sum(res.failures.values()) == 30


def test_search_over_prime_field():
    f = P(NODAL_CUBIC, 3, GF(11))
    cert = find_smoothing(f, budget=100, seed=3)
    assert cert is not None and cert.revalidate()


def test_smoothing_generator():
    f = P(NODAL_CUBIC)
    o = parse_point(ORIGIN)
    b, g, gen = smoothing_generator_at(f, o)
    assert not singular_at(f + gen, o)
    with pytest.raises(MultiplicityMismatch):
        smoothing_generator_at(P(TACNODE_LIKE), o)


def test_ttu():
    t = construct_ttu(P("x0^3 + x1^3 + x2^3"), P("x0^4 + x1^4 + x2^4"))
    assert set(t.hypothesis_report) == set(TTU_FLAGS)
    assert t.certified and t.f.degree == 7
    same = construct_ttu(P("x0^3 + x1^3 + x2^3"), P("x0^3 + x1^3 + x2^3"))
    assert not same.certified and not same.hypothesis_report["degrees_distinct"]
    cone = construct_ttu(P("x0^3 + x1^3 + x2^3"), P("x0^4 + x1^4"))
    assert not cone.certified
    assert not cone.hypothesis_report["p2_smooth"] and not cone.hypothesis_report["rank_full_p2"]


def test_weierstrass_check_against_sympy():
    w = verify_weierstrass_counterexample(1, 1, 3)
    assert w.passed and w.s == 2
    x, y, z = sp.symbols("x0 x1 x2")
    f = z * y**2 - x**3 - z**2 * x - z**3
    assert sp.expand(f.subs(y, 2 * y) - (f + 3 * z * y**2)) == 0
    assert w.coeffs.a[1, 1] == QQ("1/2")


def test_weierstrass_guards():
    with pytest.raises(SingularCubic):
        verify_weierstrass_counterexample(0, 0, 3)
    with pytest.raises(NotASquare):
        verify_weierstrass_counterexample(1, 1, 1)
    with pytest.raises(NotASquare):
        verify_weierstrass_counterexample(1, 1, 3, s=3)
    assert verify_weierstrass_counterexample(1, 1, 1, field=GF(7)).passed  # 2 = 3^2 mod 7


def test_weierstrass_cubic_shape():
    assert weierstrass_cubic(2, 5) == P("x1^2*x2 - x0^3 - 2*x0*x2^2 - 5*x2^3")


def test_intersection_experiment():
    f = P("x0^4 + x1^4 + x2^4")
    exp = tangent_intersection_experiment(f, 10, seed=42)
    dims = exp.dimensions
    assert all(a >= b for a, b in zip(dims, dims[1:]))
    assert exp.succeeded
    # Grassmann oracle on the first pair
    J1, J2 = (jacobian_piece(g) for g in exp.forms[:2])
    both = row_basis([list(v) for v in J1.basis + J2.basis], QQ, J1.ambient_dimension)
    assert dims[1] == J1.dimension + J2.dimension - len(both)
    again = tangent_intersection_experiment(f, 10, seed=42)
    assert again.forms == exp.forms


def test_intersection_seed_reuse():
    g = P("x0^4 + x1^4 + x2^4")
    assert intersection_dimensions([g, g]) == [jacobian_piece(g).dimension] * 2


def test_intersection_guards():
    with pytest.raises(NotSmooth):
        tangent_intersection_experiment(P(NODAL_CUBIC), 3)
    with pytest.raises(UnsupportedField):
        tangent_intersection_experiment(P("x0^3 + x1^3 + x2^3", 3, GF(7)), 3)


def test_random_jacobian_directions_keep_obstruction():
    f = P(TACNODE_LIKE)
    o = parse_point(ORIGIN)
    rng = random.Random(5)
    for _ in range(20):
        h = random_coeffs(f, rng).expand(f)
        assert singular_at(f + h, o)
