"""Acceptance criteria, one test each, zero tolerance.

Each test prints a single PASS/FAIL line (uncaptured) before asserting.
"""

import itertools
import random
from collections import Counter

from conftest import P, random_form, random_invertible
from tangdeform.deform import (
    SMOOTHABLE,
    construct_ttu,
    decide_smoothable,
    find_smoothing,
    obstruction_certificate,
    random_coeffs,
    tangent_intersection_experiment,
    verify_weierstrass_counterexample,
)
from tangdeform.jacobian import generators_rank, jacobian_piece, membership
from tangdeform.linalg import subspace_intersection
from tangdeform.orbit import coprime, is_equivalent_fp, lin_group_binary, pencil_scan_fp
from tangdeform.poly import ProjPoint, euler_combination, multiplicity_at, parse_point, substitute_matrix
from tangdeform.scalar import GF, QQ
from tangdeform.smoothness import is_smooth, singular_points_scan

ORIGIN = "(0:0:1)"


def fermat(n1, d, field=QQ):
    return P(" + ".join(f"x{i}^{d}" for i in range(n1)), n1, field)


def test_ac01_euler_identity(report):
    rng = random.Random(1)
    bad = []
    for i in range(200):
        d = rng.randint(1, 6)
        if i % 2:
            K = QQ
        else:
            K = GF(rng.choice([p for p in (2, 3, 5, 7, 11, 13) if d % p]))
        f = random_form(rng, rng.randint(1, 4), d, K, density=0.6)
        if euler_combination(f) != f.scale(d):
            bad.append(f)
    ok = report("AC1 Euler identity", not bad, f"{200 - len(bad)}/200 forms")
    assert ok


def test_ac02_smoothness_ground_truth(report):
    fermats = all(is_smooth(fermat(n + 1, d)) for n in (1, 2, 3) for d in range(2, 7))
    cones = not any(is_smooth(P(f"x0^2*x2^{d - 2}" if d > 2 else "x0^2")) for d in range(2, 7))
    nodal = not is_smooth(P("x1^2*x2 - x0^3 - x0^2*x2"))
    rng = random.Random(2)
    scanned = conflicts = 0
    for _ in range(60):
        f = random_form(rng, 3, rng.randint(2, 4), GF(7), density=0.4)
        if f.is_zero():
            continue
        if singular_points_scan(f).rational_singular_points:
            scanned += 1
            conflicts += is_smooth(f)
    ok = fermats and cones and nodal and conflicts == 0
    report("AC2 smoothness ground truth", ok,
           f"fermat={fermats} cones_singular={cones} nodal_singular={nodal} "
           f"F7 forms with rational singular points={scanned} conflicts={conflicts}")
    assert ok


def test_ac03_smoothable_corpus(report):
    origin = parse_point(ORIGIN)
    details, ok = [], True
    for text in ("x1^2*x2 - x0^3 - x0^2*x2", "x1^2*x2^2 - x0^4 + x1^4"):
        f = P(text)
        scan7 = singular_points_scan(P(text, 3, GF(7)))
        scanq = singular_points_scan(f, [origin, parse_point("(1:0:0)"), parse_point("(0:1:0)")])
        mults_ok = all(m == 2 for _, m in scan7.rational_singular_points + scanq.rational_singular_points)
        decision = decide_smoothable(f, [origin]).decision
        cert = find_smoothing(f, [origin], budget=200, seed=42)
        valid = cert is not None and cert.revalidate() and membership(cert.h, jacobian_piece(f)) is not None
        good = mults_ok and decision == SMOOTHABLE and valid
        ok = ok and good
        details.append(f"{text}: {decision}, trial={cert.trials_used if cert else None}")
    report("AC3 smoothable corpus", ok, "; ".join(details))
    assert ok


def test_ac04_obstructed_corpus(report):
    origin = parse_point(ORIGIN)
    rng = random.Random(4)
    details, ok = [], True
    for text in ("x0^4 + x1^3*x2", "x0^5 + x1^4*x2"):
        f = P(text)
        cert = obstruction_certificate(f, origin)
        cert_ok = cert.multiplicity >= 3 and min(cert.generator_multiplicities) >= 2
        stays = all(multiplicity_at(f + random_coeffs(f, rng).expand(f), origin) >= 2 for _ in range(100))
        absent = find_smoothing(f, [origin], budget=200, seed=42) is None
        ok = ok and cert_ok and stays and absent
        details.append(f"{text}: mult={cert.multiplicity} 100 directions singular={stays} search absent={absent}")
    report("AC4 obstructed corpus", ok, "; ".join(details))
    assert ok


def test_ac05_ttu_machinery(report):
    r9 = generators_rank(fermat(3, 3))
    r16 = generators_rank(fermat(4, 4))
    good = construct_ttu(fermat(3, 3), fermat(3, 4))
    cube = construct_ttu(fermat(3, 3), fermat(3, 3))
    cone = construct_ttu(fermat(3, 3), P("x0^4 + x1^4"))
    ok = r9 == 9 and r16 == 16 and good.certified and not cube.certified and not cone.certified
    report("AC5 TTU machinery", ok,
           f"ranks {r9}/{r16}, product certified={good.certified}, cube={cube.certified}, cone={cone.certified}")
    assert ok


def test_ac06_weierstrass(report):
    base = verify_weierstrass_counterexample(1, 1, 3)
    rng = random.Random(6)
    runs = passed = 0
    while runs < 20:
        a = QQ(f"{rng.randint(-9, 9)}/{rng.randint(1, 5)}")
        b = QQ(f"{rng.randint(-9, 9)}/{rng.randint(1, 5)}")
        if 4 * a**3 + 27 * b**2 == 0:
            continue
        runs += 1
        passed += all(verify_weierstrass_counterexample(a, b, t).passed for t in (3, 8, 15))
    ok = base.passed and passed == 20
    report("AC6 Weierstrass", ok, f"(1,1,3) passed={base.passed}, sweep {passed}/20")
    assert ok


def _invariants(f):
    scan = singular_points_scan(f)
    return (jacobian_piece(f).dimension, is_smooth(f),
            sorted(Counter(m for _, m in scan.rational_singular_points).items()))


def test_ac07_equivalence_oracle(report):
    K = GF(3)
    rng = random.Random(7)
    recovered = preserved = 0
    for _ in range(50):
        f = random_form(rng, 3, 2, K, density=0.6)
        while f.is_zero():
            f = random_form(rng, 3, 2, K, density=0.6)
        A = random_invertible(rng, 3, K)
        g = substitute_matrix(f, A)
        w = is_equivalent_fp(f, g)
        if w is not None and w.verify(f, g) and w.A.is_invertible():
            recovered += 1
            preserved += _invariants(f) == _invariants(g)
    ok = recovered == 50 and preserved == 50
    report("AC7 equivalence oracle", ok, f"recovered {recovered}/50, invariants preserved {preserved}/50")
    assert ok


def test_ac08_pencil_bound(report):
    K = GF(5)
    rng = random.Random(8)
    counts = []
    while len(counts) < 10:
        f, g = random_form(rng, 3, 3, K), random_form(rng, 3, 3, K)
        if not f or not g or not coprime(f, g):
            continue
        rep = pencil_scan_fp(f, g)
        if not rep.generic_irreducible:
            continue
        counts.append(rep.reducible_count)
    ok = all(c <= 8 for c in counts)
    report("AC8 pencil bound", ok, f"reducible counts {counts}, bound 8")
    assert ok


def _closed(group):
    members = set(group)
    return all(a.inverse() in members for a in group) and all(a @ b in members for a in group for b in group)


def test_ac09_lin_group(report):
    def pts(xs):
        return [ProjPoint(QQ, (1, 0))] + [ProjPoint(QQ, (x, 1)) for x in xs]

    expected = {(0, 1): 6, (0, 1, 2): 4, (0, 1, 2, 5): 1}
    observed = {}
    closed = True
    for xs in expected:
        group = lin_group_binary(pts(xs))
        observed[xs] = len(group)
        closed = closed and _closed(group)
    ok = observed == expected and closed
    report("AC9 Lin group", ok,
           f"orders {list(observed.values())} vs expected {list(expected.values())}, closed={closed}")
    assert ok


def test_ac10_intersection_experiment(report):
    exp = tangent_intersection_experiment(fermat(3, 4), 10, seed=42)
    dims = list(exp.dimensions)
    monotone = all(a >= b for a, b in zip(dims, dims[1:]))
    ok = dims[-1] == 0 and monotone
    report("AC10 intersection experiment", ok, f"dimensions {dims}")
    assert ok


def _span(vectors, p, dim):
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        out.add(tuple(sum(c * v[i] for c, v in zip(coeffs, vectors)) % p for i in range(dim)))
    return out or {(0,) * dim}


def test_ac11_intersection_oracle(report):
    rng = random.Random(11)
    agree = 0
    for i in range(100):
        p = 2 if i % 2 else 3
        dim = rng.randint(1, 6 if p == 2 else 5)
        fam = [[[rng.randrange(p) for _ in range(dim)] for _ in range(rng.randint(0, dim))]
               for _ in range(rng.randint(2, 4))]
        got = subspace_intersection(fam, GF(p), dim)
        expected = _span(fam[0], p, dim)
        for B in fam[1:]:
            expected &= _span(B, p, dim)
        agree += _span(got, p, dim) == expected and p ** len(got) == len(expected)
    ok = agree == 100
    report("AC11 subspace intersection oracle", ok, f"{agree}/100 families agree")
    assert ok
