"""Command-line front end.

Every subcommand wraps one library operation and prints a JSON report (or
``key: value`` lines with ``--output human``).  Exit codes: 0 success,
1 domain error (the report carries ``error.kind``), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field

from . import __version__
from .deform import (
    construct_ttu,
    decide_smoothable,
    obstruction_certificate,
    smoothing_search,
    tangent_intersection_experiment,
    verify_weierstrass_counterexample,
)
from .errors import AlgebraError, UnsupportedField
from .jacobian import jacobian_piece, membership
from .orbit import (
    ALL_MATRICES,
    DEFAULT_CAPS,
    DEFAULT_DIVISOR_CAP,
    INVERTIBLE_ONLY,
    PROJECTIVE,
    STRICT,
    binary_roots,
    is_equivalent_fp,
    lin_group_binary,
    pencil_scan_fp,
    triviality_scan_fp,
)
from .poly import HomPoly, multiplicity_at, parse_point, parse_poly
from .scalar import Field, field_from_text
from .smoothness import is_smooth, singular_points_scan

COMMANDS = (
    "parse", "smooth", "singular", "multiplicity", "jacobian", "member", "smoothable", "smooth-search",
    "obstruct", "construct-ttu", "weierstrass", "equiv", "triviality-scan", "pencil-scan", "lin-group",
    "intersect-experiment",
)


@dataclass
class RunConfig:
    field: Field
    nvars: int | None
    seed: int
    budget: int
    output: str
    bound: int = 3
    caps: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "field": str(self.field),
            "nvars": self.nvars,
            "seed": self.seed,
            "budget": self.budget,
            "output": self.output,
            "bound": self.bound,
            "caps": self.caps,
        }


# -- json helpers ------------------------------------------------------------


def _scalar(K: Field, x):
    return K.to_json(x)


def _matrix(M) -> list:
    return [[_scalar(M.field, x) for x in row] for row in M.entries]


def _mult(m):
    return "inf" if m == math.inf else m


def _points(pairs) -> list:
    return [{"point": str(p), "multiplicity": _mult(m)} for p, m in pairs]


# -- argument parsing ------------------------------------------------------


def _seed(text: str) -> int:
    value = int(text)
    if not -(2**63) <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


def _cap(text: str):
    try:
        n, p = text.split("=")
        return int(n), int(p)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N=P, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="q", help="'q' or 'fp:<prime>' (default q)")
    common.add_argument("--nvars", type=int, default=None, help="number of variables (default: inferred)")
    common.add_argument("--seed", type=_seed, default=0)
    common.add_argument("--budget", type=int, default=200, help="trial budget for randomized searches")
    common.add_argument("--bound", type=int, default=3, help="sampling box [-bound, bound] over Q")
    common.add_argument("--output", choices=("json", "human"), default="json")
    common.add_argument("--cap", type=_cap, action="append", default=[], metavar="N=P",
                        help="allow matrix enumeration in n+1 variables up to prime P")
    common.add_argument("--divisor-cap", type=int, default=DEFAULT_DIVISOR_CAP)

    parser = argparse.ArgumentParser(prog="tangdeform", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tangdeform {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def cmd(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    cmd("parse", "normalize a polynomial").add_argument("poly")
    cmd("smooth", "decide smoothness over the algebraic closure").add_argument("poly")
    p = cmd("singular", "rational singular points with multiplicities")
    p.add_argument("poly")
    p.add_argument("--points", action="append", default=[],
                   help="candidate points over Q, e.g. '(0:0:1)' or '(0:0:1),(1:0:0)'; repeatable")
    p = cmd("multiplicity", "multiplicity at a point")
    p.add_argument("poly")
    p.add_argument("--point", required=True)
    cmd("jacobian", "degree-d piece of the Jacobian ideal").add_argument("poly")
    p = cmd("member", "membership of h in the Jacobian piece of f")
    p.add_argument("poly")
    p.add_argument("--h", required=True)
    p = cmd("smoothable", "tangential smoothability decision")
    p.add_argument("poly")
    p.add_argument("--points", action="append", required=True, help="singular points; repeatable")
    p.add_argument("--skip-completeness", action="store_true",
                   help="trust that --points lists every singular point")
    p = cmd("smooth-search", "seeded random search for a smoothing h")
    p.add_argument("poly")
    p.add_argument("--points", action="append", default=[], help="known singular points; repeatable")
    p = cmd("obstruct", "obstruction certificate at a point of multiplicity >= 3")
    p.add_argument("poly")
    p.add_argument("--point", required=True)
    p = cmd("construct-ttu", "product of two smooth forms with hypothesis report")
    p.add_argument("p1")
    p.add_argument("p2")
    p = cmd("weierstrass", "check the Weierstrass cubic deformation z*y^2")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--s", default=None, help="square root of 1 + t (computed when omitted)")
    p = cmd("equiv", "projective equivalence over F_p by enumeration")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--mode", choices=("strict", "projective"), default="strict")
    p.add_argument("--all-matrices", action="store_true")
    p = cmd("triviality-scan", "tangential triviality scan over F_p")
    p.add_argument("poly")
    p.add_argument("--candidates", action="append", default=None, help="candidate h; repeatable")
    p.add_argument("--mode", choices=("invertible", "all"), default="invertible")
    p.add_argument("--equivalence", choices=("strict", "projective"), default="strict")
    p = cmd("pencil-scan", "reducible fibers of a pencil over F_p")
    p.add_argument("f")
    p.add_argument("g")
    p = cmd("lin-group", "Moebius symmetries of a binary form's roots")
    p.add_argument("poly", nargs="?")
    p.add_argument("--roots", action="append", default=None, help="roots as points, e.g. '(0:1),(1:0),(1:1)'")
    p = cmd("intersect-experiment", "intersect Jacobian pieces of nearby forms")
    p.add_argument("poly")
    p.add_argument("--count", type=int, required=True)
    return parser


def _split_points(items, K: Field) -> list:
    out = []
    for item in items:
        found = re.findall(r"\([^()]*\)", item)
        if not found:
            found = [item]
        out.extend(parse_point(s, K) for s in found)
    return out


# -- subcommands -------------------------------------------------------------


def _run(args, cfg: RunConfig) -> dict:
    K = cfg.field
    caps = dict(DEFAULT_CAPS)
    caps.update(dict(args.cap))

    nvars = cfg.nvars
    if nvars is None:
        # one variable count shared by every polynomial on the command line
        texts = [getattr(args, k, None) for k in ("poly", "p1", "p2", "f", "g", "h")]
        texts += getattr(args, "candidates", None) or []
        inferred = [parse_poly(t, None, K).nvars for t in texts if t]
        nvars = max(inferred) if inferred else None

    def P(text: str) -> HomPoly:
        return parse_poly(text, nvars, K)

    c = args.command
    if c == "parse":
        f = P(args.poly)
        return {"poly": f.to_text(), "nvars": f.nvars, "degree": f.degree, "terms": len(f)}
    if c == "smooth":
        return {"smooth": is_smooth(P(args.poly))}
    if c == "singular":
        f = P(args.poly)
        rep = singular_points_scan(f, _split_points(args.points, K))
        return {
            "smooth": rep.smooth,
            "ideal_dimension": rep.ideal_dimension,
            "exhaustive_over": None if rep.exhaustive_over is None else str(rep.exhaustive_over),
            "singular_points": _points(rep.rational_singular_points),
            "rejected_candidates": [str(p) for p in rep.rejected_candidates],
        }
    if c == "multiplicity":
        f = P(args.poly)
        p = parse_point(args.point, K)
        return {"point": str(p), "multiplicity": multiplicity_at(f, p)}
    if c == "jacobian":
        J = jacobian_piece(P(args.poly))
        return {
            "dimension": J.dimension,
            "ambient_dimension": J.ambient_dimension,
            "generators": [{"beta": b, "gamma": g, "poly": q.to_text()} for b, g, q in J.generators],
            "basis": [q.to_text() for q in J.basis_polys()],
        }
    if c == "member":
        f = P(args.poly)
        a = membership(parse_poly(args.h, f.nvars, K), jacobian_piece(f))
        return {"member": a is not None, "coeffs": None if a is None else _matrix(a.a)}
    if c == "smoothable":
        f = P(args.poly)
        d = decide_smoothable(f, _split_points(args.points, K), verify_complete=not args.skip_completeness)
        cert = None
        if d.certificate is not None:
            cert = _obstruction_json(d.certificate)
        return {"decision": d.decision, "points": _points(d.points), "certificate": cert, "reason": d.reason}
    if c == "smooth-search":
        f = P(args.poly)
        s = smoothing_search(f, _split_points(args.points, K), cfg.budget, cfg.seed, cfg.bound)
        cert = s.certificate
        return {
            "found": cert is not None,
            "seed": s.seed,
            "budget": s.budget,
            "trials_used": s.trials_used,
            "failures": s.failures,
            "certificate": None if cert is None else {
                "coeffs": _matrix(cert.coeffs.a),
                "h": cert.h.to_text(),
                "f_plus_h": (cert.f + cert.h).to_text(),
                "verified_smooth": cert.verified_smooth,
            },
        }
    if c == "obstruct":
        f = P(args.poly)
        return _obstruction_json(obstruction_certificate(f, parse_point(args.point, K)))
    if c == "construct-ttu":
        p1 = P(args.p1)
        p2 = parse_poly(args.p2, p1.nvars, K)
        t = construct_ttu(p1, p2)
        return {"f": t.f.to_text(), "d1": t.d1, "d2": t.d2, "hypothesis_report": t.hypothesis_report,
                "certified": t.certified}
    if c == "weierstrass":
        w = verify_weierstrass_counterexample(K.parse(args.a), K.parse(args.b), K.parse(args.t),
                                              None if args.s is None else K.parse(args.s), K)
        return {
            "f": w.f.to_text(),
            "h": w.h.to_text(),
            "s": _scalar(K, w.s),
            "membership": w.membership,
            "coeffs": None if w.coeffs is None else _matrix(w.coeffs.a),
            "substitution_check": w.substitution_check,
            "independent_of_f": w.independent_of_f,
            "passed": w.passed,
        }
    if c == "equiv":
        f = P(args.f)
        g = parse_poly(args.g, f.nvars, K)
        mode = STRICT if args.mode == "strict" else PROJECTIVE
        w = is_equivalent_fp(f, g, mode, all_matrices=args.all_matrices, caps=caps)
        return {"equivalent": w is not None, "witness": None if w is None else _witness_json(w)}
    if c == "triviality-scan":
        f = P(args.poly)
        cands = None if args.candidates is None else [parse_poly(h, f.nvars, K) for h in args.candidates]
        scan = triviality_scan_fp(
            f, cands, ALL_MATRICES if args.mode == "all" else INVERTIBLE_ONLY,
            PROJECTIVE if args.equivalence == "projective" else STRICT, caps=caps)
        return {
            "mode": scan.mode,
            "equivalence": scan.equivalence,
            "candidates": [{
                "h": r.h.to_text(),
                "passes": r.passes,
                "witnesses": {str(t): None if w is None else _witness_json(w) for t, w in r.witnesses.items()},
                "degenerate_t": list(r.degenerate_t),
            } for r in scan.tested],
        }
    if c == "pencil-scan":
        f = P(args.f)
        rep = pencil_scan_fp(f, parse_poly(args.g, f.nvars, K), args.divisor_cap)
        return {
            "fibers": [{
                "parameter": str(fb.parameter),
                "fiber": fb.fiber.to_text(),
                "reducible": fb.reducible,
                "factor_witness": None if fb.factor_witness is None else fb.factor_witness.to_text(),
            } for fb in rep.fibers],
            "reducible_count": rep.reducible_count,
            "generic_irreducible": rep.generic_irreducible,
            "bound": rep.bound,
            "within_bound": rep.within_bound,
        }
    if c == "lin-group":
        if args.roots is not None:
            roots = [(p, 1) for p in _split_points(args.roots, K)]
        elif args.poly is not None:
            roots = binary_roots(parse_poly(args.poly, 2, K))
        else:
            raise _Usage("lin-group needs a binary form or --roots")
        if roots is None:
            return {"splits": False, "roots": None, "order": None, "maps": None}
        group = lin_group_binary(roots)
        return {"splits": True, "roots": _points(roots), "order": len(group), "maps": [str(m) for m in group]}
    if c == "intersect-experiment":
        e = tangent_intersection_experiment(P(args.poly), args.count, cfg.seed, cfg.bound)
        return {"dimensions": list(e.dimensions), "succeeded": e.succeeded, "seed": e.seed,
                "trials_used": len(e.forms)}
    raise _Usage(f"unknown command {c}")


def _obstruction_json(cert) -> dict:
    return {
        "point": str(cert.point),
        "multiplicity": cert.multiplicity,
        "generator_multiplicities": [_mult(m) for m in cert.generator_multiplicities],
    }


def _witness_json(w) -> dict:
    return {"A": _matrix(w.A), "lambda": w.lam, "mode": w.mode}


class _Usage(Exception):
    pass


def _emit(report: dict, output: str, stream):
    if output == "json":
        stream.write(json.dumps(report, sort_keys=True) + "\n")
    else:
        for key in sorted(report):
            value = report[key]
            text = value if isinstance(value, str) else json.dumps(value, sort_keys=True)
            stream.write(f"{key}: {text}\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    base = {"command": args.command, "version": __version__}
    try:
        K = field_from_text(args.field)
    except UnsupportedField as exc:
        parser.print_usage(stderr)
        stderr.write(f"tangdeform: error: argument --field: {exc}\n")
        return 2
    cfg = RunConfig(K, args.nvars, args.seed, args.budget, args.output, args.bound,
                    {"enumeration": {str(k): v for k, v in sorted({**DEFAULT_CAPS, **dict(args.cap)}.items())},
                     "divisors": args.divisor_cap})
    base["config"] = cfg.to_json()
    try:
        result = _run(args, cfg)
    except _Usage as exc:
        parser.print_usage(stderr)
        stderr.write(f"tangdeform: error: {exc}\n")
        return 2
    except (AlgebraError, ValueError) as exc:
        kind = getattr(exc, "kind", type(exc).__name__)
        _emit({**base, "error": {"kind": kind, "message": str(exc)}}, args.output, stdout)
        return 1
    _emit({**base, **result}, args.output, stdout)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
