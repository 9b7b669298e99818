"""
Command-line interface.

Simple roots are numbered from 1 in all output.  Weights are comma-separated
fundamental-weight coordinates.  Exit codes: 0 success, 1 invalid input,
2 numerical failure of the solver.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .bly import (
    DiscreteMeasure,
    NoConvergence,
    SingularGram,
    SolverConfig,
    admissibility_check,
    bly_eval,
    load_measure,
    solve_balanced,
)
from .models import lie_basis, parse_model, sample_orbit, satake_ray_limit
from .orbitope import (
    cone_containment_check,
    cone_system,
    face_of_subset,
    moment_polytope,
    polytope_csv,
    render_polytope,
)
from .roots import build_root_system, parse_weight
from .satake import enumerate_boundary_components
from .spectral import TopologicalData, as_float, lambda1_bound, preset, preset_table
from .verify import run_all

SCHEMA = "satake-bly/1"
SEED_ENV = "SATAKE_BLY_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _num(x):
    """JSON-friendly number: exact integers stay integers, the rest get 12 significant digits."""
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else str(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.12g}")


def _vec(v):
    return [_num(x) for x in v]


def _complex_mat(a):
    a = np.asarray(a)
    if a.ndim == 0:
        return [_num(a.real), _num(a.imag)]
    return [_complex_mat(x) for x in a]


def _labels(subset):
    return [i + 1 for i in sorted(subset)]


def _floats(text: str) -> list:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise ValueError(f"cannot parse numbers from {text!r}") from exc


def cmd_roots(args) -> dict:
    rs = build_root_system(args.type)
    return {
        "type": str(rs.cartan_type),
        "rank": rs.rank,
        "cartan": [list(r) for r in rs.cartan],
        "simple_gram": [_vec(r) for r in rs.simple_gram],
        "positive_roots": [
            {"simple": _vec(c), "weight": _vec(rs.root_to_weight(c))} for c in rs.positive_roots
        ],
        "weyl_group_order": rs.weyl_group_order(),
    }


def cmd_satake(args) -> dict:
    rs = build_root_system(args.type)
    mu = parse_weight(args.weight)
    poset = enumerate_boundary_components(rs, mu)
    comps = [
        {
            "I": _labels(c.I),
            "J": _labels(c.J),
            "dim_VI": c.dim_VI,
            "restricted_highest_weight": list(c.restricted_highest_weight),
        }
        for c in poset
    ]
    covers = [[_labels(a.I), _labels(b.I)] for a, b in poset.covers()]
    return {"type": str(rs.cartan_type), "weight": list(mu), "components": comps, "covers": covers}


def cmd_polytope(args) -> dict:
    rs = build_root_system(args.type)
    mu = parse_weight(args.weight)
    P = moment_polytope(rs, mu)
    poset = enumerate_boundary_components(rs, mu)
    faces = []
    for c in poset:
        face = face_of_subset(P, c.I)
        ok, _ = cone_containment_check(P, cone_system(rs, c.I))
        faces.append({
            "I": _labels(c.I),
            "vertices": [list(v) for v in sorted(face.vertex_set, reverse=True)],
            "Y": _vec(face.Y),
            "Z": _vec(face.Z),
            "cone_contains_polytope": ok,
        })
    out = {
        "type": str(rs.cartan_type),
        "weight": list(mu),
        "vertices": [list(v) for v in P.sorted_vertices()],
        "barycenter": _vec(P.barycenter()),
        "faces": faces,
    }
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(polytope_csv(P))
        out["csv"] = args.csv
    if args.svg:
        highlight = [c.I for c in poset] if args.faces else []
        with open(args.svg, "w") as fh:
            fh.write(render_polytope(P, highlight))
        out["svg"] = args.svg
    return out


def cmd_limit(args) -> dict:
    model = parse_model(args.model)
    lim = satake_ray_limit(model, _floats(args.H), t=args.t)
    return {
        "model": model.label(),
        "I": _labels(lim.I),
        "rank": lim.rank,
        "numeric_rank": lim.numeric_rank,
        "error": _num(lim.error),
        "projector_diagonal": _vec(np.real(np.diag(lim.predicted))),
    }


def cmd_balance(args) -> dict:
    if args.measure:
        model, measure = load_measure(args.measure)
        if args.model and parse_model(args.model).label() != model.label():
            raise ValueError("--model does not match the measure file")
    else:
        if not args.model:
            raise ValueError("--model is required with --sample")
        model = parse_model(args.model)
        measure = DiscreteMeasure.uniform(sample_orbit(model, args.sample, seed=args.seed))
    basis = lie_basis(model.n)
    report = admissibility_check(model, measure)
    config = SolverConfig(tol=args.tol, max_iter=args.max_iter)
    result = solve_balanced(model, basis, measure, config)
    return {
        "model": model.label(),
        "points": len(measure),
        "admissibility": {"passed": report.passed, "rank": report.rank, "condition": _num(report.condition)},
        "u": _complex_mat(result.u),
        "residual": _num(result.residual),
        "iterations": result.iterations,
        "trace": _vec(result.trace),
        "check_residual": _num(np.linalg.norm(bly_eval(model, basis, measure, result.p))),
    }


def cmd_lambda1(args) -> dict:
    if args.table:
        return {"presets": json.loads(preset_table())}
    if args.preset:
        td = preset(args.preset, scale=args.scale)
    else:
        if None in (args.n, args.d, args.numerator, args.denominator):
            raise ValueError("give --preset or all of --n --d --numerator --denominator")
        import sympy

        td = TopologicalData(args.n, args.d, sympy.sympify(args.numerator), sympy.sympify(args.denominator))
    bound = lambda1_bound(td)
    return {
        "n": td.n,
        "d": td.d,
        "bound": _num(as_float(bound)),
        "exact": str(bound),
        "volume": _num(as_float(td.volume)),
    }


def cmd_verify(args) -> dict:
    results = run_all(seed=args.seed)
    return {
        "checks": [
            {"name": r.name, "passed": r.passed, "detail": r.detail, "seconds": _num(r.seconds)} for r in results
        ],
        "passed": all(r.passed for r in results),
    }


def build_parser() -> argparse.ArgumentParser:
    default_seed = int(os.environ.get(SEED_ENV, "0"))
    p = _Parser(prog="satake-bly", description="Satake boundary combinatorics, orbitopes and balanced points.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("-o", "--output", help="write JSON here instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("roots", help="root system data")
    s.add_argument("--type", required=True, help="Cartan type, e.g. A3, G2")
    s.set_defaults(func=cmd_roots)

    s = sub.add_parser("satake", help="boundary components for a highest weight")
    s.add_argument("--type", required=True)
    s.add_argument("--weight", required=True, help="fundamental-weight coordinates, e.g. 1,0,0")
    s.set_defaults(func=cmd_satake)

    s = sub.add_parser("polytope", help="moment polytope, faces and cones")
    s.add_argument("--type", required=True)
    s.add_argument("--weight", required=True)
    s.add_argument("--csv", help="write vertex table")
    s.add_argument("--svg", help="write drawing (rank 2 only)")
    s.add_argument("--no-faces", dest="faces", action="store_false", help="do not highlight faces in the SVG")
    s.set_defaults(func=cmd_polytope)

    s = sub.add_parser("limit", help="Satake ray limit of tau(exp tH) tau(exp tH)^*")
    s.add_argument("--model", required=True, help="defining:n, exterior:n,k or sym:n,d")
    s.add_argument("--H", required=True, help="diagonal of a dominant traceless H")
    s.add_argument("--t", type=float, default=40.0)
    s.set_defaults(func=cmd_limit)

    s = sub.add_parser("balance", help="solve for a balanced point")
    s.add_argument("--model")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--measure", help="measure JSON file")
    src.add_argument("--sample", type=int, help="number of Haar-random orbit points")
    s.add_argument("--seed", type=int, default=default_seed)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--max-iter", type=int, default=50)
    s.set_defaults(func=cmd_balance)

    s = sub.add_parser("lambda1", help="first-eigenvalue bound")
    s.add_argument("--preset", help="pn:k or gr:k,n (a = 2 pi c_1)")
    s.add_argument("--scale", default="1", help="use a = scale * 2 pi c_1")
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--numerator")
    s.add_argument("--denominator")
    s.add_argument("--table", action="store_true", help="print the preset table")
    s.set_defaults(func=cmd_lambda1)

    s = sub.add_parser("verify", help="run the invariant suite")
    s.add_argument("--seed", type=int, default=default_seed)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    code = 0
    try:
        payload = args.func(args)
    except (NoConvergence, SingularGram) as exc:
        payload = {"error": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, NoConvergence):
            payload["residual"] = _num(exc.best.residual)
        code = 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"satake-bly: error: {exc}", file=sys.stderr)
        return 1
    if args.command == "verify" and not payload["passed"]:
        code = 1
    doc = {"schema": SCHEMA, "command": args.command, **payload}
    text = json.dumps(doc, indent=2, sort_keys=False) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
