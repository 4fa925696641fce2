"""Command-line front end.

Every command builds one JSON report; text and DOT output are renderings of
it.  Exit status: 0 on success, 1 on a domain error, 2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .cubic import (
    CubicHypersurface,
    PlaneFivePointConfig,
    build_plane_sigma,
    build_sigma,
    check_configuration,
    fixes_cubic_pointwise,
    is_involution,
)
from .errors import CremonaError
from .exact.fields import FieldSpec, random_primes
from .picard import alpha_vector, classify, dyndeg_data, growth_invariants, plane_twist_matrices, predicted_degree
from .plane.certify import certify_nonregularizable
from .plane.forest import base_point_forest
from .plane.maps import CHI_INV_TEXT, CHI_TEXT, classify_quadratic
from .ratmap import (
    DEFAULT_WORK_BOUND,
    RationalMapN,
    compose_all,
    degree_certificate,
    degree_sequence,
    is_identity,
    jacobian_det,
)
from .reproduce import FAULTS, reproduce_paper, summary_lines

FIELD_ENV = "CREMONA_FIELD"
NAMED_MAPS = {"chi": CHI_TEXT, "chi-inv": CHI_INV_TEXT}


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _fractions(text: str) -> list[Fraction]:
    try:
        return [Fraction(v) for v in text.replace(" ", "").split(",") if v]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def _load_map(args, spec: str) -> RationalMapN:
    """A map from a JSON file, a built-in name, or components separated by ';'."""
    if spec in NAMED_MAPS:
        return RationalMapN.from_strings(NAMED_MAPS[spec], args.field, 2)
    path = Path(spec)
    if spec.endswith(".json") or path.is_file():
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise UsageError(f"cannot read {spec}: {exc}") from None
        if "field" not in data:
            data = dict(data, field=str(args.field))
        return RationalMapN.from_json(data)
    return RationalMapN.from_strings([c for c in spec.split(";") if c.strip()], args.field)


def _maps(args) -> list[RationalMapN]:
    specs = args.file or []
    if not specs:
        raise UsageError("give at least one map with --file (path, name or 'f0;f1;...')")
    return [_load_map(args, s) for s in specs]


# commands; each returns (results, provenance)


def cmd_sigma_build(args):
    Q = CubicHypersurface.parse(args.cubic, field=args.field)
    sd = build_sigma(Q, _fractions(args.point))
    res = sd.to_json()
    res["is_involution"] = is_involution(sd.sigma)
    res["fixes_cubic_pointwise"] = fixes_cubic_pointwise(sd.sigma, Q)
    cert = degree_certificate(sd.sigma, args.seed)
    res["effective_degree"] = cert.degree
    return res, {"degree": cert.to_json()}


def cmd_sigma_check_config(args):
    Q = CubicHypersurface.parse(args.cubic, field=args.field)
    pts = [_fractions(p) for p in args.points.split(";") if p.strip()]
    return {"cubic": Q.equation.to_string(), "points": [[str(c) for c in p] for p in pts],
            "configuration_ok": check_configuration(Q, pts)}, {}


def cmd_sigma_plane(args):
    vals = _fractions(args.abc)
    if len(vals) != 3:
        raise UsageError("--abc needs three values")
    a, b, c = vals
    sigma, C = build_plane_sigma(PlaneFivePointConfig(a, b, c, args.field))
    return {"sigma": sigma.to_json(), "cubic": C.equation.to_string(), "is_involution": is_involution(sigma),
            "fixes_cubic_pointwise": fixes_cubic_pointwise(sigma, C)}, {}


def cmd_map_compose(args):
    f = compose_all(_maps(args), args.work_bound)
    return {"composite": f.to_json()}, {}


def cmd_map_degree(args):
    cert = degree_certificate(_maps(args), args.seed)
    return {"degree": cert.degree, "formal_degree": cert.formal_degree}, {"degree": cert.to_json()}


def cmd_map_seq(args):
    (f,) = _maps(args)[:1]
    seq = degree_sequence(f, args.iters, args.seed, args.work_bound)
    return {"degrees": list(seq.degrees), "submultiplicative": seq.is_submultiplicative()}, {"sequence": seq.to_json()}


def cmd_map_jac(args):
    f = compose_all(_maps(args), args.work_bound)
    names = ("x", "y", "z") if f.n == 2 else None
    return {"jacobian": jacobian_det(f).to_string(names)}, {}


def cmd_map_identity(args):
    f = compose_all(_maps(args), args.work_bound)
    return {"is_identity": is_identity(f), "degree": f.degree}, {}


def cmd_word(args):
    w = _ints(args.letters)
    eps = Fraction(args.eps)
    if args.action == "classify":
        return classify(w, eps).to_json(), {}
    if args.action == "dyndeg":
        return dyndeg_data(w, eps).to_json(), {}
    av = alpha_vector(w, args.k)
    if args.action == "alpha":
        return dict(av.to_json(), invariants=growth_invariants(av)), {}
    return {"word": w, "predicted_degree": predicted_degree(w, args.k), "alpha": list(av.alpha)}, {}


def cmd_plane_basepoints(args):
    (f,) = _maps(args)[:1]
    forest = base_point_forest(f, args.seed)
    return forest.to_json(), {}


def cmd_plane_proximity(args):
    (f,) = _maps(args)[:1]
    forest = base_point_forest(f, args.seed)
    res = forest.proximity_json()
    res["dot"] = forest.to_dot()
    return res, {}


def cmd_plane_classify2(args):
    (f,) = _maps(args)[:1]
    cls, forest = classify_quadratic(f, args.seed)
    return {"class": cls.value, "shape": [forest.shape()[0], list(forest.shape()[1])],
            "forest": forest.to_json()}, {}


def cmd_plane_certify(args):
    tau = _ints(args.tau)
    if len(tau) != 9:
        raise UsageError("--tau needs 9 integers (row major)")
    rows = [tau[0:3], tau[3:6], tau[6:9]]
    prime = None
    if args.audit == "modular":
        prime = args.audit_prime or random_primes(args.seed, 1)[0]
    rep = certify_nonregularizable(rows, args.iters, args.seed, args.audit != "none", args.work_bound,
                                   audit_prime=prime)
    return rep.to_json(), {"audit_prime": prime}


def cmd_plane_twist(args):
    return plane_twist_matrices(args.case).to_json(), {}


def cmd_reproduce(args):
    bundle = reproduce_paper(args.seed, args.inject_fault, tau_count=args.tau_count,
                             tau_audit=args.tau_audit, repeat=not args.no_repeat)
    return bundle, {}


# parser


def _common(p: argparse.ArgumentParser, suppress: bool):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0), help="seed for every randomized protocol")
    p.add_argument("--json", action="store_true", default=d(False), help="print the JSON report")
    p.add_argument("--work-bound", type=int, default=d(DEFAULT_WORK_BOUND),
                   help="maximum predicted monomials per composition")
    p.add_argument("--field", default=d(os.environ.get(FIELD_ENV, "QQ")),
                   help=f"QQ or GF(p); default from ${FIELD_ENV}")
    p.add_argument("--format", choices=["json", "text", "dot"], default=d(None))
    p.add_argument("--output", default=d(None), help="write to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cremona", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    _common(parser, False)
    top = parser.add_subparsers(dest="group", required=True)

    def leaf(group, name, func, help_):
        p = group.add_parser(name, help=help_)
        _common(p, True)
        p.set_defaults(func=func)
        return p

    sig = top.add_parser("sigma", help="involutions attached to points of cubics").add_subparsers(
        dest="cmd", required=True)
    p = leaf(sig, "build", cmd_sigma_build, "build the involution of a smooth point")
    p.add_argument("--cubic", required=True)
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    p = leaf(sig, "check-config", cmd_sigma_check_config, "check a configuration of points")
    p.add_argument("--cubic", required=True)
    p.add_argument("--points", required=True, help="points separated by ';'")
    p = leaf(sig, "plane", cmd_sigma_plane, "explicit five-point plane involution")
    p.add_argument("--abc", required=True)

    mp = top.add_parser("map", help="rational maps").add_subparsers(dest="cmd", required=True)
    for name, func, h in [
        ("compose", cmd_map_compose, "compose maps, first --file outermost"),
        ("degree", cmd_map_degree, "effective degree"),
        ("seq", cmd_map_seq, "degrees of iterates"),
        ("jac", cmd_map_jac, "Jacobian determinant"),
        ("identity-check", cmd_map_identity, "is the composite the identity"),
    ]:
        p = leaf(mp, name, func, h)
        p.add_argument("--file", action="append", help="JSON path, built-in name, or 'f0;f1;...'")
        if name == "seq":
            p.add_argument("--iters", type=int, default=3)

    wd = top.add_parser("word", help="words in the involutions").add_subparsers(dest="cmd", required=True)
    for name in ("classify", "dyndeg", "alpha", "degree"):
        p = leaf(wd, name, cmd_word, f"{name} of a word")
        p.set_defaults(action=name)
        p.add_argument("--letters", required=True, help="e.g. 1,2,3 (leftmost applied last)")
        p.add_argument("--eps", default="1e-12", help="width of the isolating interval")
        p.add_argument("--k", type=int, default=None, help="number of generators")

    pl = top.add_parser("plane", help="plane maps").add_subparsers(dest="cmd", required=True)
    for name, func, h in [
        ("basepoints", cmd_plane_basepoints, "base points with multiplicities"),
        ("proximity", cmd_plane_proximity, "proximity graph"),
        ("classify2", cmd_plane_classify2, "class of a quadratic map"),
    ]:
        p = leaf(pl, name, func, h)
        p.add_argument("--file", action="append", help="JSON path, built-in name, or 'f0;f1;f2'")
    p = leaf(pl, "certify-chi", cmd_plane_certify, "base-point certificate for tau o chi")
    p.add_argument("--tau", default="1,0,0,0,1,0,0,0,1")
    p.add_argument("--iters", type=int, default=3)
    p.add_argument("--audit", choices=["modular", "exact", "none"], default="modular")
    p.add_argument("--audit-prime", type=int, default=None)
    p = leaf(pl, "twist", cmd_plane_twist, "twisted involution matrices")
    p.add_argument("--case", type=int, choices=[1, 2], required=True)

    p = top.add_parser("reproduce-paper", help="run every acceptance check")
    _common(p, True)
    p.set_defaults(func=cmd_reproduce)
    p.add_argument("--inject-fault", choices=sorted(FAULTS), default=None)
    p.add_argument("--tau-count", type=int, default=10)
    p.add_argument("--tau-audit", action="store_true", help="audit every random tau modulo a prime")
    p.add_argument("--no-repeat", action="store_true", help="skip the determinism rerun")
    return parser


def _render_text(report: dict) -> str:
    res = report["results"]
    if report["command"] == "reproduce-paper":
        lines = summary_lines(res)
        lines.append(f"digest {res['digest']}")
        return "\n".join(lines)
    out = []
    for k, v in res.items():
        if isinstance(v, (dict, list)):
            v = json.dumps(v, sort_keys=True)
        out.append(f"{k}: {v}")
    return "\n".join(out)


def run(argv: list[str] | None = None) -> tuple[int, dict | None]:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (0 if exc.code == 0 else 2), None
    command = args.group if args.group == "reproduce-paper" else f"{args.group} {args.cmd}"
    try:
        args.field = FieldSpec.parse(args.field)
        if args.work_bound <= 0:
            raise UsageError("--work-bound must be positive")
        t0 = time.perf_counter()
        results, provenance = args.func(args)
        elapsed = time.perf_counter() - t0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"cremona: error: {exc}", file=sys.stderr)
        return 2, None
    except (CremonaError, ValueError, ArithmeticError) as exc:
        print(f"cremona: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1, None
    report = {
        "command": command,
        "inputs": argv,
        "config": {"field": str(args.field), "seed": args.seed, "work_bound": args.work_bound},
        "results": results,
        "provenance": dict(provenance, seed=args.seed),
        "timings": {"seconds": round(elapsed, 3)},
    }
    fmt = args.format or ("json" if args.json else "text")
    if fmt == "json":
        text = json.dumps(report, indent=2, sort_keys=True)
    elif fmt == "dot":
        if "dot" not in results:
            print("cremona: error: DOT output is only available for 'plane proximity'", file=sys.stderr)
            return 2, report
        text = results["dot"]
    else:
        text = _render_text(report)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    code = 0
    if command == "reproduce-paper" and not results["hashable"]["all_passed"]:
        code = 1
    return code, report


def main(argv: list[str] | None = None) -> int:
    return run(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
