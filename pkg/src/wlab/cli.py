"""Command-line front end.  Every subcommand prints one JSON document.

Exit codes: 0 when all verdicts pass, 1 otherwise, 2 for usage or parse errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys

from .errors import WlabError
from .reporting import VerificationReport, dumps, parse_complex


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(2)


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _lambdas(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated values")
    return tuple(_complex_arg(p) for p in parts)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    e = sub.add_parser("elliptic", help="lattice constants for one tau")
    e.add_argument("--tau", type=_complex_arg, required=True)

    v = sub.add_parser("verify", help="verification suites")
    vs = v.add_subparsers(dest="suite", required=True, parser_class=_Parser)
    g1 = vs.add_parser("genus1")
    g1.add_argument("--c-max", type=_positive)
    g1.add_argument("--c-step", type=_positive)
    g1.add_argument("--seed", type=int, default=42)
    ne = vs.add_parser("nonexistence")
    ne.add_argument("--genus", type=int, required=True)
    ne.add_argument("--case", type=int, choices=(1, 2, 3, 4))
    ne.add_argument("--seed", type=int, default=42)

    ct = sub.add_parser("classify-torus", help="8-symmetry checks for a quartic")
    ct.add_argument("--lambdas", type=_lambdas, required=True)
    ct.add_argument("--alpha", type=_complex_arg, default=1 + 0j)
    ct.add_argument("--seed", type=int, default=42)

    tp = sub.add_parser("theta-planes", help="principal angles of the three planes")
    tp.add_argument("--a", type=_complex_arg, required=True)
    tp.add_argument("--r0", type=_positive, required=True)

    m = sub.add_parser("mesh", help="export a surface mesh (OBJ or PLY by extension)")
    m.add_argument("kind", choices=("dc", "curve12", "catenoid"))
    m.add_argument("--out", required=True)
    m.add_argument("--a", type=_complex_arg, default=0j)
    m.add_argument("--n-theta", type=int, default=16)
    m.add_argument("--n-r", type=int, default=32)
    m.add_argument("--r-min", type=_positive)
    m.add_argument("--r-max", type=_positive)
    m.add_argument("--projection", default="drop3")
    return p


def _elliptic(args):
    from . import elliptic_kernel as ek

    ctx = ek.elliptic_context(args.tau)
    return {"suite": "elliptic", "verdict": "pass", **ek.context_json(ctx)}


def _genus1(args):
    from .config import RunConfig
    from .genus1_analysis import verify_holomorphicity

    cfg = RunConfig(seed=args.seed)
    changes = {k: v for k, v in (("c_max", args.c_max), ("c_step", args.c_step)) if v is not None}
    cfg = dataclasses.replace(cfg, **changes)
    return verify_holomorphicity(cfg)


def _nonexistence(args):
    from .cyclic_cover import nonexistence_pipeline

    cases = None if args.case is None else (args.case,)
    return nonexistence_pipeline((args.genus,), seed=args.seed, cases=cases)


def _classify(args):
    from .genus1_classification import quartic_suite

    return quartic_suite(args.lambdas, args.alpha, seed=args.seed)


def _theta(args):
    from . import plane_symmetry as ps

    t = ps.theta_closed_forms(args.a, args.r0)
    V = (ps.plane_Q1(args.a), ps.plane_Q2(args.a, args.r0), ps.plane_Q3())
    num = (ps.theta_sup_numeric(V[0], V[1]), ps.theta_sup_numeric(V[1], V[2]),
           ps.theta_sup_numeric(V[0], V[2]))
    gap = max(abs(x - y) for x, y in zip(t, num))
    rep = VerificationReport("theta-planes", config={"a": args.a, "r0": args.r0})
    rep.check("closed_vs_numeric", gap <= 1e-6,
              values={"closed": list(t), "numeric": list(num), "swap_condition": ps.swap_condition(args.a, args.r0)},
              margins={"max_gap": gap})
    return rep


def _mesh(args):
    from . import weierstrass_rep as wr

    kw = {"n_theta": args.n_theta, "n_r": args.n_r, "projection": args.projection}
    if args.n_theta < 2 or args.n_r < 2:
        raise SystemExit(_usage_error("grid needs at least 2 samples per direction"))
    if args.kind == "curve12":
        lo, hi = 0.3, 3.0
    else:
        lo, hi = 0.5, 2.0
    lo = args.r_min or lo
    hi = args.r_max or hi
    if not lo < hi:
        raise SystemExit(_usage_error("need r-min < r-max"))
    kw["r_range"] = (lo, hi)
    if args.kind == "dc":
        mesh = wr.dc_mesh(args.a, **kw)
    elif args.kind == "catenoid":
        mesh = wr.catenoid_mesh(**kw)
    else:
        mesh = wr.curve12_mesh(**kw)
    if args.out.lower().endswith(".ply"):
        wr.write_ply(mesh, args.out)
    else:
        wr.write_obj(mesh, args.out)
    nv, nf = len(mesh.vertices), len(mesh.faces)
    return {"suite": "mesh", "verdict": "pass", "kind": args.kind, "out": args.out,
            "vertices": nv, "faces": nf}


def _usage_error(msg: str) -> int:
    sys.stderr.write(f"wlab: error: {msg}\n")
    return 2


_DISPATCH = {"elliptic": _elliptic, "classify-torus": _classify, "theta-planes": _theta, "mesh": _mesh}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.cmd == "verify":
        fn = _genus1 if args.suite == "genus1" else _nonexistence
    else:
        fn = _DISPATCH[args.cmd]
    try:
        out = fn(args)
    except SystemExit as e:
        return int(e.code)
    except (WlabError, ValueError) as e:
        return _usage_error(str(e))
    if isinstance(out, VerificationReport):
        sys.stdout.write(out.to_json())
        return 0 if out.ok else 1
    sys.stdout.write(dumps(out))
    return 0 if out.get("verdict") == "pass" else 1


def main() -> None:
    raise SystemExit(run_cli())


if __name__ == "__main__":
    main()
