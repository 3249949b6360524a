"""Command line interface.

Subcommands mirror the library layers: basis dumps, bound checks, the
error constant, probability curves, critical-size sequences, weak-*
pairings, and the 1D convergence study.  Output is CSV or JSON lines,
written to --out or stdout.  Runs are deterministic for a fixed --seed.
Exit codes: 0 success (and all embedded checks PASS), 1 a named check
failed, 2 usage error, 3 inadmissible parameters.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import fem1d
from .basis import build_basis
from .bounds import ConstantBundle, point_bound_check, script_c, seminorm_bound_check
from .geometry import reference_simplex
from .norms import AdmissibilityError
from .probability import (
    AccuracyLaw,
    Bump,
    ElementPair,
    GeometricSeminormModel,
    SinPiSeminormModel,
    h_star_explicit,
    h_star_sequence,
    weak_star_test,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INADMISSIBLE = 3


def _emit(rows, fmt, out):
    """Write dict rows as CSV or JSON lines with stable column order."""
    if not rows:
        return
    if fmt == "json":
        text = "\n".join(json.dumps(r, sort_keys=True) for r in rows) + "\n"
    else:
        cols = []
        for row in rows:
            for key in row:
                if key not in cols:
                    cols.append(key)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=cols, restval="", lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        text = buf.getvalue()
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _model(name, p):
    if name == "sinpi":
        return SinPiSeminormModel(p)
    if name == "exp":
        return GeometricSeminormModel(1.0)
    raise argparse.ArgumentTypeError(f"unknown model '{name}'")


def cmd_basis(args):
    basis = build_basis(args.n, args.k)
    rows = []
    for mi, node, poly in zip(basis.indices, basis.nodes, basis.polynomials):
        rows.append(
            {
                "multi_index": list(mi),
                "node": [str(c) for c in node],
                "terms": {" ".join(map(str, e)): str(c) for e, c in sorted(poly.terms.items(), reverse=True)},
            }
        )
    _emit(rows, "json", args.out)
    return EXIT_OK


def cmd_bounds(args):
    basis = build_basis(args.n, args.k)
    checks = [point_bound_check(basis, r, samples=args.samples, seed=args.seed) for r in range(args.r + 1)]
    checks.append(seminorm_bound_check(basis, reference_simplex(args.n), args.l, args.p))
    _emit([c.to_record() for c in checks], args.format, args.out)
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print(f"FAIL: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_constant(args):
    bundle = ConstantBundle(
        n=args.n,
        m=args.m,
        k=args.k,
        p=args.p,
        sigma=args.sigma,
        lam=args.lam,
        cea_ratio=args.cea_ratio,
        h_cap=args.h_cap,
    )
    row = {
        "n": args.n,
        "m": args.m,
        "k": args.k,
        "p": args.p,
        "sigma": args.sigma,
        "lam": args.lam,
        "cea_ratio": args.cea_ratio,
        "h_cap": args.h_cap,
        "script_C": script_c(bundle),
    }
    _emit([row], args.format, args.out)
    return EXIT_OK


def _h_grid(args):
    if args.hmin <= 0 or args.hmax <= args.hmin or args.steps < 2:
        raise argparse.ArgumentTypeError("need 0 < hmin < hmax and steps >= 2")
    return np.geomspace(args.hmin, args.hmax, args.steps)


def cmd_prob(args):
    if args.ck1 is not None and args.ck2 is not None:
        pair = ElementPair(k1=args.k1, k2=args.k2, c_k1=args.ck1, c_k2=args.ck2)
        law = AccuracyLaw.from_pair(pair)
    else:
        hs = h_star_explicit(
            args.n, args.m, args.p, args.k1, args.k2, seminorm_ratio=args.seminorm_ratio, cea_quotient=args.cea_ratio
        )
        law = AccuracyLaw(h_star=hs, exponent=args.k2 - args.k1)
    step = AccuracyLaw(h_star=law.h_star, exponent=law.exponent, kind="step")
    rows = [
        {"h": float(h), "probability": float(law(h)), "step": float(step(h)), "h_star": law.h_star}
        for h in _h_grid(args)
    ]
    _emit(rows, args.format, args.out)
    return EXIT_OK


def cmd_hstar_seq(args):
    model = _model(args.model, args.p)
    hs = h_star_sequence(args.k, args.qmax, model, n=args.n, m=args.m, p=args.p)
    rows = [{"q": q, "h_star": float(hs[q - 1]), "h_star_over_q": float(hs[q - 1] / q)} for q in range(1, args.qmax + 1)]
    _emit(rows, args.format, args.out)
    return EXIT_OK


def cmd_weakstar(args):
    model = _model(args.model, args.p)
    q_list = [int(t) for t in args.q_list.split(",") if t.strip()]
    bump = Bump(args.bump_a, args.bump_b)
    rows = weak_star_test(args.k, q_list, bump, model, n=args.n, m=args.m, p=args.p)
    _emit(rows, args.format, args.out)
    return EXIT_OK


def cmd_converge(args):
    counts = [int(t) for t in args.meshes.split(",") if t.strip()]
    problem = fem1d.ModelProblem.sine() if args.problem == "sine" else fem1d.ModelProblem.cubic()
    rows, slope = fem1d.convergence_study(problem, args.k, args.m, args.p, counts, cea_ratio=args.cea_ratio)
    for row in rows:
        row["slope"] = slope
    _emit(rows, args.format, args.out)
    violated = [r for r in rows if r["pass"] is False]
    if violated:
        print("FAIL: error exceeded the bound", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _add_common(sp):
    sp.add_argument("--format", choices=["csv", "json"], default="csv")
    sp.add_argument("--out", default=None, help="output file (default stdout)")
    sp.add_argument("--seed", type=int, default=0)


def build_parser():
    ap = argparse.ArgumentParser(prog="fem-accuracy", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("basis", help="dump the exact shape functions of one basis")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--k", type=int, default=2)
    _add_common(sp)
    sp.set_defaults(fn=cmd_basis)

    sp = sub.add_parser("bounds", help="pointwise and seminorm cap checks")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--k", type=int, default=2)
    sp.add_argument("--r", type=int, default=2, help="max derivative order for the pointwise scan")
    sp.add_argument("--l", type=int, default=1)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--samples", type=int, default=10000)
    _add_common(sp)
    sp.set_defaults(fn=cmd_bounds)

    sp = sub.add_parser("constant", help="evaluate the error constant script_C(k)")
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--lam", type=float, default=1.0)
    sp.add_argument("--cea-ratio", type=float, default=1.0)
    sp.add_argument("--h-cap", type=float, default=1.0)
    _add_common(sp)
    sp.set_defaults(fn=cmd_constant)

    sp = sub.add_parser("prob", help="accuracy-probability curve for a degree pair")
    sp.add_argument("--k1", type=int, default=1)
    sp.add_argument("--k2", type=int, default=2)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--ck1", type=float, default=None, help="explicit constant for k1")
    sp.add_argument("--ck2", type=float, default=None, help="explicit constant for k2")
    sp.add_argument("--seminorm-ratio", type=float, default=1.0)
    sp.add_argument("--cea-ratio", type=float, default=1.0)
    sp.add_argument("--hmin", type=float, default=0.01)
    sp.add_argument("--hmax", type=float, default=10.0)
    sp.add_argument("--steps", type=int, default=50)
    _add_common(sp)
    sp.set_defaults(fn=cmd_prob)

    sp = sub.add_parser("hstar-seq", help="critical mesh sizes for growing degree gap")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--qmax", type=int, default=200)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--model", choices=["sinpi", "exp"], default="sinpi")
    _add_common(sp)
    sp.set_defaults(fn=cmd_hstar_seq)

    sp = sub.add_parser("weakstar", help="pairing error of the laws against the step limit")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--q-list", default="1,2,5,10,20,50,100,200")
    sp.add_argument("--bump-a", type=float, default=1.0)
    sp.add_argument("--bump-b", type=float, default=2.0)
    sp.add_argument("--n", type=int, default=1)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--model", choices=["sinpi", "exp"], default="sinpi")
    _add_common(sp)
    sp.set_defaults(fn=cmd_weakstar)

    sp = sub.add_parser("converge", help="1D Galerkin convergence study")
    sp.add_argument("--k", type=int, default=1)
    sp.add_argument("--m", type=int, default=0)
    sp.add_argument("--p", type=float, default=2.0)
    sp.add_argument("--problem", choices=["sine", "cubic"], default="sine")
    sp.add_argument("--meshes", default="8,16,32,64,128")
    sp.add_argument("--cea-ratio", type=float, default=1.0)
    _add_common(sp)
    sp.set_defaults(fn=cmd_converge)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except AdmissibilityError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INADMISSIBLE


if __name__ == "__main__":
    sys.exit(main())
