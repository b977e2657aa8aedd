"""Command line entry point: ``verify``.

    verify octonion | triality | lie        single core scenarios
    verify case <id>                        one named scenario
    verify all                              every scenario
    verify sample KIND                      write an OrbitSample JSON file
    verify kfcl SAMPLE.json [--norm F.json] constant-length check on a sample

Exit status is 0 iff every requested check passes.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import caselab
from .finsler import MinkowskiNorm, kfcl_check, quadric_fit, randers_from_quadric, span_coordinates
from .numkit import make_rng
from .spheres import KINDS, OrbitSample, make_model, sample_orbit

_SHORT = {"octonion": "octonion_identities", "triality": "triality_core", "lie": "lie_dims"}


def _params(text):
    if text is None:
        return None
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--params expects comma separated numbers, got {text!r}")


def _common(p):
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--samples", type=int, default=caselab.DEFAULTS["samples"], help="orbit sample size")
    p.add_argument("--budget", type=int, default=caselab.DEFAULTS["budget"], help="evaluations per conjugation search")
    p.add_argument("--params", type=_params, default=None, help="scenario parameters, e.g. 1,0.5,0.25")
    p.add_argument("--out", default=None, help="write the JSON report here")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--timing", action="store_true", help="add duration_ms to each fragment (breaks byte-identical reruns)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="verify", description="Numerical checks for octonions, triality, spin(7/8/9) and homogeneous spheres.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("octonion", "triality", "lie", "all"):
        _common(sub.add_parser(name))
    case = sub.add_parser("case")
    case.add_argument("scenario", choices=caselab.SCENARIOS)
    _common(case)

    smp = sub.add_parser("sample", help="sample pr(Ad(g) X) for a sphere model")
    smp.add_argument("kind", choices=KINDS)
    smp.add_argument("--m", type=int, default=None)
    smp.add_argument("--x", default=None, help="JSON file with the Lie algebra element (square matrix); random if omitted")
    smp.add_argument("--samples", type=int, default=caselab.DEFAULTS["samples"])
    smp.add_argument("--seed", type=int, default=0)
    smp.add_argument("--out", default=None)

    kf = sub.add_parser("kfcl", help="is a norm constant on an orbit sample?")
    kf.add_argument("sample")
    kf.add_argument("--norm", default=None, help="MinkowskiNorm JSON; fitted from the sample if omitted")
    return parser


def _emit(report, args):
    text = caselab.report_json(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    print(text if args.format == "json" else caselab.report_text(report))
    return 0 if report["pass"] else 1


def _cmd_sample(args):
    model = make_model(args.kind, args.m)
    if args.x:
        with open(args.x) as fh:
            X = np.array(json.load(fh), dtype=float)
    else:
        X = model.random_element(make_rng([args.seed, 1]))
    sample = sample_orbit(model, X, args.samples, args.seed)
    text = sample.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_kfcl(args):
    with open(args.sample) as fh:
        sample = OrbitSample.from_json(fh.read())
    out = {"kind": sample.kind, "n": int(sample.points.shape[0])}
    if args.norm:
        with open(args.norm) as fh:
            F = MinkowskiNorm.from_json(fh.read())
        pts = sample.points
    else:
        pts, _ = span_coordinates(sample.points)
        fit = quadric_fit(pts)
        out["fit"] = {"classification": fit.classification, "residual": fit.residual, "inconclusive": fit.inconclusive}
        if fit.classification == "neither":
            out["is_constant"] = False
            print(json.dumps(out, indent=2))
            return 1
        F = randers_from_quadric(fit)
    res = kfcl_check(pts, F)
    out.update({"is_constant": res.is_constant, "spread": res.spread, "mean": res.mean, "norm": F.to_dict()})
    print(json.dumps(out, indent=2))
    return 0 if res.is_constant else 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "sample":
        return _cmd_sample(args)
    if args.command == "kfcl":
        return _cmd_kfcl(args)
    cfg = caselab.RunConfig(seed=args.seed, samples=args.samples, budget=args.budget, params=args.params, timing=args.timing)
    if args.command == "all":
        ids = caselab.SCENARIOS
    elif args.command == "case":
        ids = (args.scenario,)
    else:
        ids = (_SHORT[args.command],)
    return _emit(caselab.run_many(ids, cfg), args)


if __name__ == "__main__":
    sys.exit(main())
