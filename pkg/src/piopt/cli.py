"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from importlib import resources
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .benchmarks import FbarParams, fbar_curve, verify_gap_regular, verify_gap_triangle
from .certify import SolverConfig, apx_markup_opt, solve_equilibrium, triangle_markup
from .errors import BracketError, CertificationError, ConstraintError, DomainError, SizeError
from .experts import (
    BernoulliMeans, FollowTheLeader, RandomizedWeightedMajority, RewardMatrix,
    alternating_instance, bih, expected_performance, gap_learning_check, opt_learning,
    round_payoffs, run_policy,
)
from .markup import (
    StochasticMarkupMechanism, approximation_ratio, markup_revenue_curve,
    markup_revenue_triangle, spa_revenue,
)
from .pricing import (
    anon_truncation_params, indifference_alpha_for_q, quad_pricing_inner, quad_pricing_maxmin,
    series_T, verify_indifference,
)
from .revenue_curves import QuadrilateralDist, TriangleDist
from .simulation import mc_simulate

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY = 0, 1, 2


SCHEMAS = ("solve", "revenue", "gap", "experts", "explore")


def load_schema(command: str) -> dict:
    """JSON Schema describing the JSON output of a subcommand."""
    if command not in SCHEMAS:
        raise ValueError(f"no schema for {command!r}")
    return json.loads(resources.files("piopt").joinpath("schemas", f"{command}.json").read_text())


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text, n=None):
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} numbers, got {len(vals)}")
    return vals


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _count(text):
    v = int(float(text))
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _jsonable(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not serializable: {type(obj).__name__}")


def _emit(args, payload, rows=None, header=None):
    if args.format == "csv":
        if rows is None:
            rows = [(k, v) for k, v in payload.items() if not isinstance(v, (dict, list))]
            header = ["key", "value"]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(header)
        w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True, default=_jsonable) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _meta():
    return {"created_at": datetime.now(timezone.utc).isoformat(), "version": __version__}


def cmd_solve(args):
    cfg = SolverConfig(grid_eps=args.grid_eps, r_max=args.r_max)
    sol = solve_equilibrium(cfg)
    payload = sol.to_dict()
    payload.pop("wall_time")
    payload["command"] = "solve"
    payload["meta"] = {**_meta(), "wall_time": sol.wall_time}
    _emit(args, payload)
    return EXIT_OK


def _mechanism(args):
    if args.spa:
        return StochasticMarkupMechanism.markup(1.0)
    if args.markup is not None:
        return StochasticMarkupMechanism.markup(args.markup)
    if args.mixture is not None:
        return StochasticMarkupMechanism.mixture(*args.mixture)
    atoms = []
    for part in args.atoms.split(","):
        r, w = part.split(":")
        atoms.append((float(r), float(w)))
    return StochasticMarkupMechanism(tuple(atoms))


def cmd_revenue(args):
    mech = _mechanism(args)
    if args.triangle is not None:
        dist = TriangleDist(args.triangle)
        curve = dist.curve()
    elif args.quad is not None:
        dist = QuadrilateralDist(*args.quad)
        curve = dist.curve()
    else:
        curve = fbar_curve(FbarParams(*args.fbar))
        dist = curve
    report = approximation_ratio(mech, dist).to_dict()
    quad = 0.0
    for r, w in mech.atoms:
        quad += w * (spa_revenue(curve) if r == 1.0 else
                     markup_revenue_curve(r, curve, method="quadrature"))
    report["quadrature"] = quad
    if isinstance(dist, TriangleDist):
        report["closed_form"] = float(sum(
            w * (1.0 if r == 1.0 else markup_revenue_triangle(r, dist.qbar))
            for r, w in mech.atoms))
    if args.mc_samples:
        report["monte_carlo"] = mc_simulate(mech, dist, args.mc_samples, args.seed,
                                            threads=args.threads).to_dict()
    report["command"] = "revenue"
    _emit(args, report)
    return EXIT_OK


def cmd_gap(args):
    if args.mode == "triangle":
        rep = verify_gap_triangle(delta=args.delta or 0.00154)
    else:
        rep = verify_gap_regular(delta=args.delta or 5.21e-6)
    payload = {**rep.to_dict(), "command": "gap"}
    rows = [(e.name, e.bound, e.computed, e.margin, e.holds) for e in rep.ledger]
    _emit(args, payload, rows, ["name", "bound", "computed", "margin", "holds"])
    return EXIT_OK if rep.holds else EXIT_VERIFY


def _policy(args):
    if args.algo == "ftl":
        return FollowTheLeader()
    eta = args.eta if args.eta is not None else np.sqrt(8 * np.log(args.experts) / args.rounds)
    return RandomizedWeightedMajority(eta)


def cmd_experts(args):
    policy = _policy(args)
    if args.instance in ("alternating", "csv"):
        if args.instance == "alternating":
            m = alternating_instance(args.rounds, args.experts)
        else:
            with open(args.matrix, encoding="utf-8") as fh:
                m = RewardMatrix.from_csv(fh.read())
        payoff = run_policy(policy, m)
        best = bih(m)
        payload = {"command": "experts", "instance": args.instance, "algo": args.algo,
                   "n": m.n, "k": m.k, "payoff": payoff, "bih": best, "regret": best - payoff}
        cum = np.cumsum(m.rewards, axis=0).max(axis=1)
        rows = [(t + 1, run_policy(policy, RewardMatrix(m.rewards[: t + 1])), int(cum[t]))
                for t in range(m.n)] if args.format == "csv" else None
        _emit(args, payload, rows, ["round", "payoff", "bih"])
        return EXIT_OK
    means = BernoulliMeans(tuple(args.means))
    rounds = round_payoffs(policy, means, args.rounds)
    payload = {"command": "experts", "instance": "bernoulli", "algo": args.algo,
               "n": args.rounds, "k": means.k, "means": list(means.f),
               "expected_payoff": float(sum(rounds)), "round_payoffs": rounds,
               "opt": opt_learning(means, args.rounds)}
    status = EXIT_OK
    if means.non_degenerate and args.algo == "ftl":
        rep = gap_learning_check(means, args.rounds)
        payload["gap"] = rep.to_dict()
        status = EXIT_OK if rep.holds else EXIT_VERIFY
    rows = [(t + 1, p) for t, p in enumerate(rounds)]
    _emit(args, payload, rows, ["round", "expected_payoff"])
    return status


def cmd_explore(args):
    t = args.target
    if t == "anonymous":
        p = anon_truncation_params()
        check = verify_indifference(np.geomspace(1, 1e6, 61))
        payload = {"command": "explore", "target": t, **p.to_dict(),
                   "indifference_worst": check.worst, "indifference_holds": check.holds}
        _emit(args, payload)
        return EXIT_OK if check.holds else EXIT_VERIFY
    if t == "quadratic":
        res = quad_pricing_maxmin()
        payload = {"command": "explore", "target": t, **res.to_dict()}
        betas = np.linspace(0.5, 1.0, 51)
        rows = [(b, *quad_pricing_inner(b)) for b in betas] if args.format == "csv" else None
        _emit(args, payload, rows, ["beta", "min_alpha", "argmin_q"])
        return EXIT_OK
    if t == "fixed-q":
        qs = np.array([args.q]) if args.q is not None else np.linspace(0.01, 1.0, 100)
        T, a = series_T(qs), indifference_alpha_for_q(qs)
        payload = {"command": "explore", "target": t, "q": qs.tolist(), "T": T.tolist(),
                   "alpha": a.tolist()}
        _emit(args, payload, list(zip(qs, T, a)), ["q", "T", "alpha"])
        return EXIT_OK
    if t == "apx-curves":
        qs = np.linspace(0.0, 0.99, args.points)
        rows = [(q, 2.0 - q, apx_markup_opt(q, r_grid_eps=1e-3)[0]) for q in qs]
        payload = {"command": "explore", "target": t,
                   "q": [r[0] for r in rows], "apx_spa": [r[1] for r in rows],
                   "apx_markup": [r[2] for r in rows]}
        _emit(args, payload, rows, ["q", "apx_spa", "apx_markup"])
        return EXIT_OK
    qstar = args.q if args.q is not None else 0.0931057
    rs = np.linspace(1.01, 11.0, args.points)
    vals = triangle_markup(rs, qstar)
    payload = {"command": "explore", "target": t, "q": qstar, "r": rs.tolist(),
               "revenue": vals.tolist()}
    _emit(args, payload, list(zip(rs, vals)), ["r", "revenue"])
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="piopt", description=__doc__.splitlines()[0])
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (default: $PIOPT_THREADS or CPU count)")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--format", choices=["json", "csv"], default="json")
        sp.add_argument("--output", default=None, help="write to this path instead of stdout")

    s = sub.add_parser("solve", help="solve and certify the equilibrium")
    s.add_argument("--grid-eps", type=_positive, default=1e-6)
    s.add_argument("--r-max", type=_positive, default=11.0)
    common(s)
    s.set_defaults(func=cmd_solve)

    r = sub.add_parser("revenue", help="revenue of a mechanism on a distribution")
    d = r.add_mutually_exclusive_group(required=True)
    d.add_argument("--triangle", type=float, metavar="QBAR")
    d.add_argument("--quad", type=lambda s: _floats(s, 3), metavar="QBAR,QBAR2,R")
    d.add_argument("--fbar", type=lambda s: _floats(s, 4), metavar="Q1,Q2,D1,D2")
    m = r.add_mutually_exclusive_group(required=True)
    m.add_argument("--markup", type=float, metavar="R")
    m.add_argument("--spa", action="store_true")
    m.add_argument("--mixture", type=lambda s: _floats(s, 2), metavar="ALPHA,R")
    m.add_argument("--atoms", metavar="R:W,...")
    r.add_argument("--mc-samples", type=_count, default=None)
    r.add_argument("--seed", type=int, default=0)
    common(r)
    r.set_defaults(func=cmd_revenue)

    g = sub.add_parser("gap", help="replay a benchmark-gap ledger")
    g.add_argument("--mode", choices=["triangle", "regular"], required=True)
    g.add_argument("--delta", type=_positive, default=None)
    common(g)
    g.set_defaults(func=cmd_gap)

    e = sub.add_parser("experts", help="online learning with expert advice")
    e.add_argument("--instance", choices=["alternating", "bernoulli", "csv"], required=True)
    e.add_argument("--rounds", type=_count, default=10)
    e.add_argument("--experts", type=_count, default=2)
    e.add_argument("--algo", choices=["ftl", "rwm"], default="ftl")
    e.add_argument("--eta", type=_positive, default=None)
    e.add_argument("--means", type=_floats, default=None, metavar="F1,F2,...")
    e.add_argument("--matrix", default=None, help="CSV file of 0/1 rows")
    common(e)
    e.set_defaults(func=cmd_experts)

    x = sub.add_parser("explore", help="pricing explorations and plot data")
    x.add_argument("--target", required=True,
                   choices=["anonymous", "quadratic", "fixed-q", "apx-curves", "markup-curve"])
    x.add_argument("--q", type=float, default=None)
    x.add_argument("--points", type=_count, default=100)
    common(x)
    x.set_defaults(func=cmd_explore)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.threads is None and os.environ.get("PIOPT_THREADS"):
            args.threads = int(os.environ["PIOPT_THREADS"])
        if args.threads is not None and args.threads < 1:
            raise UsageError("--threads must be at least 1")
        if args.cmd == "experts":
            if args.instance == "bernoulli" and not args.means:
                raise UsageError("--means is required for the bernoulli instance")
            if args.instance == "csv" and not args.matrix:
                raise UsageError("--matrix is required for the csv instance")
        return args.func(args)
    except UsageError as exc:
        print(f"piopt: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, ConstraintError, SizeError, ValueError, OSError) as exc:
        print(f"piopt: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (CertificationError, BracketError) as exc:
        print(f"piopt: verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
