"""Command-line front door.

Subcommands compute bounds from JSON measure/spec files, run the
self-verification suites, or drive bandit experiments.  Results are
JSON on stdout (numbers at 9 significant digits unless --precision is
given); bandit traces are CSV.  Exit codes: 0 success, 1 verification
failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .bandit import POLICIES, BanditInstance, lower_bound_constant, run_experiment
from .cgf import cgf_bound, tail_bound_single
from .kinf import kinf
from .measures import DPSpec, WeightedValues
from .sums import SumSpec, optimal_split, region_radius, sum_tail_bound
from .verify import SUITES, run_suite

DEFAULT_SEED = int("D1R1CH", 36)  # fixed default stream: 789001361


def _fmt(x: float) -> float:
    return float(f"{x:.9g}")


def _round_floats(obj, full_precision: bool):
    if full_precision:
        return obj
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v, full_precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, full_precision) for v in obj]
    return obj


def _emit(result: dict, args) -> None:
    result = _round_floats(result, args.precision)
    if args.format == "csv":
        lines = ["key,value"]
        for k, v in result.items():
            if isinstance(v, (int, float, bool)) or v is None:
                lines.append(f"{k},{v}")
        print("\n".join(lines))
    else:
        print(json.dumps(result, indent=2))


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _measure(path: str) -> WeightedValues:
    return WeightedValues.from_dict(_load_json(path))


def _sum_spec(path: str) -> SumSpec:
    data = _load_json(path)
    return SumSpec(
        DPSpec(float(c["alpha"]), WeightedValues.from_dict(c["base"]))
        for c in data["components"]
    )


# -- subcommand handlers ----------------------------------------------------


def _cmd_kinf(args) -> int:
    res = kinf(_measure(args.measure), args.u)
    _emit(
        {
            "value": res.value,
            "lambda_star": res.lambda_star,
            "at_boundary": res.at_boundary,
            "diagnostic": res.diagnostic,
        },
        args,
    )
    return 0


def _cmd_bound(args) -> int:
    res = cgf_bound(DPSpec(args.alpha, _measure(args.measure)))
    _emit(
        {
            "value": res.value,
            "c_star": res.c_star,
            "boundary_mass": res.boundary_mass,
            "witness": res.witness.to_dict(),
        },
        args,
    )
    return 0


def _cmd_tail(args) -> int:
    value = tail_bound_single(DPSpec(args.alpha, _measure(args.measure)), args.u)
    _emit({"value": value}, args)
    return 0


def _cmd_region(args) -> int:
    res = region_radius(_sum_spec(args.spec), args.delta)
    _emit(
        {
            "radius": res.radius,
            "lambda_star": res.lambda_star,
            "unconstrained": res.unconstrained,
            "witnesses": [w.to_dict() for w in res.witnesses],
        },
        args,
    )
    return 0


def _cmd_sumtail(args) -> int:
    spec = _sum_spec(args.spec)
    out = {"value": sum_tail_bound(spec, args.u)}
    lo = sum(c.base.mean for c in spec.components)
    hi = sum(c.base.v_max for c in spec.components)
    if lo <= args.u <= hi:
        out["split"] = optimal_split(spec, args.u)
    _emit(out, args)
    return 0


def _cmd_verify(args) -> int:
    if args.tol is not None and args.tol <= 0:
        raise ValueError("--tol must be positive")
    if args.samples is not None and args.samples < 1:
        raise ValueError("--samples must be >= 1")
    report = run_suite(args.suite, seed=args.seed, samples=args.samples, tol=args.tol)
    _emit(report, args)
    return 0 if report["passed"] else 1


def _cmd_bandit(args) -> int:
    instance = BanditInstance.from_dict(_load_json(args.instance))
    traces = run_experiment(instance, args.policy, args.T, args.reps, args.seed)
    if args.trace:
        rows = ["rep,t,action,cum_regret"]
        for rep, tr in enumerate(traces):
            for t in range(len(tr.actions)):
                rows.append(
                    f"{rep},{t + 1},{int(tr.actions[t])},{_fmt(float(tr.cum_regret[t]))}"
                )
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write("\n".join(rows) + "\n")
    mean_rt = float(sum(tr.cum_regret[-1] for tr in traces)) / len(traces)
    rt_over_logt = mean_rt / math.log(args.T) if args.T > 1 else math.inf
    try:
        constant = lower_bound_constant(instance)
        ratio = rt_over_logt / constant
    except ValueError:
        constant, ratio = None, None
    _emit(
        {
            "policy": args.policy,
            "T": args.T,
            "reps": args.reps,
            "seed": args.seed,
            "mean_RT": mean_rt,
            "RT_over_logT": rt_over_logt,
            "lower_bound_constant": constant,
            "ratio": ratio,
        },
        args,
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpconc",
        description="Concentration bounds, samplers and bandit experiments "
        "for Dirichlet-process payoffs.",
    )
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="RNG seed")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument(
        "--precision", action="store_true", help="print full double precision"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("kinf", help="half-space projection of a measure")
    p.add_argument("measure")
    p.add_argument("-u", type=float, required=True)
    p.set_defaults(handler=_cmd_kinf)

    p = sub.add_parser("bound", help="conjugate log-MGF bound")
    p.add_argument("measure")
    p.add_argument("--alpha", type=float, required=True)
    p.set_defaults(handler=_cmd_bound)

    p = sub.add_parser("tail", help="single-process Chernoff tail bound")
    p.add_argument("measure")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("-u", type=float, required=True)
    p.set_defaults(handler=_cmd_tail)

    p = sub.add_parser("region", help="confidence-region radius for a sum")
    p.add_argument("spec")
    p.add_argument("--delta", type=float, required=True)
    p.set_defaults(handler=_cmd_region)

    p = sub.add_parser("sumtail", help="tail bound for a sum of processes")
    p.add_argument("spec")
    p.add_argument("-u", type=float, required=True)
    p.set_defaults(handler=_cmd_sumtail)

    p = sub.add_parser("verify", help="run a self-verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("bandit", help="run a semi-bandit experiment")
    p.add_argument("instance")
    p.add_argument("--policy", choices=POLICIES, required=True)
    p.add_argument("-T", type=int, required=True)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--trace", default=None, help="write the trace CSV here")
    p.set_defaults(handler=_cmd_bandit)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (ValueError, KeyError, TypeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
