"""``epi-lab`` command line.

Every subcommand writes UTF-8 CSV or JSON with a fixed column/key order, so
identical command lines give byte-identical output.  Diagnostics (timing,
hypothesis failures) go to stderr.
"""

import argparse
import json
import sys
import time

import numpy as np

from .densities import DEFAULT_CONFIG, QuadratureConfig
from .entropy import epi_deficit
from .errors import EpiLabError
from .experiments import DEFAULT_EPS, DEFAULT_T_LIST, load_suite, run_bound_suite, run_counterexample, run_lemma_fuzz
from .specs import DensitySpec
from .transport import brenier_map_1d, w1_1d, w2_1d

__all__ = ["main", "build_parser"]


def _float_list(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _dims(text):
    lo, sep, hi = text.partition("..")
    try:
        pair = (int(lo), int(hi)) if sep else (int(lo), int(lo))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'a..b', got {text!r}") from None
    if not 1 <= pair[0] <= pair[1]:
        raise argparse.ArgumentTypeError("dimension range must satisfy 1 <= a <= b")
    return pair


def _spec(text):
    try:
        return DensitySpec.parse(text)
    except EpiLabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _config(args):
    grid = getattr(args, "grid", None)
    return DEFAULT_CONFIG if grid is None else QuadratureConfig(grid_points=grid)


def _emit(text, path=None):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def cmd_counterexample(args):
    start = time.perf_counter()
    result = run_counterexample(args.eps, args.t, _config(args))
    _emit(_json(result.to_dict()) if args.json else result.to_csv(), args.out)
    print(f"holder bound limit {result.holder_limit:.7f} at s = {result.holder_s_limit:.7f}; "
          f"wall time {time.perf_counter() - start:.2f} s", file=sys.stderr)
    return 0


def cmd_bounds(args):
    suite = load_suite(args.suite)
    result = run_bound_suite(suite["pairs"], args.t, _config(args), kind=suite["kind"])
    for err in result.errors:
        print(f"hypothesis failure: mu={err['mu']} nu={err['nu']} t={err['t']}: {err['error']}: {err['message']}",
              file=sys.stderr)
    for rep in result.failures():
        print(f"VIOLATED {rep['inequality']}: mu={rep['mu']} nu={rep['nu']} parameters={json.dumps(rep['parameters'])} "
              f"margin={rep['margin']!r}", file=sys.stderr)
    _emit(result.to_csv() if args.csv else result.to_json(), args.out)
    return result.exit_code


def cmd_deficit(args):
    cfg = _config(args)
    rep = epi_deficit(args.mu.build(), args.nu.build(), args.t, cfg)
    _emit(_json(dict(mu=str(args.mu), nu=str(args.nu), **rep.to_dict())))
    return 0


def cmd_lemma_fuzz(args):
    text = run_lemma_fuzz(args.trials, args.dims, args.seed, force_equal=args.force_equal)
    _emit(text, args.out)
    return 1 if json.loads(text)["violations"] else 0


def cmd_transport(args):
    cfg = _config(args)
    src, dst = args.src.build(), args.dst.build()
    tmap = brenier_map_1d(src, dst)
    u = (np.arange(args.points) + 0.5) / args.points
    x = np.asarray(src.quantile(u))
    xs, ts, ds = tmap.sample(x)
    summary = {
        "src": str(args.src),
        "dst": str(args.dst),
        "w2_sq": w2_1d(src, dst, cfg),
        "w1": w1_1d(src, dst, cfg),
        "points": args.points,
        "sup_derivative": float(np.max(ds)),
        "inf_derivative": float(np.min(ds)),
        "monotone": bool(np.all(np.diff(ts) >= 0)),
    }
    if args.dump_map:
        tmap.write_csv(args.dump_map, xs)
        summary["dump"] = args.dump_map
    _emit(_json(summary))
    return 0


def _pow2(text):
    n = int(text)
    if n < 2**10 or n & (n - 1):
        raise argparse.ArgumentTypeError("grid size must be a power of two >= 1024")
    return n


def build_parser():
    parser = argparse.ArgumentParser(prog="epi-lab", description="Numerical checks of entropy power inequality stability bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("counterexample", help="mixture sweep: deficit, curvature-region mass, Gaussian distance")
    p.add_argument("--eps", type=_float_list, default=list(DEFAULT_EPS))
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--grid", type=_pow2, default=None, help="convolution grid size (power of two)")
    p.add_argument("--out", default=None, help="write to this path instead of stdout")
    p.add_argument("--json", action="store_true", help="JSON instead of CSV")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("bounds", help="evaluate a bound suite; exit status 1 if any bound is violated")
    p.add_argument("--suite", default="default", help="suite name (default, gaussian, growth) or JSON file")
    p.add_argument("--t", type=_float_list, default=list(DEFAULT_T_LIST))
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="JSON array of reports (default)")
    fmt.add_argument("--csv", action="store_true", help="one CSV row per report")
    p.add_argument("--grid", type=_pow2, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("deficit", help="EPI deficit of a pair at one t")
    p.add_argument("--mu", type=_spec, required=True)
    p.add_argument("--nu", type=_spec, required=True)
    p.add_argument("--t", type=float, default=0.5)
    p.add_argument("--grid", type=_pow2, default=None)
    p.set_defaults(func=cmd_deficit)

    p = sub.add_parser("lemma-fuzz", help="seeded random check of the log-det inequality")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--dims", type=_dims, default=(2, 8), help="dimension range a..b")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force-equal", action="store_true", help="use A = B in every trial")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_lemma_fuzz)

    p = sub.add_parser("transport", help="monotone transport map between two densities")
    p.add_argument("--src", type=_spec, required=True)
    p.add_argument("--dst", type=_spec, required=True)
    p.add_argument("--points", type=int, default=1000, help="source-quantile sample points")
    p.add_argument("--dump-map", default=None, help="write x,T,dT CSV here")
    p.set_defaults(func=cmd_transport)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except EpiLabError as exc:
        print(f"epi-lab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
