"""Command-line interface: ``isentropes {entropy,sweep,compare,oracle}``.

Entropies are reported in nats.  Exit codes: 0 success, 1 usage error,
2 computation failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from isentropes import __version__, kneading, oracles
from isentropes.lap_entropy import InternalConsistencyError, entropy, lap_numbers
from isentropes.maps import Family, MapError, QuarticParams, Shape, make_map, quartic
from isentropes.sweep import GridSpec, run_sweep, write_results

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILURE = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; usage errors here are 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(v) for v in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    return lo, hi


def _add_map_flags(p):
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--a", type=float, help="tent/logistic parameter, or inner sawtooth slope")
    p.add_argument("--b", type=float, help="outer sawtooth slope")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--shape", choices=["positive", "negative"])
    p.add_argument("--lambda", dest="lam", type=float, help="inner quartic factor q_lambda")
    p.add_argument("--mu", type=float, help="outer quartic factor q_mu")


def _require(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--lambda" if n == "lam" else f"--{n}" for n in missing)
        raise UsageError(f"family {args.family} needs {flags}")
    return [getattr(args, n) for n in names]


def build_map(args):
    family = Family(args.family)
    if family in (Family.LOGISTIC, Family.TENT):
        params = _require(args, "a")
    elif family is Family.SAWTOOTH:
        params = _require(args, "a", "b")
    elif family is Family.QUARTIC:
        params = _require(args, "lam", "mu")
    else:
        params = _require(args, "alpha", "beta")
    shape = Shape.POSITIVE if args.shape == "positive" else Shape.NEGATIVE if args.shape else None
    try:
        return make_map(family, *params, shape=shape)
    except MapError as exc:
        raise UsageError(str(exc)) from None


def _print_estimate(fmap, algorithm, est):
    print(f"map: {fmap}")
    print(f"algorithm: {algorithm}")
    print(f"entropy: {est.value:.9g}")
    print(f"iterations: {est.iterations}")
    print(f"termination: {est.termination.value}")
    if est.bounds is not None:
        print(f"bounds: {est.bounds[0]:.9g} {est.bounds[1]:.9g}")


def cmd_entropy(args) -> int:
    fmap = build_map(args)
    if args.algorithm == "kneading":
        if fmap.family is Family.QUARTIC:
            est = kneading.radulescu_entropy(QuarticParams(*fmap.params), args.epsilon)
        elif fmap.family is Family.SAWTOOTH:
            est = kneading.sawtooth_kneading_entropy(*fmap.params, epsilon=args.epsilon)
        else:
            raise UsageError("the kneading algorithm needs --family quartic or sawtooth")
    else:
        try:
            est = entropy(fmap, args.epsilon, args.n_max, estimator=args.estimator, n_min=args.n_min)
        except InternalConsistencyError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_FAILURE
    _print_estimate(fmap, args.algorithm, est)
    return EXIT_OK if est.converged else EXIT_FAILURE


def cmd_sweep(args) -> int:
    try:
        spec = GridSpec(
            family=args.family,
            resolution=args.resolution,
            algorithm=args.algorithm,
            epsilon=args.epsilon,
            n_max=args.n_max,
            range1=args.alpha_range or args.lambda_range,
            range2=args.beta_range or args.mu_range,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out_dir = os.path.dirname(os.path.abspath(args.output))
    if not os.path.isdir(out_dir) or not os.access(out_dir, os.W_OK):
        raise UsageError(f"cannot write {args.output}")
    results, summary = run_sweep(spec, args.workers)
    try:
        write_results(spec, results, args.output, args.format)
    except OSError as exc:
        raise UsageError(f"cannot write {args.output}: {exc}") from None
    print(summary.line())
    return EXIT_OK


def _parse_point(text: str) -> tuple[float, float]:
    try:
        lam, mu = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lambda,mu, got {text!r}") from None
    return lam, mu


def cmd_compare(args) -> int:
    rng = np.random.default_rng(args.seed)
    points = list(args.point or []) + [tuple(p) for p in rng.uniform(0.0, 4.0, (args.samples, 2))]
    for lam, mu in points:
        if not (0 <= lam <= 4 and 0 <= mu <= 4):
            raise UsageError(f"quartic parameters must lie in [0, 4], got ({lam}, {mu})")
    print("lambda mu lap kneading delta lap_iterations kneading_iterations")
    deltas, deltas_pos, t_lap, t_kn = [], [], 0.0, 0.0
    for lam, mu in points:
        t0 = time.perf_counter()
        lap = entropy(quartic(lam, mu), args.epsilon, args.n_max)
        t1 = time.perf_counter()
        kn = kneading.radulescu_entropy(QuarticParams(lam, mu), args.epsilon)
        t2 = time.perf_counter()
        t_lap += t1 - t0
        t_kn += t2 - t1
        delta = abs(lap.value - kn.value)
        deltas.append(delta)
        if lap.converged and kn.converged and min(lap.value, kn.value) > 0.05:
            deltas_pos.append(delta)
        print(
            f"{lam:.9g} {mu:.9g} {lap.value:.9g} {kn.value:.9g} {delta:.3g} "
            f"{lap.iterations} {kn.iterations}"
        )
    n = len(points)
    if n:
        print(
            f"samples={n} max_delta={max(deltas):.3g} "
            f"max_delta_positive={max(deltas_pos) if deltas_pos else math.nan:.3g} "
            f"mean_seconds_lap={t_lap / n:.3g} mean_seconds_kneading={t_kn / n:.3g}"
        )
    else:
        print("samples=0")
    return EXIT_OK


def _parse_matrix(text: str):
    try:
        return np.array([[float(v) for v in row.split(",")] for row in text.split(";")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected rows like '0,1;1,1', got {text!r}") from None


def cmd_oracle(args) -> int:
    try:
        if args.oracle == "markov":
            if (args.builtin is None) == (args.matrix is None):
                raise UsageError("give exactly one of --builtin or --matrix")
            m = oracles.BUILTIN_MARKOV[args.builtin] if args.builtin else oracles.TransitionMatrix(args.matrix)
            rho = oracles.spectral_radius(m, args.tol)
            print(f"spectral_radius: {rho:.9g}")
            print(f"entropy: {math.log(rho) if rho > 1 else 0.0:.9g}")
            return EXIT_OK
        fmap = build_map(args)
        if args.n < 1:
            raise UsageError("--n must be at least 1")
        if args.oracle == "laps":
            count = oracles.brute_force_laps(fmap, args.n).lap_count
            print(f"brute_force: {count}")
            print(f"recursion: {lap_numbers(fmap, args.n)[-1]}")
        else:
            count = oracles.periodic_point_count(fmap, args.n)
            print(f"periodic_points: {count}")
            print(f"growth: {math.log(count) / args.n:.9g}")
            print(f"entropy: {entropy(fmap).value:.9g}")
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    except (oracles.LapCountError, oracles.ConvergenceError, InternalConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="isentropes",
        description="Topological entropy of multimodal interval maps (values in nats).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("entropy", help="entropy of a single map")
    _add_map_flags(p)
    p.add_argument("--algorithm", choices=["lap", "kneading"], default="lap")
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--n-max", type=int, default=2000)
    p.add_argument("--estimator", choices=["secant", "mean"], default="secant",
                   help="lap algorithm only: how the value is read off log l(f^n)")
    p.add_argument("--n-min", type=int, default=16, help="lap algorithm only: earliest stopping step")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("sweep", help="entropy over a parameter grid")
    p.add_argument("--family", required=True, choices=["quartic", "cubic-positive", "cubic-negative"])
    p.add_argument("--resolution", type=int, default=151)
    p.add_argument("--algorithm", choices=["lap", "kneading"], default="lap")
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--n-max", type=int, default=2000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--output", required=True)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--alpha-range", type=_range, metavar="LO:HI")
    p.add_argument("--beta-range", type=_range, metavar="LO:HI")
    p.add_argument("--lambda-range", type=_range, metavar="LO:HI")
    p.add_argument("--mu-range", type=_range, metavar="LO:HI")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("compare", help="lap vs kneading on random quartics")
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--point", type=_parse_point, action="append", metavar="LAMBDA,MU",
                   help="extra (lambda, mu) to include; repeatable")
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--n-max", type=int, default=2000)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("oracle", help="independent checks")
    osub = p.add_subparsers(dest="oracle", required=True, parser_class=_Parser)
    for name, text in (("laps", "brute-force lap count of f^n"), ("fixpoints", "number of solutions of f^n(x) = x")):
        q = osub.add_parser(name, help=text)
        _add_map_flags(q)
        q.add_argument("--n", type=int, required=True)
        q.set_defaults(func=cmd_oracle)
    q = osub.add_parser("markov", help="spectral radius of a transition matrix")
    q.add_argument("--builtin", choices=sorted(oracles.BUILTIN_MARKOV))
    q.add_argument("--matrix", type=_parse_matrix, help="rows separated by ';', e.g. '0,1;1,1'")
    q.add_argument("--tol", type=float, default=1e-12)
    q.set_defaults(func=cmd_oracle)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"isentropes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
