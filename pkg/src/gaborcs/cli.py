"""Command-line interface.

Subcommands: admissible, window, dgt, spark, solve, experiment. Usage
errors exit 2 (argparse); computational failures print one diagnostic line
and exit 1; success exits 0. All randomness is seeded, so identical flags
produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import os
import sys
from math import comb

import numpy as np

from . import csvio
from .errors import GaborCSError
from .gabor import AnalysisOperator, GaborParams, dgt, frame_matrix, make_window
from .harness import (ExperimentPlan, run_experiment, write_result_csv,
                      write_result_plot)
from .modring import factorize, largest_admissible_at_most
from .sensing import NoiseModel, corrupt, sample_operator
from .signals import SYNTHETIC_KINDS, load_audio, make_synthetic
from .solver import SolveConfig, mu_from_rule, solve_analysis_l1
from .spark import (DEFAULT_RANK_TOLERANCE, _EXHAUSTIVE_GUARD,
                    deficiency_witness_search, spark_exhaustive)
from .zauner import star_window

# (L, a, b), mu constant C, initial-guess rule per benchmark signal
PRESETS = {
    "cusp":   ("cusp", 33, 1, 11, 1.0, "zero"),
    "ramp":   ("ramp", 33, 1, 11, 1.0, "zero"),
    "sing":   ("sing", 45, 1, 9, 1.0, "zero"),
    "si1899": (None, 20349, 19, 21, 0.1, "adjoint_measurements"),
    "si1948": (None, 27531, 19, 23, 0.1, "adjoint_measurements"),
    "si2141": (None, 41769, 21, 17, 0.1, "adjoint_measurements"),
    "sx5":    (None, 23205, 17, 13, 0.1, "adjoint_measurements"),
    "sx224":  (None, 24633, 23, 21, 0.1, "adjoint_measurements"),
    "si1716": (None, 24633, 23, 21, 1.0, "adjoint_measurements"),
}

WINDOW_CHOICES = ("gaussian", "hann", "hamming", "star")


def _default_threads() -> int:
    try:
        return max(1, int(os.environ.get("GABORCS_THREADS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gaborcs",
        description="Gabor-frame analysis operators for compressed sensing "
                    "recovery experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("admissible",
                       help="largest admissible ambient dimension <= n")
    p.add_argument("n", type=int)
    p.add_argument("--strict", action="store_true",
                   help="require square-free L as well (default: odd and "
                        "divisible by 3 only)")
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("window", help="generate a window and save it as CSV")
    p.add_argument("--kind", choices=WINDOW_CHOICES, required=True)
    p.add_argument("--L", type=int, required=True, help="ambient dimension")
    p.add_argument("--theta", type=float, default=0.0,
                   help="phase of the star unitary (default 0)")
    p.add_argument("--seed", type=int, default=0,
                   help="eigenvector start seed for star (default 0)")
    p.add_argument("--out", required=True, help="output CSV (real,imag)")
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("dgt", help="apply the analysis transform to a signal")
    p.add_argument("--window", help="window CSV from the window subcommand")
    p.add_argument("--kind", choices=WINDOW_CHOICES,
                   help="named window instead of --window")
    p.add_argument("--L", type=int, help="dimension (required with --kind)")
    p.add_argument("--a", type=int, required=True, help="time step")
    p.add_argument("--b", type=int, required=True, help="frequency step")
    p.add_argument("--in", dest="infile", required=True, help="signal CSV")
    p.add_argument("--out", required=True, help="coefficient CSV (m,n,real,imag)")
    p.add_argument("--positive-frequencies", action="store_true",
                   help="keep rows m = 0..floor(M/2), sqrt(2)-weighted")
    p.set_defaults(func=cmd_dgt)

    p = sub.add_parser("spark", help="spark analysis of a Gabor frame")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--window", choices=WINDOW_CHOICES, default="star")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tolerance", type=float, default=DEFAULT_RANK_TOLERANCE,
                   help=f"numerical rank tolerance (default {DEFAULT_RANK_TOLERANCE})")
    p.add_argument("--trials", type=int, default=2000,
                   help="random subsets when exhaustion is infeasible "
                        "(default 2000)")
    p.add_argument("--subset-size", type=int, default=None,
                   help="subset size for the randomized search (default L)")
    p.add_argument("--json", help="also write the report as JSON")
    p.set_defaults(func=cmd_spark)

    p = sub.add_parser("solve", help="one recovery instance")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--signal", choices=SYNTHETIC_KINDS)
    src.add_argument("--audio", help="mono WAV file")
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--offset", type=int, default=0,
                   help="first audio sample to keep (default 0)")
    p.add_argument("--window", choices=WINDOW_CHOICES, default="star")
    p.add_argument("--K", type=int, required=True, help="measurement count")
    p.add_argument("--sigma", type=float, default=0.001,
                   help="noise std (default 0.001)")
    p.add_argument("--C", type=float, default=1.0,
                   help="mu rule constant, mu = C*||Phi x||_inf (default 1)")
    p.add_argument("--x0", choices=("zero", "adjoint_measurements"),
                   default="zero", help="initial guess rule (default zero)")
    p.add_argument("--eta-rule", choices=("expected", "exact"),
                   default="expected",
                   help="constraint radius: sigma*sqrt(K) or ||e||_2 "
                        "(default expected)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--max-iterations", type=int, default=5000)
    p.add_argument("--full-frequencies", action="store_true",
                   help="use all M modulation rows instead of the "
                        "positive-frequency half")
    p.add_argument("--out", help="write the recovered signal as CSV")
    p.add_argument("--log", help="write the solver iteration log")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("experiment",
                       help="full relative-error-vs-measurements sweep")
    p.add_argument("--preset", choices=sorted(PRESETS),
                   help="benchmark row: sets (L,a,b), C and the x0 rule")
    p.add_argument("--signal", choices=SYNTHETIC_KINDS)
    p.add_argument("--audio", help="mono WAV file")
    p.add_argument("--offset", type=int, default=0)
    p.add_argument("--L", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--points", type=int, default=20,
                   help="sweep points in [1, L] (default 20; the full-scale "
                        "protocol uses 1000)")
    p.add_argument("--reps", type=int, default=10,
                   help="noise/subsampling repetitions per point (default 10)")
    p.add_argument("--sigma", type=float, default=0.001,
                   help="noise std (default 0.001)")
    p.add_argument("--C", type=float, default=None,
                   help="mu rule constant (default 1, or the preset's value)")
    p.add_argument("--x0", choices=("zero", "adjoint_measurements"),
                   default=None, help="initial guess rule (default zero, or "
                                      "the preset's value)")
    p.add_argument("--windows", default="gaussian,hann,hamming,star",
                   help="comma-separated subset (default all four)")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--theta", type=float, default=0.0)
    p.add_argument("--star-window",
                   help="reuse a precomputed star window CSV")
    p.add_argument("--eta-rule", choices=("expected", "exact"),
                   default="expected")
    p.add_argument("--max-iterations", type=int, default=5000)
    p.add_argument("--full-frequencies", action="store_true")
    p.add_argument("--threads", type=int, default=_default_threads(),
                   help="parallel sweep workers (default $GABORCS_THREADS or 1)")
    p.add_argument("--out-csv", required=True)
    p.add_argument("--out-plot", help="also render the curves (svg/pdf/png)")
    p.set_defaults(func=cmd_experiment)

    return parser


def cmd_admissible(args) -> int:
    mode = "strict" if args.strict else "paper"
    L = largest_admissible_at_most(args.n, mode)
    print(f"{L} = {factorize(L)}")
    return 0


def cmd_window(args) -> int:
    if args.kind == "star":
        sw = star_window(args.L, theta=args.theta, seed=args.seed)
        window = sw.vector
        print(f"star window at L={args.L}: eigenvalue {sw.eigenvalue:.12f}, "
              f"residual {sw.residual:.3e}")
    else:
        window = make_window(args.kind, args.L)
    csvio.save_window_csv(args.out, window)
    print(f"wrote {args.out}")
    return 0


def cmd_dgt(args) -> int:
    if args.window:
        window = csvio.load_window_csv(args.window)
    elif args.kind and args.L:
        window = (star_window(args.L).vector if args.kind == "star"
                  else make_window(args.kind, args.L))
    else:
        print("error: need --window, or --kind with --L", file=sys.stderr)
        return 2
    params = GaborParams(len(window), args.a, args.b)
    op = AnalysisOperator(window, params,
                          positive_frequency_mode=args.positive_frequencies)
    x = csvio.load_signal_csv(args.infile)
    coeffs = dgt(op, x)
    csvio.save_coefficients_csv(args.out, coeffs)
    print(f"wrote {args.out} ({coeffs.values.shape[0]}x{coeffs.values.shape[1]} "
          "coefficients)")
    return 0


def cmd_spark(args) -> int:
    params = GaborParams(args.L, args.a, args.b)
    if args.window == "star":
        window = star_window(args.L, theta=args.theta, seed=args.seed).vector
    else:
        window = make_window(args.window, args.L)
    op = AnalysisOperator(window, params)
    P = op.n_rows
    if comb(P, min(args.L, P)) <= _EXHAUSTIVE_GUARD:
        report = spark_exhaustive(frame_matrix(op), args.tolerance)
    else:
        size = args.subset_size if args.subset_size is not None else args.L
        report = deficiency_witness_search(
            op, trials=args.trials, subset_size=size,
            seed=args.seed, rank_tolerance=args.tolerance,
        )
    print(report.to_text())
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(report.to_json() + "\n")
        print(f"wrote {args.json}")
    return 0


def _load_signal(args):
    if getattr(args, "signal", None):
        return make_synthetic(args.signal, args.L)
    return load_audio(args.audio, mode="explicit_L", L=args.L,
                      offset=args.offset)


def cmd_solve(args) -> int:
    signal = _load_signal(args)
    params = GaborParams(args.L, args.a, args.b)
    if args.window == "star":
        window = star_window(args.L, theta=args.theta).vector
    else:
        window = make_window(args.window, args.L)
    op = AnalysisOperator(window, params,
                          positive_frequency_mode=not args.full_frequencies)
    x = signal.samples
    A = sample_operator(args.L, args.K, seed=(args.seed, args.K, 0, 0))
    noise = NoiseModel(args.sigma, seed=(args.seed, args.K, 0, 1))
    y, eta = corrupt(A.apply(x), noise, args.eta_rule)
    x0 = A.adjoint_apply(y) if args.x0 == "adjoint_measurements" else None
    cfg = SolveConfig(
        mu=mu_from_rule(op, x, args.C), x0=x0, eta=eta,
        max_iterations=args.max_iterations,
        log_every=1 if args.log else 0,
    )
    res = solve_analysis_l1(op, A, y, cfg)
    rel = np.linalg.norm(x - res.solution) / np.linalg.norm(x)
    print(f"relative error {rel:.6e} after {res.iterations} iterations "
          f"(converged={res.converged}, objective={res.objective:.6e}, "
          f"slack={res.constraint_slack:.3e})")
    if args.out:
        csvio.save_signal_csv(args.out, res.solution)
        print(f"wrote {args.out}")
    if args.log:
        with open(args.log, "w") as fh:
            res.dump_log(fh)
        print(f"wrote {args.log}")
    return 0


def cmd_experiment(args) -> int:
    preset_signal = None
    C, x0_rule = args.C, args.x0
    if args.preset:
        preset_signal, L, a, b, preset_c, preset_x0 = PRESETS[args.preset]
        args.L = args.L or L
        args.a = args.a or a
        args.b = args.b or b
        C = C if C is not None else preset_c
        x0_rule = x0_rule if x0_rule is not None else preset_x0
        if preset_signal and not (args.signal or args.audio):
            args.signal = preset_signal
    if C is None:
        C = 1.0
    if x0_rule is None:
        x0_rule = "zero"
    if args.L is None or args.a is None or args.b is None:
        print("error: need --L, --a, --b (or --preset)", file=sys.stderr)
        return 2
    if not (args.signal or args.audio):
        print("error: need --signal, --audio, or a synthetic --preset",
              file=sys.stderr)
        return 2
    signal = _load_signal(args)
    plan = ExperimentPlan(
        signal=signal,
        params=GaborParams(args.L, args.a, args.b),
        sweep_points=args.points,
        repetitions=args.reps,
        sigma=args.sigma,
        mu_constant=C,
        x0_rule=x0_rule,
        windows=tuple(w.strip() for w in args.windows.split(",") if w.strip()),
        master_seed=args.seed,
        positive_frequency=not args.full_frequencies,
        eta_rule=args.eta_rule,
        theta=args.theta,
        max_iterations=args.max_iterations,
    )
    star = (csvio.load_window_csv(args.star_window, "star")
            if args.star_window else None)
    result = run_experiment(plan, star=star, threads=args.threads)
    write_result_csv(result, args.out_csv)
    print(f"wrote {args.out_csv}")
    if args.out_plot:
        write_result_plot(result, args.out_plot)
        print(f"wrote {args.out_plot}")
    if result.interrupted:
        print("note: interrupted; partial results written", file=sys.stderr)
    for w, pts in result.curves.items():
        if pts:
            print(f"  {w}: median error {pts[-1].median:.3e} at K={pts[-1].K}")
    return 0


def dispatch(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GaborCSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
