"""The measurement-sweep experiment: recover a signal at many subsampling
levels with several Gabor analysis operators and compare relative errors.

For every sweep point K and repetition r, a fresh subsampled-identity
operator and noise draw are generated from RNG streams keyed by
(master_seed, K, r, lane) — so results are independent of execution order
and identical between serial and parallel runs. All windows in a repetition
share the same operator and noise (paired comparison): curve differences
reflect the analysis operators, not sampling luck.

Per window i the smoothing weight is mu_i = C * ||Phi_i x||_inf (an oracle
rule: it consults the ground-truth signal, as the experiment protocol
prescribes). The initial guess is either zero or A^T y. Errors aggregate to
median and quartiles across repetitions.

CSV schema (one row per window and sweep point):

    signal,window,L,a,b,K,rep_count,median_rel_err,q25,q75,seed

preceded by `#`-comment metadata lines (plan echo and median solver
iteration counts, which carry no acceptance weight). Floats use repr(), so
a fixed plan and seed yield byte-identical files.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import IOFailure
from .gabor import AnalysisOperator, GaborParams, WindowVector, make_window
from .sensing import NoiseModel, corrupt, sample_operator
from .signals import Signal
from .solver import SolveConfig, mu_from_rule, solve_analysis_l1
from .zauner import star_window

WINDOW_ORDER = ("gaussian", "hann", "hamming", "star")
PLOT_COLORS = {
    "gaussian": "red",
    "hann": "magenta",
    "hamming": "black",
    "star": "blue",
}
X0_RULES = ("zero", "adjoint_measurements")

CSV_HEADER = ["signal", "window", "L", "a", "b", "K", "rep_count",
              "median_rel_err", "q25", "q75", "seed"]


@dataclass(frozen=True)
class ExperimentPlan:
    signal: Signal
    params: GaborParams
    sweep_points: int = 20
    repetitions: int = 10
    sigma: float = 0.001
    mu_constant: float = 1.0
    x0_rule: str = "zero"
    windows: tuple[str, ...] = ("gaussian", "hann", "hamming", "star")
    master_seed: int = 0
    positive_frequency: bool = True
    eta_rule: str = "expected"
    theta: float = 0.0
    max_iterations: int = 5000

    def __post_init__(self):
        if len(self.signal) != self.params.L:
            raise ValueError(
                f"signal length {len(self.signal)} != L = {self.params.L}"
            )
        if not self.params.is_frame_capable:
            raise ValueError(
                f"(L,a,b) = ({self.params.L},{self.params.a},{self.params.b}) "
                "is not frame-capable (needs a*b < L)"
            )
        if self.sweep_points < 1 or self.repetitions < 1:
            raise ValueError("sweep_points and repetitions must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")
        if self.x0_rule not in X0_RULES:
            raise ValueError(f"x0_rule must be one of {X0_RULES}")
        bad = set(self.windows) - set(WINDOW_ORDER)
        if bad or not self.windows:
            raise ValueError(f"windows must be a nonempty subset of "
                             f"{WINDOW_ORDER}, got {self.windows}")
        if np.linalg.norm(self.signal.samples) == 0:
            raise ValueError("signal must have nonzero norm")


@dataclass(frozen=True)
class CurvePoint:
    K: int
    median: float
    q25: float
    q75: float


@dataclass
class ExperimentResult:
    signal_label: str
    L: int
    a: int
    b: int
    rep_count: int
    master_seed: int
    curves: dict[str, list[CurvePoint]]
    iteration_medians: dict[str, float] = field(default_factory=dict)
    interrupted: bool = False


def sweep_measurement_counts(L: int, points: int) -> np.ndarray:
    """Evenly spaced integers in [1, L] (duplicates after rounding merged)."""
    return np.unique(np.round(np.linspace(1, L, points)).astype(int))


def build_windows(plan: ExperimentPlan,
                  star: WindowVector | None = None) -> dict[str, WindowVector]:
    out: dict[str, WindowVector] = {}
    for kind in plan.windows:
        if kind == "star":
            out[kind] = star if star is not None else star_window(
                plan.params.L, theta=plan.theta, seed=0
            ).vector
        else:
            out[kind] = make_window(kind, plan.params.L)
    return out


def _sweep_point(plan: ExperimentPlan, operators: dict[str, AnalysisOperator],
                 mus: dict[str, float], K: int):
    """All repetitions at one measurement count; returns errors/iterations."""
    x = plan.signal.samples
    L = plan.params.L
    errors = {w: [] for w in plan.windows}
    iterations = {w: [] for w in plan.windows}
    x_norm = np.linalg.norm(x)
    for rep in range(plan.repetitions):
        A = sample_operator(L, K, seed=(plan.master_seed, K, rep, 0))
        noise = NoiseModel(plan.sigma, seed=(plan.master_seed, K, rep, 1))
        y, eta = corrupt(A.apply(x), noise, plan.eta_rule)
        if plan.x0_rule == "adjoint_measurements":
            x0 = A.adjoint_apply(y)
        else:
            x0 = np.zeros(L)
        for w in plan.windows:
            cfg = SolveConfig(mu=mus[w], x0=x0, eta=eta,
                              max_iterations=plan.max_iterations)
            res = solve_analysis_l1(operators[w], A, y, cfg)
            errors[w].append(float(np.linalg.norm(x - res.solution) / x_norm))
            iterations[w].append(res.iterations)
    return errors, iterations


def _sweep_point_task(args):
    plan, window_samples, mus, K = args
    windows = {k: WindowVector(v, k if k in WINDOW_ORDER else "custom")
               for k, v in window_samples.items()}
    operators = {
        k: AnalysisOperator(w, plan.params, plan.positive_frequency)
        for k, w in windows.items()
    }
    return K, _sweep_point(plan, operators, mus, K)


def run_experiment(plan: ExperimentPlan, star: WindowVector | None = None,
                   threads: int = 1) -> ExperimentResult:
    """Execute the full sweep; partial results survive a KeyboardInterrupt."""
    windows = build_windows(plan, star)
    operators = {
        k: AnalysisOperator(w, plan.params, plan.positive_frequency)
        for k, w in windows.items()
    }
    x = plan.signal.samples
    mus = {k: mu_from_rule(op, x, plan.mu_constant)
           for k, op in operators.items()}
    ks = sweep_measurement_counts(plan.params.L, plan.sweep_points)

    per_point: dict[int, tuple[dict, dict]] = {}
    interrupted = False
    try:
        if threads > 1:
            window_samples = {k: w.samples for k, w in windows.items()}
            tasks = [(plan, window_samples, mus, int(K)) for K in ks]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                for K, data in pool.map(_sweep_point_task, tasks):
                    per_point[K] = data
        else:
            for K in ks:
                per_point[int(K)] = _sweep_point(plan, operators, mus, int(K))
    except KeyboardInterrupt:
        interrupted = True

    curves: dict[str, list[CurvePoint]] = {w: [] for w in plan.windows}
    iters: dict[str, list[int]] = {w: [] for w in plan.windows}
    for K in sorted(per_point):
        errors, iterations = per_point[K]
        for w in plan.windows:
            q25, med, q75 = np.percentile(errors[w], [25, 50, 75])
            curves[w].append(CurvePoint(K, float(med), float(q25), float(q75)))
            iters[w].extend(iterations[w])
    iteration_medians = {
        w: float(np.median(v)) for w, v in iters.items() if v
    }
    return ExperimentResult(
        signal_label=plan.signal.label,
        L=plan.params.L, a=plan.params.a, b=plan.params.b,
        rep_count=plan.repetitions, master_seed=plan.master_seed,
        curves=curves, iteration_medians=iteration_medians,
        interrupted=interrupted,
    )


def _ordered_windows(curves: dict[str, list[CurvePoint]]) -> list[str]:
    return [w for w in WINDOW_ORDER if w in curves]


def write_result_csv(result: ExperimentResult, path) -> None:
    try:
        with open(path, "w", newline="") as fh:
            fh.write(
                f"# experiment signal={result.signal_label} L={result.L} "
                f"a={result.a} b={result.b} reps={result.rep_count} "
                f"seed={result.master_seed}\n"
            )
            iter_info = " ".join(
                f"{w}={result.iteration_medians[w]!r}"
                for w in _ordered_windows(result.curves)
                if w in result.iteration_medians
            )
            fh.write(f"# iterations_median {iter_info}\n")
            writer = csv.writer(fh)
            writer.writerow(CSV_HEADER)
            for w in _ordered_windows(result.curves):
                for pt in result.curves[w]:
                    writer.writerow([
                        result.signal_label, w, result.L, result.a, result.b,
                        pt.K, result.rep_count, repr(pt.median),
                        repr(pt.q25), repr(pt.q75), result.master_seed,
                    ])
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc


def read_result_csv(path) -> ExperimentResult:
    curves: dict[str, list[CurvePoint]] = {}
    iteration_medians: dict[str, float] = {}
    meta: dict[str, str] = {}
    with open(path, newline="") as fh:
        for line in fh:
            if line.startswith("# experiment"):
                for item in line[1:].strip().split()[1:]:
                    key, _, value = item.partition("=")
                    meta[key] = value
            elif line.startswith("# iterations_median"):
                for item in line[1:].strip().split()[1:]:
                    key, _, value = item.partition("=")
                    iteration_medians[key] = float(value)
            elif line.startswith("#") or line.startswith("signal,"):
                continue
            else:
                row = next(csv.reader([line]))
                window = row[1]
                curves.setdefault(window, []).append(CurvePoint(
                    int(row[5]), float(row[7]), float(row[8]), float(row[9])
                ))
    return ExperimentResult(
        signal_label=meta.get("signal", "?"),
        L=int(meta["L"]), a=int(meta["a"]), b=int(meta["b"]),
        rep_count=int(meta["reps"]), master_seed=int(meta["seed"]),
        curves=curves, iteration_medians=iteration_medians,
    )


def write_result_plot(result: ExperimentResult, path) -> None:
    """Relative-error curves vs K, log scale, fixed per-window colors."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    plt.rcParams["svg.hashsalt"] = "gaborcs"

    fig, ax = plt.subplots(figsize=(6, 4.2))
    for w in _ordered_windows(result.curves):
        pts = result.curves[w]
        ax.semilogy([p.K for p in pts], [max(p.median, 1e-16) for p in pts],
                    color=PLOT_COLORS[w], label=w)
    ax.set_xlabel("measurements K")
    ax.set_ylabel("median relative error")
    ax.set_title(
        f"{result.signal_label}  (L,a,b)=({result.L},{result.a},{result.b})"
    )
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    try:
        fig.savefig(path, metadata={"Date": None}
                    if str(path).endswith(".svg") else None)
    except OSError as exc:
        raise IOFailure(f"cannot write {path}: {exc}") from exc
    finally:
        plt.close(fig)


def emit(result: ExperimentResult, fmt: str, path) -> None:
    """Serialize a result; fmt is 'csv' or 'plot'."""
    if fmt == "csv":
        write_result_csv(result, path)
    elif fmt == "plot":
        write_result_plot(result, path)
    else:
        raise ValueError(f"format must be 'csv' or 'plot', got {fmt!r}")
