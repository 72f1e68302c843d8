"""Seeded trial runner and the parameter sweeps.

Each trial gets its own seed derived from ``(master seed, cell index,
trial index)``, so a sweep gives the same rows whether it runs serially
or on a process pool.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .density1d import DensityModel, Family, InadmissibleBandError, band_stats
from .estimator import AlphaConfig
from .margin import DEFAULT_MIN_SIDE_FRACTION, recover
from .oracle import (
    ExponentialLaw,
    LemmaReport,
    S,
    band_for_mass,
    count_sign_changes,
    exp_H_positivity,
    F,
    mr_monotonicity,
    symmetric_band_for_mass,
)
from .plots import heatmap_svg, line_svg
from .sampler import AffineMode, MarginInstance, generate, make_instance

__all__ = [
    "SweepConfig",
    "TrialRecord",
    "SweepResult",
    "trial_seed",
    "run_trial",
    "run_cell",
    "sweep_grid",
    "sweep_dimension",
    "sweep_epsilon",
    "compare_mean_cov",
    "verify_lemmas",
    "write_records",
    "records_to_csv",
    "median_by",
]


@dataclass(frozen=True)
class SweepConfig:
    family: str = "gaussian"
    a: float = -0.5
    b: float = 0.5
    d: int = 10
    N: int = 200_000
    trials: int = 5
    seed: int = 0
    alpha1: float = -0.1
    alpha2: float = -0.2
    alpha3: float = -0.1
    affine_mode: str = "random"
    kappa_max: float = 10.0
    shift_scale: float = 1.0
    min_side_fraction: float = DEFAULT_MIN_SIDE_FRACTION
    epsilon: float = 0.001
    out: str | None = None
    # sweep axes
    grid_lo: float | None = None
    grid_hi: float | None = None
    grid_step: float = 0.25
    dims: tuple = (5, 10, 20, 40)
    masses: tuple = (0.05, 0.1, 0.2, 0.3, 0.4)
    centers: tuple = (0.0, -0.5, 0.5, -1.0, 1.0)
    bands: tuple | None = None  # None: family default, see band_set()
    a_fixed: float | None = None
    b_values: tuple | None = None
    workers: int = 1
    timing: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        Family(self.family)
        AffineMode(self.affine_mode)
        self.alphas  # validates the weights

    @property
    def alphas(self) -> AlphaConfig:
        return AlphaConfig(self.alpha1, self.alpha2, self.alpha3)

    @property
    def model(self) -> DensityModel:
        return DensityModel(self.family)

    def grid_range(self) -> tuple[float, float]:
        default = (-1.5, 1.5) if self.family == "uniform" else (-3.0, 3.0)
        lo = default[0] if self.grid_lo is None else self.grid_lo
        hi = default[1] if self.grid_hi is None else self.grid_hi
        return lo, hi

    def band_set(self) -> tuple:
        """Bands pooled by the dimension sweep."""
        if self.bands is not None:
            return tuple(self.bands)
        if self.family == "uniform":
            return ((-0.4, 0.4), (-0.8, 0.2), (-0.6, 0.6), (0.1, 0.8))
        return ((-0.5, 0.5), (-1.0, 0.5), (-2.0, 0.5), (0.25, 1.25))

    def compare_axis(self) -> tuple[float, list[float]]:
        if self.family == "uniform":
            a = -0.5 if self.a_fixed is None else self.a_fixed
            default = np.arange(-0.4, 0.9 + 1e-9, 0.1)
        else:
            a = -2.0 if self.a_fixed is None else self.a_fixed
            default = np.arange(-1.9, 4.0 + 1e-9, 0.1)
        bs = default if self.b_values is None else self.b_values
        return a, [round(float(b), 10) for b in bs]


@dataclass(frozen=True)
class TrialRecord:
    family: str
    a: float
    b: float
    d: int
    N: int
    alpha1: float
    alpha2: float
    alpha3: float
    affine_mode: str
    seed: int
    sin_theta_mean1: float = math.nan
    sin_theta_mean2: float = math.nan
    sin_theta_cov: float = math.nan
    sin_theta_selected: float = math.nan
    selected_kind: str = ""
    margin_width_mean1: float = math.nan
    margin_width_mean2: float = math.nan
    margin_width_cov: float = math.nan
    elapsed_ms: float = 0.0
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def sin_theta_best_mean(self) -> float:
        return min(self.sin_theta_mean1, self.sin_theta_mean2)


TRIAL_FIELDS = tuple(f.name for f in fields(TrialRecord))


def trial_seed(master: int, cell: int, trial: int) -> int:
    ss = np.random.SeedSequence([int(master), int(cell), int(trial)])
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def _base_record(cfg: SweepConfig, a, b, d, seed) -> dict:
    return dict(
        family=cfg.family, a=float(a), b=float(b), d=int(d), N=int(cfg.N),
        alpha1=cfg.alpha1, alpha2=cfg.alpha2, alpha3=cfg.alpha3,
        affine_mode=cfg.affine_mode, seed=int(seed),
    )


def run_trial(instance: MarginInstance, N: int, cfg: SweepConfig, seed: int) -> TrialRecord:
    """Generate, recover and score one dataset."""
    base = _base_record(replace(cfg, N=N), instance.band.a, instance.band.b, instance.d, seed)
    base["affine_mode"] = instance.affine_mode.value
    base["family"] = instance.model.family.value
    t0 = time.perf_counter()
    try:
        data = generate(instance, N, seed)
        res = recover(data.X, cfg.alphas, cfg.min_side_fraction)
        normal = res.whitener.normal_to_whitened(instance.normal_in_input_coords())
        sins = res.sin_thetas(normal)
        widths = [math.nan if r is None else r.width for r in res.reports]
    except Exception as exc:  # recorded, not raised: one bad trial must not kill a sweep
        return TrialRecord(**base, status=f"failed: {type(exc).__name__}: {exc}")
    elapsed = (time.perf_counter() - t0) * 1e3 if cfg.timing else 0.0
    return TrialRecord(
        **base,
        sin_theta_mean1=sins[0],
        sin_theta_mean2=sins[1],
        sin_theta_cov=sins[2],
        sin_theta_selected=sins[res.selected],
        selected_kind=res.selected_kind,
        margin_width_mean1=widths[0],
        margin_width_mean2=widths[1],
        margin_width_cov=widths[2],
        elapsed_ms=elapsed,
    )


def run_cell(cfg: SweepConfig, a: float, b: float, d: int, seed: int) -> TrialRecord:
    """Build a fresh instance from ``seed`` and run one trial on it."""
    try:
        inst = make_instance(
            cfg.model, a, b, d, cfg.epsilon, cfg.affine_mode,
            np.random.default_rng(np.random.SeedSequence([seed, 1])),
            kappa_max=cfg.kappa_max, shift_scale=cfg.shift_scale,
        )
    except InadmissibleBandError:
        return TrialRecord(**_base_record(cfg, a, b, d, seed), status="skipped: epsilon-check")
    except ValueError as exc:
        return TrialRecord(**_base_record(cfg, a, b, d, seed), status=f"skipped: {exc}")
    return run_trial(inst, cfg.N, cfg, seed)


def _run_cell_args(args):
    return run_cell(*args)


def _run_tasks(cfg: SweepConfig, tasks: list) -> list[TrialRecord]:
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(_run_cell_args, [(cfg, *t) for t in tasks]))
    return [run_cell(cfg, *t) for t in tasks]


def _cell_tasks(cfg: SweepConfig, cells: list[tuple]) -> list[tuple]:
    """``cells`` are ``(a, b, d)``; returns ``(a, b, d, seed)`` per trial."""
    return [
        (a, b, d, trial_seed(cfg.seed, ci, t))
        for ci, (a, b, d) in enumerate(cells)
        for t in range(cfg.trials)
    ]


def median_by(records, key, value="sin_theta_selected") -> dict:
    """Median of ``value`` over ok records grouped by ``key(record)``.

    Groups keep first-appearance order.
    """
    groups: dict = {}
    for r in records:
        groups.setdefault(key(r), [])
        if r.ok:
            v = value(r) if callable(value) else getattr(r, value)
            groups[key(r)].append(v)
    return {k: (float(np.median(v)) if v else math.nan) for k, v in groups.items()}


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRIAL_FIELDS)
    for r in records:
        row = []
        for name in TRIAL_FIELDS:
            v = getattr(r, name)
            row.append(format(v, ".17g") if isinstance(v, float) else v)
        w.writerow(row)
    return buf.getvalue()


def write_records(records, path) -> None:
    Path(path).write_text(records_to_csv(records))


def _write_summary(rows: list[dict], path) -> None:
    if not rows:
        Path(path).write_text("")
        return
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: format(v, ".17g") if isinstance(v, float) else v for k, v in row.items()})
    Path(path).write_text(buf.getvalue())


@dataclass
class SweepResult:
    records: list
    summary: list = field(default_factory=list)
    files: list = field(default_factory=list)


def _emit(cfg: SweepConfig, stem: str, result: SweepResult, svg: str) -> SweepResult:
    if cfg.out is None:
        return result
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    paths = [out / f"{stem}_trials.csv", out / f"{stem}_summary.csv", out / f"{stem}.svg"]
    write_records(result.records, paths[0])
    _write_summary(result.summary, paths[1])
    paths[2].write_text(svg)
    result.files = [str(p) for p in paths]
    return result


def _frange(lo, hi, step):
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 10) for i in range(n)]


def sweep_grid(cfg: SweepConfig) -> SweepResult:
    """Median sin(theta) over a grid of bands ``lo <= a < b <= hi``."""
    lo, hi = cfg.grid_range()
    axis = _frange(lo, hi, cfg.grid_step)
    cells = [(a, b, cfg.d) for a in axis for b in axis if a < b]
    records = _run_tasks(cfg, _cell_tasks(cfg, cells))
    med = median_by(records, lambda r: (r.a, r.b))
    summary = [
        {"a": a, "b": b, "median_sin_theta": m, "ok_trials": sum(1 for r in records if r.ok and (r.a, r.b) == (a, b))}
        for (a, b), m in med.items()
    ]
    values = {k: v for k, v in med.items() if math.isfinite(v)}
    svg = heatmap_svg(axis, axis, values, title=f"median sin theta, {cfg.family}, d={cfg.d}, N={cfg.N}")
    return _emit(cfg, "grid", SweepResult(records, summary), svg)


def sweep_dimension(cfg: SweepConfig) -> SweepResult:
    """Median sin(theta) per dimension, pooled over ``cfg.band_set()``."""
    cells = [(a, b, d) for d in cfg.dims for (a, b) in cfg.band_set()]
    records = _run_tasks(cfg, _cell_tasks(cfg, cells))
    med = median_by(records, lambda r: r.d)
    summary = [{"d": d, "median_sin_theta": med[d]} for d in cfg.dims]
    svg = line_svg(
        {"selected": (list(cfg.dims), [med[d] for d in cfg.dims])},
        title=f"{cfg.family}, N={cfg.N}", xlabel="dimension d", ylabel="median sin theta",
    )
    return _emit(cfg, "dimension", SweepResult(records, summary), svg)


def sweep_epsilon(cfg: SweepConfig) -> SweepResult:
    """Median sin(theta) per band mass, pooled over band centres."""
    model = cfg.model
    cells, cell_mass = [], {}
    for m in cfg.masses:
        for c in cfg.centers:
            try:
                band = band_for_mass(model, m, c)
            except ValueError:
                continue
            cells.append((band.a, band.b, cfg.d))
            cell_mass[(band.a, band.b)] = float(m)
    records = _run_tasks(cfg, _cell_tasks(cfg, cells))
    med = median_by(records, lambda r: cell_mass[(r.a, r.b)])
    summary = [
        {"mass": float(m), "inv_mass": 1.0 / m, "median_sin_theta": med.get(float(m), math.nan)}
        for m in cfg.masses
    ]
    svg = line_svg(
        {"selected": ([s["inv_mass"] for s in summary], [s["median_sin_theta"] for s in summary])},
        title=f"{cfg.family}, d={cfg.d}, N={cfg.N}", xlabel="1 / band mass", ylabel="median sin theta",
    )
    return _emit(cfg, "epsilon", SweepResult(records, summary), svg)


def compare_mean_cov(cfg: SweepConfig) -> SweepResult:
    """Fix ``a`` and sweep ``b``: best contrastive mean vs. contrastive covariance."""
    a, bs = cfg.compare_axis()
    cells = [(a, b, cfg.d) for b in bs if b > a]
    records = _run_tasks(cfg, _cell_tasks(cfg, cells))
    key = lambda r: r.b  # noqa: E731
    mean_med = median_by(records, key, lambda r: r.sin_theta_best_mean)
    cov_med = median_by(records, key, "sin_theta_cov")
    sel_med = median_by(records, key)
    summary = [
        {"a": a, "b": b, "median_best_mean": mean_med[b], "median_cov": cov_med[b], "median_selected": sel_med[b]}
        for (_, b, _) in cells
    ]
    xs = [s["b"] for s in summary]
    svg = line_svg(
        {
            "best mean": (xs, [s["median_best_mean"] for s in summary]),
            "covariance": (xs, [s["median_cov"] for s in summary]),
        },
        title=f"{cfg.family}, a={a:g}, d={cfg.d}, N={cfg.N}", xlabel="b", ylabel="median sin theta",
    )
    return _emit(cfg, "compare", SweepResult(records, summary), svg)


# ---------------------------------------------------------------------------
# quadrature checks

ASYMMETRIC_BANDS = {
    "gaussian": [(-2.0, 0.5), (0.3, 1.3), (-1.0, 0.0), (0.5, 1.5), (-0.2, 1.8)],
    "laplace": [(-2.0, 0.5), (0.3, 1.3), (-1.0, 0.0)],
    "uniform": [(-0.5, 0.9), (0.2, 1.0)],
}
SYMMETRIC_HALF_WIDTHS = (0.25, 0.5, 1.0)


def _alpha_grid(lo=-0.5, hi=-0.01, step=0.005) -> list[float]:
    return _frange(lo, hi, step)


def verify_lemmas() -> list[LemmaReport]:
    """Run the full catalog of quadrature checks."""
    reports = []
    t_grid = _frange(0.0, 5.0, 0.05)
    reports.append(mr_monotonicity(DensityModel.gaussian(), t_grid, name="half-gaussian"))
    reports.append(mr_monotonicity(ExponentialLaw(1.0, 1.0), t_grid, name="exponential"))
    reports.append(exp_H_positivity(1.0, 1.0, _frange(0.0, 10.0, 0.5)))
    reports.append(exp_H_positivity(2.0, 0.5, _frange(0.0, 10.0, 0.5)))

    alphas = _alpha_grid()
    for fam, bands in ASYMMETRIC_BANDS.items():
        model = DensityModel(fam)
        for a, b in bands:
            band = band_stats(model, a, b)
            vals = [F(model, band, al) for al in alphas]
            changes = count_sign_changes(vals)
            reports.append(
                LemmaReport(
                    f"F-sign-changes({fam},a={a:g},b={b:g})", alphas, vals, changes <= 1,
                    float(max(0, changes - 1)), 0.0, "at most one sign change over negative alpha",
                )
            )
    for fam in ("gaussian", "laplace", "uniform"):
        model = DensityModel(fam)
        for hw in SYMMETRIC_HALF_WIDTHS:
            band = band_stats(model, -hw, hw)
            vals = [F(model, band, al) for al in alphas]
            worst = max(abs(v) for v in vals)
            reports.append(
                LemmaReport(
                    f"F-vanishes-symmetric({fam},b={hw:g})", alphas, vals, worst <= 1e-9, worst, 1e-9,
                    "re-weighted mean is zero for a symmetric band",
                )
            )
        for mass in (0.1, 0.2, 0.4):
            band = symmetric_band_for_mass(model, mass)
            grid = [-0.1, 0.0]
            vals = [S(model, band, al) for al in grid]
            worst = max(0.0, -vals[0]) + abs(vals[1])
            ok = vals[0] > 0 and abs(vals[1]) <= 1e-10
            reports.append(
                LemmaReport(
                    f"S-positivity({fam},mass={mass:g})", grid, vals, ok, worst, 1e-10,
                    "S(-0.1) > 0 and S(0) = 0 for a symmetric band",
                )
            )
    return reports
