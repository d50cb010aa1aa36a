"""Experiment orchestration: convergence ladders, long-time conservation
drift, and cost/accuracy sweeps, persisted as CSV.

Reference solutions are computed with the symmetric scheme itself at a much
finer step (tau_ref <= min(ladder)/50), so reported errors are pure
time-discretization errors on a shared grid.
"""

from __future__ import annotations

import csv
import math
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from . import __version__
from .observables import energy, mass
from .schemes import (
    NonConvergence,
    Scheme,
    StepperConfig,
    evolve,
)
from .spectral import Boundary, Grid, SpectralField, l2_norm, rough_data

CSV_HEADER = ["study", "scheme", "boundary", "d", "K", "alpha", "seed",
              "tau", "t", "metric", "value"]

# Data normalization for all studies: unit target norm in H^alpha.
TARGET_NORM = 1.0


class StudyKind(Enum):
    CONVERGENCE = "convergence"
    CONSERVATION = "conservation"
    TIMING = "timing"


class ConfigError(ValueError):
    pass


class InsufficientData(ValueError):
    pass


@dataclass(frozen=True)
class StudyConfig:
    kind: StudyKind
    boundary: Boundary
    K: int
    d: int
    alpha: float
    seed: int
    T: float
    tau_ladder: tuple[float, ...]
    tau_ref: float | None
    schemes: tuple[Scheme, ...]
    observer_stride: int
    output_path: str

    def __post_init__(self):
        if not self.tau_ladder:
            raise ConfigError("tau_ladder must not be empty")
        if any(tau <= 0 for tau in self.tau_ladder):
            raise ConfigError("tau ladder entries must be positive")
        for tau in self.tau_ladder:
            if abs(self.T / tau - round(self.T / tau)) > 1e-9:
                raise ConfigError(f"T/tau must be integral, got T={self.T}, tau={tau}")
        if self.kind in (StudyKind.CONVERGENCE, StudyKind.TIMING):
            if self.tau_ref is None:
                raise ConfigError(f"{self.kind.value} studies need tau_ref")
            if self.tau_ref > min(self.tau_ladder) / 50:
                raise ConfigError("tau_ref must be <= min(tau_ladder)/50")
            if abs(self.T / self.tau_ref - round(self.T / self.tau_ref)) > 1e-6:
                raise ConfigError("T/tau_ref must be integral")
        if not self.schemes:
            raise ConfigError("at least one scheme is required")
        if self.observer_stride < 1:
            raise ConfigError("observer_stride must be at least 1")

    def grid(self) -> Grid:
        if self.boundary is Boundary.PERIODIC:
            return Grid.periodic(self.K, self.d)
        return Grid.dirichlet(self.K)

    def initial_data(self) -> SpectralField:
        return rough_data(self.grid(), self.alpha, self.seed, TARGET_NORM)


@dataclass
class StudyReport:
    rows: list[dict]
    fitted_order: dict[str, float]
    metadata: dict

    def values(self, scheme: str, metric: str) -> list[tuple]:
        out = []
        for row in self.rows:
            if row["scheme"] == scheme and row["metric"] == metric:
                out.append((row["tau"], row["t"], row["value"]))
        return out


def fit_order(points, window: tuple[float, float] | None = None) -> float:
    """Least-squares slope of ln(error) against ln(tau).

    `points` is a sequence of (tau, error) pairs; `window` optionally
    restricts the fit to tau in [window[0], window[1]] (the asymptotic
    regime of two-regime data).
    """
    pts = [(t, e) for t, e in points if window is None or window[0] <= t <= window[1]]
    if len(pts) < 3:
        raise InsufficientData(f"need at least 3 points, got {len(pts)}")
    if any(e <= 0 for _, e in pts):
        raise InsufficientData("errors must be positive for a log-log fit")
    taus = np.log([t for t, _ in pts])
    errs = np.log([e for _, e in pts])
    return float(np.polyfit(taus, errs, 1)[0])


def _reference_solution(cfg: StudyConfig, u0: SpectralField) -> SpectralField:
    n = round(cfg.T / cfg.tau_ref)
    stepper = StepperConfig(Scheme.SYMMETRIC_LOWREG, cfg.tau_ref)
    return evolve(u0, stepper, n, observer_stride=n).final


def _metadata(cfg: StudyConfig) -> dict:
    meta = asdict(cfg)
    meta["kind"] = cfg.kind.value
    meta["boundary"] = cfg.boundary.value
    meta["schemes"] = [s.value for s in cfg.schemes]
    meta["code_version"] = __version__
    return meta


def run_convergence(cfg: StudyConfig, jobs: int = 1) -> StudyReport:
    """Error-vs-tau ladder against a fine symmetric-scheme reference."""
    if cfg.kind is not StudyKind.CONVERGENCE:
        raise ConfigError("config kind must be convergence")
    u0 = cfg.initial_data()
    ref = _reference_solution(cfg, u0)

    def cell(args):
        scheme, tau = args
        n = round(cfg.T / tau)
        stepper = StepperConfig(scheme, tau)
        try:
            traj = evolve(u0, stepper, n, observer_stride=n)
        except NonConvergence:
            return scheme, tau, None, None
        err = l2_norm(traj.final - ref)
        return scheme, tau, err, traj.total_fp_iterations()

    cells = [(s, tau) for s in cfg.schemes for tau in cfg.tau_ladder]
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(cell, cells))

    rows = []
    per_scheme: dict[Scheme, list[tuple[float, float]]] = {s: [] for s in cfg.schemes}
    failed = False
    for scheme, tau, err, fp_iters in results:
        if err is None:
            failed = True
            continue
        rows.append({"scheme": scheme.value, "tau": tau, "t": cfg.T,
                     "metric": "l2_error", "value": err})
        if scheme is Scheme.SYMMETRIC_LOWREG:
            rows.append({"scheme": scheme.value, "tau": tau, "t": cfg.T,
                         "metric": "fp_iters", "value": float(fp_iters)})
        per_scheme[scheme].append((tau, err))

    fitted = {}
    for scheme, pts in per_scheme.items():
        try:
            fitted[scheme.value] = fit_order(pts)
        except InsufficientData:
            continue
        rows.append({"scheme": scheme.value, "tau": None, "t": None,
                     "metric": "fitted_order", "value": fitted[scheme.value]})

    meta = _metadata(cfg)
    meta["failed_cells"] = failed
    return StudyReport(rows, fitted, meta)


def run_conservation(cfg: StudyConfig, jobs: int = 1) -> StudyReport:
    """Mass and relative-energy time series per scheme over [0, T]."""
    if cfg.kind is not StudyKind.CONSERVATION:
        raise ConfigError("config kind must be conservation")
    u0 = cfg.initial_data()
    e0 = energy(u0)
    tau = cfg.tau_ladder[0]
    n = round(cfg.T / tau)

    def cell(scheme):
        stepper = StepperConfig(scheme, tau)
        try:
            traj = evolve(u0, stepper, n, observer_stride=cfg.observer_stride)
        except NonConvergence:
            return scheme, None
        return scheme, traj

    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        results = list(pool.map(cell, cfg.schemes))

    rows = []
    failed = False
    for scheme, traj in results:
        if traj is None:
            failed = True
            continue
        for t, state in zip(traj.times, traj.states):
            rows.append({"scheme": scheme.value, "tau": tau, "t": t,
                         "metric": "mass", "value": mass(state)})
            rows.append({"scheme": scheme.value, "tau": tau, "t": t,
                         "metric": "rel_energy", "value": energy(state) / e0})

    meta = _metadata(cfg)
    meta["failed_cells"] = failed
    return StudyReport(rows, {}, meta)


def run_timing(cfg: StudyConfig) -> StudyReport:
    """Wall time and final error per (scheme, tau); single worker, with a
    warm-up pass excluded from the timings."""
    if cfg.kind is not StudyKind.TIMING:
        raise ConfigError("config kind must be timing")
    u0 = cfg.initial_data()
    ref = _reference_solution(cfg, u0)

    rows = []
    failed = False
    for scheme in cfg.schemes:
        for tau in cfg.tau_ladder:
            n = round(cfg.T / tau)
            stepper = StepperConfig(scheme, tau)
            try:
                evolve(u0, stepper, min(n, 32), observer_stride=n)  # warm-up
                start = time.perf_counter()
                traj = evolve(u0, stepper, n, observer_stride=n)
                wall_ms = 1e3 * (time.perf_counter() - start)
            except NonConvergence:
                failed = True
                continue
            err = l2_norm(traj.final - ref)
            rows.append({"scheme": scheme.value, "tau": tau, "t": cfg.T,
                         "metric": "l2_error", "value": err})
            rows.append({"scheme": scheme.value, "tau": tau, "t": cfg.T,
                         "metric": "wall_ms", "value": wall_ms})

    meta = _metadata(cfg)
    meta["failed_cells"] = failed
    return StudyReport(rows, {}, meta)


def write_csv(report: StudyReport, path) -> None:
    meta = report.metadata

    def fmt(v):
        return "" if v is None else format(v, ".17g")

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for row in report.rows:
            writer.writerow([
                meta["kind"], row["scheme"], meta["boundary"], meta["d"],
                meta["K"], fmt(meta["alpha"]), meta["seed"],
                fmt(row["tau"]), fmt(row["t"]), row["metric"], fmt(row["value"]),
            ])


def read_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# Config files and profiles

_CONFIG_FIELDS = {
    "kind", "boundary", "K", "d", "alpha", "seed", "T",
    "tau_ladder", "tau_ref", "schemes", "observer_stride", "output_path",
}

PROFILES: dict[tuple[StudyKind, str], dict] = {
    (StudyKind.CONVERGENCE, "fast"): dict(
        boundary="periodic", K=2**8, d=1, alpha=3.0, seed=0, T=1.0,
        tau_ladder=[2.0**-e for e in range(4, 10)], tau_ref=2.0**-15,
        schemes=["symmetric", "lowreg1", "lie", "strang", "expeuler"],
        observer_stride=10**9, output_path="convergence.csv",
    ),
    (StudyKind.CONVERGENCE, "paper"): dict(
        boundary="periodic", K=2**11, d=1, alpha=2.0, seed=0, T=1.0,
        tau_ladder=[2.0**-e for e in range(4, 12)], tau_ref=2.0**-17,
        schemes=["symmetric", "lowreg1", "lie", "strang", "expeuler"],
        observer_stride=10**9, output_path="convergence.csv",
    ),
    (StudyKind.CONSERVATION, "fast"): dict(
        boundary="periodic", K=2**9, d=1, alpha=2.0, seed=0, T=50.0,
        tau_ladder=[0.05], tau_ref=None,
        schemes=["symmetric", "lowreg1"],
        observer_stride=20, output_path="conservation.csv",
    ),
    (StudyKind.CONSERVATION, "paper"): dict(
        boundary="periodic", K=2**9, d=1, alpha=2.0, seed=0, T=50.0,
        tau_ladder=[0.05], tau_ref=None,
        schemes=["symmetric", "lowreg1", "lie", "strang", "expeuler"],
        observer_stride=10, output_path="conservation.csv",
    ),
    (StudyKind.TIMING, "fast"): dict(
        boundary="periodic", K=2**8, d=1, alpha=2.0, seed=0, T=1.0,
        tau_ladder=[2.0**-e for e in range(4, 9)], tau_ref=2.0**-14,
        schemes=["symmetric", "lowreg1"],
        observer_stride=10**9, output_path="timing.csv",
    ),
    (StudyKind.TIMING, "paper"): dict(
        boundary="periodic", K=2**11, d=1, alpha=2.0, seed=0, T=1.0,
        tau_ladder=[2.0**-e for e in range(4, 11)], tau_ref=2.0**-16,
        schemes=["symmetric", "lowreg1", "lie", "strang", "expeuler"],
        observer_stride=10**9, output_path="timing.csv",
    ),
}


def load_config_file(path) -> dict:
    """Key/value config with a single [study] section mapping onto StudyConfig."""
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} does not parse: {exc}")
    values = doc.pop("study", {})
    unknown = set(doc) | (set(values) - _CONFIG_FIELDS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return values


def build_config(
    kind: StudyKind,
    profile: str = "fast",
    file_values: dict | None = None,
    overrides: dict | None = None,
) -> StudyConfig:
    """Merge profile defaults, config-file values, and flag overrides
    (precedence: overrides > file > profile)."""
    try:
        values = dict(PROFILES[(kind, profile)])
    except KeyError:
        raise ConfigError(f"unknown profile {profile!r} for {kind.value}")
    for layer in (file_values or {}, overrides or {}):
        unknown = set(layer) - _CONFIG_FIELDS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        values.update({k: v for k, v in layer.items() if v is not None})
    if "kind" in values and str(values.pop("kind")) != kind.value:
        raise ConfigError(f"config kind does not match the {kind.value} study")
    try:
        schemes = tuple(Scheme(s) for s in values["schemes"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    try:
        boundary = Boundary(values["boundary"])
    except ValueError as exc:
        raise ConfigError(str(exc))
    tau_ref = values["tau_ref"]
    try:
        return StudyConfig(
            kind=kind,
            boundary=boundary,
            K=int(values["K"]),
            d=int(values["d"]),
            alpha=float(values["alpha"]),
            seed=int(values["seed"]),
            T=float(values["T"]),
            tau_ladder=tuple(float(t) for t in values["tau_ladder"]),
            tau_ref=None if tau_ref is None else float(tau_ref),
            schemes=schemes,
            observer_stride=int(values["observer_stride"]),
            output_path=str(values["output_path"]),
        )
    except (ValueError, TypeError, KeyError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid study config: {exc}")
