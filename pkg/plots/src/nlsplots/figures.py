"""The three figure kinds: convergence, conservation drift, cost/accuracy.

Each plotting function reads one benchmark CSV, draws the figure, and writes
both a raster and a vector file next to the requested output path.  Returned
summaries expose the file list and the annotations for testing.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_SCHEMA = ["study", "scheme", "boundary", "d", "K", "alpha", "seed",
           "tau", "t", "metric", "value"]

# One palette table; legend naming fixed per scheme ("Low-reg 2" reserved
# for a future second-order explicit variant, currently absent).
PALETTE = {
    "lowreg1": ("Low-reg 1", "tab:blue"),
    "symmetric": ("Symmetric", "tab:red"),
    "lie": ("Lie", "tab:green"),
    "strang": ("Strang", "tab:purple"),
    "expeuler": ("ExpEuler", "tab:orange"),
}


class SchemaError(ValueError):
    """The CSV does not match the benchmark schema or lacks required rows."""


def _read_rows(csv_path) -> list[dict]:
    path = Path(csv_path)
    if not path.exists():
        raise SchemaError(f"CSV not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != _SCHEMA:
            raise SchemaError(
                f"{path}: header {reader.fieldnames} does not match the "
                f"benchmark schema {_SCHEMA}"
            )
        return list(reader)


def _style(scheme: str):
    return PALETTE.get(scheme, (scheme, "tab:gray"))


def _save(fig, out_image) -> list[str]:
    """Write the requested file plus its raster/vector sibling."""
    out = Path(out_image)
    if out.suffix in ("", ".png"):
        targets = [out.with_suffix(".png"), out.with_suffix(".pdf")]
    elif out.suffix == ".pdf":
        targets = [out.with_suffix(".pdf"), out.with_suffix(".png")]
    else:
        targets = [out, out.with_suffix(".png")]
    for target in targets:
        fig.savefig(target, bbox_inches="tight")
    plt.close(fig)
    return [str(t) for t in targets]


def plot_convergence(csv_path, out_image) -> dict:
    """Log-log error vs tau per scheme, one panel per alpha, with slope-1 and
    slope-2 guide lines; each curve is annotated with the fitted order read
    from the CSV's fitted_order rows (never re-fitted here)."""
    rows = _read_rows(csv_path)
    errors = [r for r in rows if r["metric"] == "l2_error"]
    if not errors:
        raise SchemaError(f"{csv_path}: no l2_error rows to plot")
    fitted = {
        (r["alpha"], r["scheme"]): float(r["value"])
        for r in rows
        if r["metric"] == "fitted_order"
    }

    panels: dict[str, dict[str, list[tuple[float, float]]]] = defaultdict(
        lambda: defaultdict(list)
    )
    for r in errors:
        panels[r["alpha"]][r["scheme"]].append((float(r["tau"]), float(r["value"])))

    alphas = sorted(panels, key=float)
    fig, axes = plt.subplots(
        1, len(alphas), figsize=(5.0 * len(alphas), 4.0), squeeze=False
    )
    annotations: dict[str, str] = {}
    for ax, alpha in zip(axes[0], alphas):
        tau_all = [t for pts in panels[alpha].values() for t, _ in pts]
        err_all = [e for pts in panels[alpha].values() for _, e in pts]
        for scheme, pts in panels[alpha].items():
            pts = sorted(pts)
            label, color = _style(scheme)
            order = fitted.get((alpha, scheme))
            if order is not None:
                text = f"{order:.2f}"
                annotations[scheme] = text
                label = f"{label} ({text})"
            ax.loglog(*zip(*pts), "o-", color=color, label=label)
        # reference slopes anchored at the coarsest step
        t0, t1 = max(tau_all), min(tau_all)
        top = max(err_all)
        guide = [t0, t1]
        ax.loglog(guide, [top * (t / t0) ** 1 for t in guide], "k-", lw=0.8)
        ax.loglog(guide, [top * (t / t0) ** 2 for t in guide], "k--", lw=0.8)
        ax.set_xlabel(r"$\tau$")
        ax.set_ylabel(r"$L^2$ error")
        ax.set_title(rf"$\alpha = {alpha}$")
        ax.legend(fontsize=8)
    fig.suptitle("Time-discretization error vs step size")
    outputs = _save(fig, out_image)
    return {"outputs": outputs, "annotations": annotations, "panels": alphas}


def plot_conservation(csv_path, out_image) -> dict:
    """Mass and relative-energy time series per scheme, with the exact-value
    horizontal reference lines (initial mass; energy ratio 1)."""
    rows = _read_rows(csv_path)
    series: dict[str, dict[str, list[tuple[float, float]]]] = {
        "mass": defaultdict(list),
        "rel_energy": defaultdict(list),
    }
    for r in rows:
        if r["metric"] in series:
            series[r["metric"]][r["scheme"]].append((float(r["t"]), float(r["value"])))
    if not series["mass"] and not series["rel_energy"]:
        raise SchemaError(f"{csv_path}: no mass or rel_energy rows to plot")

    fig, (ax_mass, ax_energy) = plt.subplots(1, 2, figsize=(10, 4))
    schemes = []
    for scheme, pts in sorted(series["mass"].items()):
        pts = sorted(pts)
        label, color = _style(scheme)
        ax_mass.plot(*zip(*pts), color=color, label=label)
        schemes.append(scheme)
    if series["mass"]:
        initial = sorted(next(iter(series["mass"].values())))[0][1]
        ax_mass.axhline(initial, color="k", lw=0.8, ls=":")
    ax_mass.set_xlabel("t")
    ax_mass.set_ylabel(r"$\|u\|_{L^2}$")
    ax_mass.set_title("Mass")
    ax_mass.legend(fontsize=8)

    for scheme, pts in sorted(series["rel_energy"].items()):
        pts = sorted(pts)
        label, color = _style(scheme)
        ax_energy.plot(*zip(*pts), color=color, label=label)
    ax_energy.axhline(1.0, color="k", lw=0.8, ls=":")
    ax_energy.set_xlabel("t")
    ax_energy.set_ylabel(r"$E(t)/E(t_0)$")
    ax_energy.set_title("Relative energy")
    ax_energy.legend(fontsize=8)

    outputs = _save(fig, out_image)
    return {"outputs": outputs, "schemes": sorted(set(schemes))}


def plot_timing(csv_path, out_image) -> dict:
    """Cost/accuracy scatter: wall-clock milliseconds vs final L2 error on
    log axes, one marker chain per scheme."""
    rows = _read_rows(csv_path)
    cells: dict[tuple[str, str], dict[str, float]] = defaultdict(dict)
    for r in rows:
        if r["metric"] in ("wall_ms", "l2_error"):
            cells[(r["scheme"], r["tau"])][r["metric"]] = float(r["value"])
    points: dict[str, list[tuple[float, float]]] = defaultdict(list)
    for (scheme, _), vals in cells.items():
        if "wall_ms" in vals and "l2_error" in vals:
            points[scheme].append((vals["wall_ms"], vals["l2_error"]))
    if not points:
        raise SchemaError(f"{csv_path}: no paired wall_ms/l2_error rows to plot")

    fig, ax = plt.subplots(figsize=(5, 4))
    for scheme, pts in sorted(points.items()):
        label, color = _style(scheme)
        ax.loglog(*zip(*sorted(pts)), "o-", color=color, label=label)
    ax.set_xlabel("wall time [ms]")
    ax.set_ylabel(r"$L^2$ error")
    ax.set_title("Cost vs accuracy")
    ax.legend(fontsize=8)
    outputs = _save(fig, out_image)
    return {"outputs": outputs, "schemes": sorted(points)}
