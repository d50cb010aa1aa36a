"""Command-line entry point.

Subcommands: converge | conserve | timing | evolve | selftest.
Precedence for study parameters: flags > config file > profile defaults.
"""

from __future__ import annotations

import argparse
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import bench
from .bench import ConfigError, StudyKind, build_config, load_config_file, write_csv
from .schemes import NonConvergence, Scheme, StepperConfig, evolve
from .spectral import (
    Boundary,
    Grid,
    read_snapshot,
    rough_data,
    write_snapshot,
)


def _parse_set_value(raw: str):
    try:
        return tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        return raw


def _collect_overrides(args) -> dict:
    overrides = {}
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        overrides[key] = _parse_set_value(value)
    if getattr(args, "alpha", None) is not None:
        overrides["alpha"] = args.alpha
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "scheme", None):
        overrides["schemes"] = args.scheme
    if args.out is not None:
        overrides["output_path"] = args.out
    return overrides


def _study_config(args, kind: StudyKind):
    file_values = load_config_file(args.config) if args.config else None
    return build_config(kind, args.profile, file_values, _collect_overrides(args))


def _run_study(args, kind: StudyKind) -> int:
    try:
        cfg = _study_config(args, kind)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    if kind is StudyKind.CONVERGENCE:
        report = bench.run_convergence(cfg, jobs=args.jobs)
    elif kind is StudyKind.CONSERVATION:
        report = bench.run_conservation(cfg, jobs=args.jobs)
    else:
        report = bench.run_timing(cfg)
    write_csv(report, cfg.output_path)
    print(f"wrote {cfg.output_path}")
    if report.fitted_order:
        print(f"{'scheme':<12} fitted order")
        for scheme, order in sorted(report.fitted_order.items()):
            print(f"{scheme:<12} {order:.2f}")
    return 2 if report.metadata.get("failed_cells") else 0


_EVOLVE_FIELDS = {
    "scheme", "tau", "n_steps", "K", "d", "boundary", "alpha", "seed",
    "input_snapshot", "observer_stride",
}

_EVOLVE_DEFAULTS = dict(
    scheme="symmetric", tau=0.01, n_steps=100, K=256, d=1,
    boundary="periodic", alpha=2.0, seed=0, input_snapshot=None,
    observer_stride=1,
)


def _cmd_evolve(args) -> int:
    try:
        values = dict(_EVOLVE_DEFAULTS)
        if args.config:
            try:
                with open(args.config, "rb") as fh:
                    doc = tomllib.load(fh)
            except FileNotFoundError:
                raise ConfigError(f"config file not found: {args.config}")
            except tomllib.TOMLDecodeError as exc:
                raise ConfigError(f"config file {args.config} does not parse: {exc}")
            section = doc.pop("evolve", {})
            unknown = set(doc) | (set(section) - _EVOLVE_FIELDS)
            if unknown:
                raise ConfigError(f"unknown config keys: {sorted(unknown)}")
            values.update(section)
        for item in args.set or []:
            key, sep, value = item.partition("=")
            if not sep or key not in _EVOLVE_FIELDS:
                raise ConfigError(f"bad override {item!r}")
            values[key] = _parse_set_value(value)
        scheme = Scheme(values["scheme"])
        if values["input_snapshot"] is not None:
            u0 = read_snapshot(values["input_snapshot"])
        else:
            boundary = Boundary(values["boundary"])
            grid = (
                Grid.periodic(int(values["K"]), int(values["d"]))
                if boundary is Boundary.PERIODIC
                else Grid.dirichlet(int(values["K"]))
            )
            u0 = rough_data(grid, float(values["alpha"]), int(values["seed"]), 1.0)
        stepper = StepperConfig(scheme, float(values["tau"]))
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    try:
        traj = evolve(u0, stepper, int(values["n_steps"]),
                      int(values["observer_stride"]))
    except NonConvergence as exc:
        print(f"evolution failed: {exc}", file=sys.stderr)
        return 2
    out = args.out or "state.nlsf"
    write_snapshot(traj.final, out)
    print(f"wrote {out}")
    return 0


def _cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest()
    failures = 0
    for res in results:
        status = "PASS" if res.passed else "FAIL"
        print(
            f"{status} {res.name:<40} observed={res.observed:.3e} "
            f"tolerance={res.tolerance:.3e} margin={res.margin:.3e}"
        )
        failures += not res.passed
    print(f"{len(results) - failures}/{len(results)} properties passed")
    return 2 if failures else 0


def _add_common(parser: argparse.ArgumentParser, study: bool = True) -> None:
    parser.add_argument("--config", help="TOML config file")
    parser.add_argument("--out", help="output path (CSV or snapshot)")
    parser.add_argument("--jobs", type=int, default=1, help="worker pool size")
    parser.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a config key")
    if study:
        parser.add_argument("--profile", choices=("fast", "paper"), default="fast")
        parser.add_argument("--alpha", type=float, help="data regularity")
        parser.add_argument("--seed", type=int)
        parser.add_argument("--scheme", action="append",
                            choices=[s.value for s in Scheme],
                            help="restrict to these schemes (repeatable)")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="symnls",
        description="Low-regularity NLS integrators and their benchmark harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, kind in (
        ("converge", StudyKind.CONVERGENCE),
        ("conserve", StudyKind.CONSERVATION),
        ("timing", StudyKind.TIMING),
    ):
        p = sub.add_parser(name, help=f"run a {kind.value} study")
        _add_common(p)
        p.set_defaults(func=lambda a, k=kind: _run_study(a, k))

    p = sub.add_parser("evolve", help="evolve one state, write a field snapshot")
    _add_common(p, study=False)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("selftest", help="run the built-in property suite")
    _add_common(p, study=False)
    p.set_defaults(func=_cmd_selftest)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
