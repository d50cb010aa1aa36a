#!/usr/bin/env python3
"""Regenerate the sample CSVs shipped with the plots package.

Runs the three fast-profile studies deterministically (seed 0) and writes
their CSVs into plots/sample_data/.  Takes about a minute.
"""

from pathlib import Path

from symnls.bench import (
    StudyKind,
    build_config,
    run_conservation,
    run_convergence,
    run_timing,
    write_csv,
)

OUT_DIR = Path(__file__).resolve().parent.parent / "plots" / "sample_data"


def main() -> None:
    OUT_DIR.mkdir(parents=True, exist_ok=True)
    jobs = [
        ("convergence.csv", StudyKind.CONVERGENCE, run_convergence),
        ("conservation.csv", StudyKind.CONSERVATION, run_conservation),
        ("timing.csv", StudyKind.TIMING, run_timing),
    ]
    for name, kind, runner in jobs:
        cfg = build_config(kind, "fast")
        report = runner(cfg)
        path = OUT_DIR / name
        write_csv(report, path)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
