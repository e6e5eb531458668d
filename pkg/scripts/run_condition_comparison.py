#!/usr/bin/env python3
"""Run the shipped learner scripts under both study conditions and compare them.

Each script runs once per seed with the deterministic mock gateway, every run is
audited against its own event log, and the per-condition summary (mean and SD of
completion, time on task, and each instrument's overall score) lands in a CSV.

Example:
    python3 scripts/run_condition_comparison.py --seeds 5 --out /tmp/study
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]

from srlsession.content import load_pack
from srlsession.harness import (
    compare_conditions,
    comparison_to_csv,
    default_instruments_dir,
    load_instruments,
    load_script,
    run_script,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pack", type=Path, default=REPO_ROOT / "fixtures" / "packs" / "full.json")
    parser.add_argument("--seeds", type=int, default=3, help="seeds 0..N-1 per script")
    parser.add_argument("--out", type=Path, default=Path("/tmp/condition-comparison"))
    parser.add_argument(
        "--include-abandonment",
        action="store_true",
        help="also run the mid-process abandonment script",
    )
    args = parser.parse_args()

    pack = load_pack(args.pack)
    instruments = load_instruments(default_instruments_dir())
    script_names = ["full_srl", "no_srl"]
    if args.include_abandonment:
        script_names.append("abandonment")
    scripts = [load_script(REPO_ROOT / "fixtures" / "scripts" / f"{n}.json") for n in script_names]

    args.out.mkdir(parents=True, exist_ok=True)
    reports = []
    failed = False
    for script in scripts:
        for seed in range(args.seeds):
            report = run_script(script, pack, seed=seed, instruments=instruments)
            reports.append(report)
            (args.out / f"{report.session_id}.events.jsonl").write_text(
                report.events_jsonl, encoding="utf-8"
            )
            (args.out / f"{report.session_id}.report.json").write_text(
                json.dumps(report.to_doc(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
            )
            status = "ok" if not report.invariant_failures else "INVARIANT FAILURES"
            print(
                f"{report.session_id}: condition={report.condition} "
                f"completion={report.completion_rate:.2f} clock={report.total_time_seconds}s "
                f"[{status}]"
            )
            for failure in report.invariant_failures:
                print(f"  ! {failure}", file=sys.stderr)
                failed = True

    rows = compare_conditions(reports)
    csv_text = comparison_to_csv(rows)
    csv_path = args.out / "comparison.csv"
    csv_path.write_text(csv_text, encoding="utf-8")
    print(f"\nwrote {csv_path}")
    print(csv_text, end="")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
