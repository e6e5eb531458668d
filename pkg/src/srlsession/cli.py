"""Command-line entry points: run scripted learners, compare conditions, validate packs."""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
from pathlib import Path
from typing import Optional

from .content import ContentError, load_pack, parse_pack_document, validate_pack
from .harness import (
    HarnessError,
    RemoteClient,
    SessionReport,
    compare_conditions,
    comparison_to_csv,
    default_instruments_dir,
    load_instruments,
    load_script,
    run_script,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srlsession",
        description="Scripted-learner harness for the learning-session service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a learner script against a content pack")
    run.add_argument("--script", required=True, help="learner script JSON file")
    run.add_argument("--pack", required=True, help="content pack JSON file")
    run.add_argument("--seed", type=int, default=0, help="mock-gateway seed (default 0)")
    run.add_argument("--out", required=True, help="output directory for reports and event logs")
    run.add_argument("--remote", default=None, metavar="URL",
                     help="run against a live service instead of in-process")
    run.add_argument("--parallel", type=int, default=1, metavar="N",
                     help="run N independent sessions concurrently")
    run.add_argument("--instruments", default=None,
                     help="directory of instrument definitions (default: repo fixtures)")

    compare = sub.add_parser("compare", help="summarize session reports per condition")
    compare.add_argument("--in", dest="inputs", required=True, nargs="+",
                         help="report JSON files or directories containing *.report.json")
    compare.add_argument("--out", required=True, help="CSV output path")

    validate = sub.add_parser("validate", help="validate a content pack")
    validate.add_argument("--pack", required=True, help="content pack JSON file")
    return parser


def _load_instruments_arg(path: Optional[str]):
    if path:
        return load_instruments(path)
    default = default_instruments_dir()
    return load_instruments(default) if default else {}


def _write_run_outputs(out_dir: Path, report: SessionReport) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / f"{report.session_id}.events.jsonl").write_text(
        report.events_jsonl, encoding="utf-8"
    )
    (out_dir / f"{report.session_id}.report.json").write_text(
        json.dumps(report.to_doc(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def cmd_run(args: argparse.Namespace) -> int:
    script = load_script(args.script)
    pack = load_pack(args.pack)
    instruments = _load_instruments_arg(args.instruments)
    out_dir = Path(args.out)

    def run_one(worker: int):
        session_id = f"{script.script_id}-{args.seed}" if args.parallel == 1 else (
            f"{script.script_id}-{args.seed}-w{worker}"
        )
        if args.remote:
            client = RemoteClient(args.remote)
            return run_script(script, pack, args.seed, client=client,
                              instruments=instruments, session_id=session_id)
        return run_script(script, pack, args.seed, instruments=instruments,
                          session_id=session_id)

    reports: list[SessionReport] = []
    if args.parallel <= 1:
        reports.append(run_one(0))
    else:
        with concurrent.futures.ThreadPoolExecutor(max_workers=args.parallel) as pool:
            futures = [pool.submit(run_one, i) for i in range(args.parallel)]
            reports = [f.result() for f in futures]

    failed = False
    for report in reports:
        _write_run_outputs(out_dir, report)
        status = "ok" if not report.invariant_failures else "INVARIANT FAILURES"
        print(
            f"{report.session_id}: stage={report.final_stage} "
            f"completion={report.completion_rate:.2f} clock={report.total_time_seconds}s "
            f"events={report.event_count} [{status}]"
        )
        for failure in report.invariant_failures:
            failed = True
            print(f"  ! {failure}", file=sys.stderr)
    return 1 if failed else 0


def _collect_reports(inputs: list[str]) -> list[SessionReport]:
    paths: list[Path] = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.report.json")))
        else:
            paths.append(p)
    reports = []
    for path in paths:
        doc = json.loads(path.read_text(encoding="utf-8"))
        reports.append(SessionReport.from_doc(doc))
    return reports


def cmd_compare(args: argparse.Namespace) -> int:
    reports = _collect_reports(args.inputs)
    rows = compare_conditions(reports)
    csv_text = comparison_to_csv(rows)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(csv_text, encoding="utf-8")
    print(csv_text, end="")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    text = Path(args.pack).read_text(encoding="utf-8")
    try:
        pack = parse_pack_document(json.loads(text))
    except (json.JSONDecodeError, ContentError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    report = validate_pack(pack)
    for finding in report.findings:
        print(f"{finding.category}: {finding.path}: {finding.message}", file=sys.stderr)
    if not report.ok:
        print(f"{len(report.findings)} problem(s) found", file=sys.stderr)
        return 1
    subtasks = len(pack.all_subtasks())
    print(f"ok: {pack.pack_id} ({len(pack.tasks)} tasks, {subtasks} subtasks, "
          f"{len(pack.question_bank)} questions)")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "compare":
            return cmd_compare(args)
        return cmd_validate(args)
    except HarnessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ContentError as exc:
        print(f"pack error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
