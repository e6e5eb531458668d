import json

from srlsession.cli import main

from oracles import FIXTURES


FULL_PACK = str(FIXTURES / "packs" / "full.json")
FULL_SCRIPT = str(FIXTURES / "scripts" / "full_srl.json")
NO_SRL_SCRIPT = str(FIXTURES / "scripts" / "no_srl.json")
INSTRUMENTS = str(FIXTURES / "instruments")


def run_cli(argv):
    return main(argv)


def test_run_writes_report_and_events(tmp_path, capsys):
    out = tmp_path / "runs"
    code = run_cli(
        [
            "run",
            "--script",
            FULL_SCRIPT,
            "--pack",
            FULL_PACK,
            "--seed",
            "3",
            "--out",
            str(out),
            "--instruments",
            INSTRUMENTS,
        ]
    )
    assert code == 0
    printed = capsys.readouterr().out
    assert "[ok]" in printed
    reports = list(out.glob("*.report.json"))
    events = list(out.glob("*.events.jsonl"))
    assert len(reports) == 1 and len(events) == 1
    doc = json.loads(reports[0].read_text(encoding="utf-8"))
    assert doc["completed"] is True
    assert doc["invariant_failures"] == []
    lines = events[0].read_text(encoding="utf-8").splitlines()
    assert len(lines) == doc["event_count"]


def test_run_rejects_invalid_script(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(
        json.dumps(
            {
                "script_id": "bad",
                "condition": "no_srl",
                "actions": [{"do": "plan_record"}],
            }
        ),
        encoding="utf-8",
    )
    code = run_cli(
        ["run", "--script", str(bad), "--pack", FULL_PACK, "--out", str(tmp_path / "o")]
    )
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_compare_over_run_outputs(tmp_path, capsys):
    out = tmp_path / "runs"
    for script in (FULL_SCRIPT, NO_SRL_SCRIPT):
        assert (
            run_cli(
                [
                    "run",
                    "--script",
                    script,
                    "--pack",
                    FULL_PACK,
                    "--seed",
                    "1",
                    "--out",
                    str(out),
                    "--instruments",
                    INSTRUMENTS,
                ]
            )
            == 0
        )
    capsys.readouterr()  # drain the run-command output
    csv_path = tmp_path / "comparison.csv"
    code = run_cli(["compare", "--in", str(out), "--out", str(csv_path)])
    assert code == 0
    text = csv_path.read_text(encoding="utf-8")
    lines = text.strip().splitlines()
    assert lines[0].startswith("condition,n,")
    assert len(lines) == 3  # header + one row per condition
    conditions = sorted(line.split(",")[0] for line in lines[1:])
    assert conditions == ["full_srl", "no_srl"]
    assert capsys.readouterr().out.startswith("condition,")


def test_compare_with_no_reports_fails(tmp_path, capsys):
    empty = tmp_path / "empty"
    empty.mkdir()
    code = run_cli(["compare", "--in", str(empty), "--out", str(tmp_path / "c.csv")])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_validate_accepts_fixture_pack(capsys):
    assert run_cli(["validate", "--pack", FULL_PACK]) == 0
    assert capsys.readouterr().out.startswith("ok: llm-agents-101")


def test_validate_rejects_broken_pack(tmp_path, capsys):
    doc = json.loads((FIXTURES / "packs" / "minimal.json").read_text(encoding="utf-8"))
    doc["tasks"][0]["subtasks"][1]["depends_on"] = ["st-ghost"]
    bad = tmp_path / "broken.json"
    bad.write_text(json.dumps(doc), encoding="utf-8")
    assert run_cli(["validate", "--pack", str(bad)]) == 1
    assert "st-ghost" in capsys.readouterr().err


def test_validate_rejects_unparseable_file(tmp_path, capsys):
    bad = tmp_path / "nonsense.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run_cli(["validate", "--pack", str(bad)]) == 1
    assert "parse error" in capsys.readouterr().err


def test_parallel_runs_share_nothing(tmp_path):
    out = tmp_path / "par"
    code = run_cli(
        [
            "run",
            "--script",
            NO_SRL_SCRIPT,
            "--pack",
            FULL_PACK,
            "--seed",
            "2",
            "--parallel",
            "3",
            "--out",
            str(out),
            "--instruments",
            INSTRUMENTS,
        ]
    )
    assert code == 0
    reports = sorted(out.glob("*.report.json"))
    assert len(reports) == 3
    docs = [json.loads(p.read_text(encoding="utf-8")) for p in reports]
    assert len({d["session_id"] for d in docs}) == 3
    # identical scripts and seeds give identical outcomes
    for key in ("completed", "completion_rate", "event_count", "total_time_seconds"):
        assert len({json.dumps(d[key]) for d in docs}) == 1
