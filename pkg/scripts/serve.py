#!/usr/bin/env python3
"""Serve the learning-session HTTP API (and the built web UI, if present).

Examples:
    python3 scripts/serve.py --data /tmp/srl-data
    python3 scripts/serve.py --pack fixtures/packs/full.json --port 9000
"""

from __future__ import annotations

import argparse
from pathlib import Path

REPO_ROOT = Path(__file__).resolve().parents[1]

from srlsession.content import load_pack
from srlsession.gateway import Provider, ProviderConfig
from srlsession.harness import default_instruments_dir, load_instruments
from srlsession.service import ServiceConfig, SessionApp, create_app


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--pack",
        action="append",
        type=Path,
        default=None,
        help="content pack JSON (repeatable; defaults to the fixture packs)",
    )
    parser.add_argument("--data", type=Path, default=Path("/tmp/srlsession-data"))
    parser.add_argument("--instruments", type=Path, default=None)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8000)
    parser.add_argument("--seed", type=int, default=0, help="mock gateway seed")
    parser.add_argument(
        "--remote-llm",
        default=None,
        metavar="BASE_URL",
        help="use a real chat-completions endpoint instead of the deterministic mock",
    )
    parser.add_argument("--model", default="", help="model name for --remote-llm")
    return parser


def main() -> int:
    args = build_parser().parse_args()
    pack_paths = args.pack or sorted((REPO_ROOT / "fixtures" / "packs").glob("*.json"))
    packs = {}
    for path in pack_paths:
        if path.name.endswith(".schema.json"):
            continue
        pack = load_pack(path)
        packs[pack.pack_id] = pack
    if not packs:
        raise SystemExit("no content packs found")

    instruments_dir = args.instruments or default_instruments_dir()
    instruments = load_instruments(instruments_dir) if instruments_dir else {}

    if args.remote_llm:
        gateway = ProviderConfig(
            provider=Provider.REMOTE_HTTP, base_url=args.remote_llm, model=args.model
        )
    else:
        gateway = ProviderConfig(seed=args.seed)

    core = SessionApp(
        packs,
        ServiceConfig(data_dir=args.data, gateway=gateway),
        instruments=instruments,
    )
    app = create_app(core)

    import uvicorn

    print(f"packs: {', '.join(sorted(packs))}")
    print(f"instruments: {', '.join(sorted(instruments)) or '(none)'}")
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
