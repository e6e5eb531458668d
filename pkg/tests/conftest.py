from __future__ import annotations

import sys
from pathlib import Path

import pytest

TESTS_DIR = Path(__file__).resolve().parent
REPO_ROOT = TESTS_DIR.parent
FIXTURES = REPO_ROOT / "fixtures"

if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

from srlsession.content import load_pack
from srlsession.gateway import ProviderConfig
from srlsession.harness import load_instruments
from srlsession.service import ServiceConfig, SessionApp


@pytest.fixture(scope="session")
def full_pack():
    return load_pack(FIXTURES / "packs" / "full.json")


@pytest.fixture(scope="session")
def minimal_pack():
    return load_pack(FIXTURES / "packs" / "minimal.json")


@pytest.fixture(scope="session")
def instruments():
    return load_instruments(FIXTURES / "instruments")


@pytest.fixture()
def app_factory(full_pack, minimal_pack, instruments, tmp_path):
    """Build a fresh SessionApp over both fixture packs in a private data dir."""

    counter = {"n": 0}

    def build(seed: int = 0, snapshot_every: int = 50, data_dir: Path | None = None) -> SessionApp:
        counter["n"] += 1
        directory = data_dir or tmp_path / f"data{counter['n']}"
        return SessionApp(
            {full_pack.pack_id: full_pack, minimal_pack.pack_id: minimal_pack},
            ServiceConfig(
                data_dir=directory,
                gateway=ProviderConfig(seed=seed),
                snapshot_every=snapshot_every,
            ),
            instruments=instruments,
        )

    return build


@pytest.fixture()
def app(app_factory):
    return app_factory()
