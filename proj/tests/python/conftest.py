import json
import os
import pathlib
import shutil
import subprocess

import pytest

ROOT = pathlib.Path(os.environ.get("SPARSEGF2_ROOT", pathlib.Path(__file__).resolve().parents[2]))


def _find_cli():
    env = os.environ.get("SPARSEGF2_CLI")
    if env and pathlib.Path(env).exists():
        return env
    local = ROOT / "build" / "tools" / "sparsegf2"
    if local.exists():
        return str(local)
    return shutil.which("sparsegf2")


@pytest.fixture(scope="session")
def cli():
    exe = _find_cli()
    if exe is None:
        pytest.skip("sparsegf2 executable not built")

    def run(*args, check=True):
        proc = subprocess.run([exe, *map(str, args)], capture_output=True, text=True, timeout=600)
        if check and proc.returncode != 0:
            raise AssertionError(f"exit {proc.returncode}: {proc.stderr}")
        return proc

    return run


@pytest.fixture(scope="session")
def cli_json(cli):
    def run(*args):
        return json.loads(cli(*args).stdout)

    return run


@pytest.fixture(scope="session")
def schema():
    return json.loads((ROOT / "docs" / "schema.json").read_text())
