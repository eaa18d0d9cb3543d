"""
This module contains unit tests of the command line in run.py.
"""

import os
from typing import List
import pytest
import run
from data_types import UsageError


@pytest.mark.parametrize(
    "arguments",
    [
        ["run", "--scenario", "nowhere"],
        ["run", "--scenario", "oracle_small", "--seeds", "x..y"],
        ["run", "--scenario", "oracle_small", "--scheme", "magic"],
        ["run", "--scenario", "oracle_small", "--scheme", "icalo", "--scheme", "cca"],
        ["compare", "--scenario", "oracle_small", "--scheme", "cca", "--scheme", "cca"],
        ["run", "--scenario", "oracle_small", "--epochs", "0"],
    ],
)
def test_main__usage_error(tmp_path, capsys, arguments: List[str]) -> None:
    """
    This function tests that usage errors end with exit status 2 and a message on stderr.
    """
    status = run.main(arguments + ["--out", str(tmp_path)])
    assert status == 2
    assert "error: " in capsys.readouterr().err


def test_main__bad_scenario_file(tmp_path, capsys) -> None:
    """
    This function tests that a malformed scenario file is reported with its key path.
    """
    path = tmp_path / "bad.yaml"
    path.write_text("name: bad\ntau_ms: 1000\nepochs: 10\nnodes: []\n")
    assert run.main(["run", "--scenario", str(path), "--out", str(tmp_path)]) == 2
    assert "nodes[0].role" in capsys.readouterr().err


def test_main__run(tmp_path, capsys) -> None:
    """
    This function tests a short run of the agent on a built-in scenario.
    """
    # Act.
    status = run.main(
        [
            "run",
            "--scenario",
            "oracle_small",
            "--seeds",
            "1..2",
            "--epochs",
            "8",
            "--processes",
            "1",
            "--out",
            str(tmp_path),
        ]
    )

    # Assert.
    assert status == 0
    output = capsys.readouterr().out.splitlines()
    assert output[0] == "# scenario=oracle_small epoch_ms=1000 seeds=2"
    assert output[1].startswith("icalo: steady state ")
    assert {"icalo_seed1.csv", "icalo_seed2.csv", "runs.csv", "summary.csv"} <= set(
        os.listdir(tmp_path)
    )


def test_schemes_of() -> None:
    """
    This function tests the default schemes of each command.
    """
    assert run.schemes_of(None, "compare") == ["icalo", "clica", "cca", "single"]
    assert run.schemes_of(None, "oracle") == ["icalo"]
    assert run.schemes_of(["ugrl"], "run") == ["ugrl"]
    with pytest.raises(UsageError, match="takes one scheme"):
        run.schemes_of(["icalo", "ugrl"], "resilience")


def test_resolve_scenario(tmp_path) -> None:
    """
    This function tests resolve_scenario() with a built-in name and an unknown name.
    """
    assert run.resolve_scenario("oracle_small").scenario.name == "oracle_small"
    with pytest.raises(UsageError, match="No such scenario"):
        run.resolve_scenario(str(tmp_path / "missing.yaml"))
