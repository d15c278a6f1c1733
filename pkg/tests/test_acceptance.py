"""Release gate: every acceptance criterion at its stated tolerance.

Each criterion prints its one-line verdict (run pytest with -s to see them
all); the same battery backs the ``chronodyn verify`` command, whose exit
code is checked here end to end.
"""

import subprocess
import sys

import pytest

from chronodyn.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize(
    "cid,label", [(num, label) for num, label, _ in CRITERIA], ids=lambda v: str(v)
)
def test_criterion(cid, label):
    result = run_criterion(cid)
    status = "PASS" if result.passed else "FAIL"
    print(f"[{status}] criterion {cid:2d}: {result.description} -- {result.details}")
    assert result.passed, f"criterion {cid} ({label}): {result.details}"


def test_verify_command_exits_zero():
    proc = subprocess.run(
        [sys.executable, "-m", "chronodyn.cli", "verify"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "10/10 criteria passed" in proc.stdout
