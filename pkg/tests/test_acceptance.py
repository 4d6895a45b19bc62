"""The ten acceptance criteria, each at its stated tolerance.

Every test prints one ``[PASS]``/``[FAIL]`` line, visible with ``pytest -v``
or ``-s``.
"""
import pytest

from catcode.acceptance import CRITERIA, run_criterion
from catcode.cli import main

TIME_LIMITS = {1: 10.0, 4: 30.0, 7: 120.0}


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[c[1].replace(" ", "_") for c in CRITERIA])
def test_criterion(number, capsys):
    res = run_criterion(number)
    with capsys.disabled():
        print("\n" + res.line())
    assert res.passed, res.detail
    if number in TIME_LIMITS:
        assert res.seconds < TIME_LIMITS[number]


def test_verify_command_exit_code():
    assert main(["verify"]) == 0
