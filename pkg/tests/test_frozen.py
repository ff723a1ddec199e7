import json
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent / "frozen"))
from freeze import PATH, snapshot  # noqa: E402

FROZEN = json.loads(PATH.read_text())
CURRENT = snapshot()


@pytest.mark.parametrize("command", sorted(FROZEN))
def test_matches_frozen_output(command):
    assert CURRENT[command] == FROZEN[command]


def test_no_unfrozen_commands():
    assert set(CURRENT) == set(FROZEN)
