"""Regenerate ``derived.json``: JSON outputs of the CLI on fixed inputs.

Run ``python tests/frozen/freeze.py`` after an intentional change in behaviour.
"""

import contextlib
import io
import json
from pathlib import Path

from orhier.cli import main

STABLE = "a b | bbaaBabaaBBAA"
BS = "a b t | taaTbaBtaTbaB"

COMMANDS = [
    ("prim-z2", "5", "3"),
    ("prim-z2", "-4", "7"),
    ("tree-domain", "a b |", "--phi", "a=5 b=3"),
    ("hlen", "a t | TaatAAA"),
    ("hlen", "a t | TataaTAtAAA"),
    ("hierarchy", STABLE),
    ("stable", STABLE),
    ("stable", BS),
    ("gocs", STABLE),
    ("gocs", BS),
    ("bs-detect", STABLE),
    ("bs-detect", BS),
    ("bs-detect", "a b | abAB"),
    ("brown", "TatAA"),
    ("brown", "abAB"),
    ("brown", "aabbab"),
    ("brown", "bbaaBabaaBBAA"),
    ("primrank", "abAB"),
]

PATH = Path(__file__).with_name("derived.json")


def snapshot():
    out = {}
    for argv in COMMANDS:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf), contextlib.redirect_stderr(io.StringIO()):
            code = main(["--json", *argv])
        out[" ".join(argv)] = {"exit": code, "output": json.loads(buf.getvalue())}
    return out


if __name__ == "__main__":
    PATH.write_text(json.dumps(snapshot(), indent=1, sort_keys=True) + "\n")
    print(f"wrote {len(COMMANDS)} entries to {PATH}")
