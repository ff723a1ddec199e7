import random

import pytest

from orhier.complex import Presentation
from orhier.covers import CyclicCoverSpec, minimal_tree_domain, splitting_from_domain
from orhier.freegroup import Alphabet, free_reduce, parse_letters

STABLE_EXAMPLE = "a b | bbaaBabaaBBAA"
BS_EXAMPLE = "a b t | taaTbaBtaTbaB"


def pres(text):
    return Presentation.parse(text)


def cx(text):
    return Presentation.parse(text).complex()


def word(text, names="ab"):
    return free_reduce(parse_letters(text, Alphabet(tuple(names))))


def splitting(text, phi):
    X = cx(text)
    return splitting_from_domain(minimal_tree_domain(CyclicCoverSpec.parse(X, phi)))


NON_STABLE = (1, 2, -1, -1, 2, 1, 1, 1, -2, -2, -2, -2)


def non_stable_split():
    """A free-vertex splitting whose families never empty."""
    from orhier.complex import OneRelatorComplex
    from orhier.hierarchy import candidate_covers, tower_step

    X = OneRelatorComplex.rose(2, NON_STABLE)
    return tower_step(X, candidate_covers(X)[0]).splitting


def random_cyclic_word(rng, rank, length, use_all=True):
    if use_all and length < rank:
        raise ValueError("a word shorter than the rank cannot use every generator")
    letters = [g * s for g in range(1, rank + 1) for s in (1, -1)]
    while True:
        w = []
        while len(w) < length:
            x = rng.choice(letters)
            if w and w[-1] == -x:
                continue
            w.append(x)
        if w[0] == -w[-1]:
            continue
        if use_all and len({abs(x) for x in w}) < rank:
            continue
        return tuple(w)


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def stable_split():
    return splitting(STABLE_EXAMPLE, "exp(b)")


@pytest.fixture(scope="session")
def bs_split():
    return splitting(BS_EXAMPLE, "exp(t)")


# Acceptance reporting: one line per criterion after the run.

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    marker = getattr(report, "criterion", None)
    if marker is None or (report.when != "call" and report.passed):
        return
    number, title = marker
    entry = _criteria.setdefault(number, {"title": title, "ok": True})
    entry["ok"] = entry["ok"] and report.passed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        outcome.get_result().criterion = tuple(marker.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if entry['ok'] else 'FAIL'}  {entry['title']}")
