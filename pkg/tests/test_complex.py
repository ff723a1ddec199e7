from fractions import Fraction

import pytest

from conftest import cx
from orhier.complex import ComplexError, OneRelatorComplex, Presentation, magnus_check
from orhier.freegroup import WordSyntaxError

TREE_EXAMPLE = "a b c | babccBABacAAccca"


def test_validate_examples():
    cx("a b | abAB").validate()
    cx(TREE_EXAMPLE).validate()
    with pytest.raises(ComplexError):
        OneRelatorComplex.rose(2, (1, -1, 2)).validate()


def test_complexity_examples():
    assert cx("a b | abAB").complexity() == (Fraction(3), 1)
    assert OneRelatorComplex.rose(1, (1, 1, 1)).complexity() == (0, 0)


def test_complexity_zero_exactly_for_cycles():
    assert OneRelatorComplex.rose(1, (1,)).complexity() == (0, 0)
    assert cx("a b | aab").complexity() != (0, 0)


def test_complexity_invariant_under_rotation_and_inversion():
    X = cx("a b | bbaaBabaaBBAA")
    rel = X.relator
    for i in range(len(rel)):
        rotated = OneRelatorComplex.rose(2, rel[i:] + rel[:i])
        assert rotated.complexity() == X.complexity()
    inverted = OneRelatorComplex.rose(2, tuple(-x for x in reversed(rel)))
    assert inverted.complexity() == X.complexity()
    swapped = OneRelatorComplex.rose(2, tuple((3 - abs(x)) * (1 if x > 0 else -1) for x in rel))
    assert swapped.complexity() == X.complexity()


def test_magnus_check_examples():
    X = cx("a b | abAB")
    assert magnus_check(X, [], [0])
    assert not magnus_check(X, [0, 1])
    assert magnus_check(X, [0])


def test_presentation_formats_round_trip():
    p = Presentation.parse("gens: a b t ; relator: taaTbaBtaTbaB")
    q = Presentation.parse("a b t | taaTbaBtaTbaB")
    assert p == q
    assert Presentation.parse(p.format()) == p
    r = Presentation.parse("a b | (ab)^2 a^-1")
    assert r.alphabet.format(r.relator) == "bab" and r.reduced


def test_presentation_reports_cyclic_reduction():
    p = Presentation.parse("a b | abaBA")
    assert p.reduced and p.alphabet.format(p.relator) == "a"
    assert not Presentation.parse("a b | abAB").reduced


@pytest.mark.parametrize("text", ["a b abAB", "a b | abXB", "| ab"])
def test_presentation_errors(text):
    with pytest.raises(WordSyntaxError):
        Presentation.parse(text)


def test_dict_round_trip():
    X = cx(TREE_EXAMPLE)
    assert OneRelatorComplex.from_dict(X.to_dict()).key() == X.key()
