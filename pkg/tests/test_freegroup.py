import math

import pytest

from conftest import random_cyclic_word, word
from oracles.brute import cyclic_words, nielsen_primitive_classes, reduced_words
from orhier.freegroup import (
    Alphabet,
    WordSyntaxError,
    abelianize,
    cyclic_normal_form,
    cyclic_reduce,
    free_reduce,
    inverse,
    is_primitive,
    multiply,
    period_degree,
    power,
    primitivity_rank,
    whitehead_minimize,
)
from orhier.covers import primitive_z2

AB = Alphabet.standard(2)


def test_free_reduce_examples():
    assert word("aA") == ()
    assert word("abBa") == (1, 1)
    xyz = Alphabet(("x", "y", "z"))
    rel = xyz.parse("zzyzzXX")
    assert free_reduce(rel) == rel


def test_parse_powers_and_groups():
    assert AB.parse("(ab)^3") == (1, 2) * 3
    assert AB.parse("a^-2") == (-1, -1)
    assert AB.parse("(aB)^-1") == (2, -1)
    assert AB.format(AB.parse("taT".replace("t", "b").replace("T", "B"))) == "baB"


@pytest.mark.parametrize("text", ["ab)", "(ab", "a^", "ac", "a+b"])
def test_parse_errors_carry_position(text):
    with pytest.raises(WordSyntaxError) as err:
        AB.parse(text)
    assert err.value.position is not None or "unknown" in str(err.value)


def test_cyclic_reduce_examples():
    assert cyclic_reduce(word("abA")) == ((2,), (1,))
    assert cyclic_reduce(word("baBA")) == (word("baBA"), ())
    raw = (-1, 1, 2, 1)
    core, conj = cyclic_reduce(raw)
    assert core == (2, 1) and conj == ()
    unreduced = (-1, 2, 1, 1)
    core, conj = cyclic_reduce(unreduced)
    assert multiply(conj, core, inverse(conj)) == free_reduce(unreduced)
    assert (core, conj) == ((2, 1), (-1,))


def test_period_degree_examples():
    assert period_degree(word("abab")) == 2
    assert period_degree(word("babAB")) == 1
    assert period_degree(word("ababab")) == 3


def test_period_degree_scales_with_powers(rng):
    for _ in range(40):
        c = random_cyclic_word(rng, 2, rng.randint(2, 7))
        if period_degree(c) != 1:
            continue
        for k in range(1, 6):
            assert period_degree(c * k) == k


def test_abelianize_examples_and_homomorphism(rng):
    assert abelianize(word("abAB"), 2) == (0, 0)
    assert abelianize(primitive_z2(5, 3), 2) == (5, 3)
    assert abelianize((), 2) == (0, 0)
    for _ in range(50):
        u = random_cyclic_word(rng, 2, rng.randint(1, 8), use_all=False)
        v = random_cyclic_word(rng, 2, rng.randint(1, 8), use_all=False)
        lhs = abelianize(multiply(u, v), 2)
        assert lhs == tuple(a + b for a, b in zip(abelianize(u, 2), abelianize(v, 2)))


def test_free_reduce_idempotent_and_associative(rng):
    for _ in range(100):
        raw = [rng.choice([1, -1, 2, -2, 3, -3]) for _ in range(rng.randint(0, 14))]
        r = free_reduce(raw)
        assert free_reduce(r) == r and len(r) <= len(raw)
        u, v, w = (tuple(rng.choice([1, -1, 2, -2]) for _ in range(4)) for _ in range(3))
        assert multiply(multiply(u, v), w) == multiply(u, multiply(v, w))
        assert multiply(u, inverse(u)) == ()


def test_is_primitive_examples():
    assert is_primitive((1,), 2)
    assert not is_primitive(word("aabb"), 2)
    assert is_primitive(primitive_z2(5, 3), 2)
    assert not is_primitive(word("abAB"), 2)


def test_is_primitive_invariances(rng):
    swap = {1: 2, -1: -2, 2: 1, -2: -1}
    for _ in range(60):
        w = random_cyclic_word(rng, 2, rng.randint(1, 9), use_all=False)
        p = is_primitive(w, 2)
        assert is_primitive(inverse(w), 2) == p
        g = (rng.choice([1, 2, -1, -2]),)
        assert is_primitive(multiply(g, w, inverse(g)), 2) == p
        assert is_primitive(tuple(swap[x] for x in w), 2) == p


def test_is_primitive_matches_nielsen_orbit():
    classes = nielsen_primitive_classes(8, 10)
    for length in range(1, 9):
        for w in cyclic_words(2, length):
            assert is_primitive(w, 2) == (cyclic_normal_form(w, allow_inverse=True) in classes), w


def test_whitehead_minimize_never_lengthens(rng):
    for _ in range(40):
        w = random_cyclic_word(rng, 3, rng.randint(2, 10), use_all=False)
        assert len(whitehead_minimize(w, 3)) <= len(w)


def test_primitivity_rank_examples():
    assert primitivity_rank((1,)) == math.inf
    assert primitivity_rank(word("aa")) == 1
    assert primitivity_rank(word("abAB")) == 2
    assert primitivity_rank(word("aabb")) == 2


def test_primitivity_rank_properties():
    for w in reduced_words(2, 6):
        c, _ = cyclic_reduce(w)
        if not c:
            continue
        pi = primitivity_rank(c)
        if is_primitive(c, 2):
            assert pi == math.inf
        else:
            assert pi <= 2
            assert (pi == 1) == (period_degree(c) > 1)


def test_primitivity_rank_budget():
    with pytest.raises(ValueError):
        primitivity_rank(word("ab" * 9), budget=16)


def test_power_and_inverse():
    assert power(word("ab"), -2) == word("BABA")
    assert power(word("ab"), 0) == ()
