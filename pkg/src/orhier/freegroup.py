"""Words in free groups, cyclic words, abelianization and Whitehead primitivity.

A word is a tuple of nonzero ints: ``k`` stands for generator ``k-1`` and
``-k`` for its inverse.  The wire format writes generators as lowercase
letters and inverses as the matching uppercase letter, so ``"taT"`` is
``t a t^-1``.

Examples
--------
>>> alphabet = Alphabet.standard(2)
>>> alphabet.format(free_reduce(alphabet.parse("abBa")))
'aa'
>>> period_degree(alphabet.parse("abab"))
2
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import networkx as nx

from . import kernels

Word = tuple

INFINITY = math.inf


class WordSyntaxError(ValueError):
    """Raised when a word does not parse; ``position`` is the offending index."""

    def __init__(self, message, position=None):
        super().__init__(message if position is None else f"{message} at position {position}")
        self.position = position


@dataclass(frozen=True)
class Alphabet:
    names: tuple

    def __post_init__(self):
        if not self.names:
            raise ValueError("alphabet must have at least one generator")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        for name in self.names:
            if not (len(name) == 1 and name.islower()):
                raise ValueError(f"generator names must be single lowercase letters, got {name!r}")

    @classmethod
    def standard(cls, rank):
        return cls(tuple("abcdefghijklmnopqrstuvwxyz"[:rank]))

    @classmethod
    def of(cls, names: Iterable[str]):
        return cls(tuple(names))

    @property
    def rank(self):
        return len(self.names)

    def letter(self, ch):
        low = ch.lower()
        try:
            idx = self.names.index(low)
        except ValueError:
            return None
        return idx + 1 if ch.islower() else -(idx + 1)

    def parse(self, text: str) -> Word:
        return free_reduce(parse_letters(text, self))

    def format(self, word: Sequence[int]) -> str:
        out = []
        for x in word:
            name = self.names[abs(x) - 1]
            out.append(name if x > 0 else name.upper())
        return "".join(out)


def parse_letters(text: str, alphabet: Alphabet) -> list:
    """Parse ``text`` into an unreduced letter list.

    Accepts juxtaposed letters, uppercase inverses, parenthesised groups and
    ``^k`` exponents (``k`` may be negative) after a letter or a group.
    """
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def exponent(seq):
        nonlocal pos
        skip()
        if pos < n and text[pos] == "^":
            pos += 1
            skip()
            m = re.match(r"[+-]?\d+", text[pos:])
            if not m:
                raise WordSyntaxError("expected integer exponent", pos)
            k = int(m.group())
            pos += m.end()
            return power_letters(seq, k)
        return seq

    def group():
        nonlocal pos
        out = []
        while True:
            skip()
            if pos >= n or text[pos] == ")":
                return out
            ch = text[pos]
            if ch == "(":
                pos += 1
                inner = group()
                if pos >= n or text[pos] != ")":
                    raise WordSyntaxError("unbalanced parenthesis", pos)
                pos += 1
                out.extend(exponent(inner))
            elif ch in "1ε" and not out and (pos + 1 >= n or text[pos + 1] in " )"):
                pos += 1
            elif ch.isalpha():
                x = alphabet.letter(ch)
                if x is None:
                    raise WordSyntaxError(f"unknown generator {ch!r}", pos)
                pos += 1
                out.extend(exponent([x]))
            else:
                raise WordSyntaxError(f"unexpected character {ch!r}", pos)

    result = group()
    if pos < n:
        raise WordSyntaxError("unbalanced parenthesis", pos)
    return result


def power_letters(seq, k):
    if k >= 0:
        return list(seq) * k
    return [-x for x in reversed(seq)] * (-k)


def free_reduce(letters: Iterable[int]) -> Word:
    return kernels.free_reduce(list(letters))


def inverse(word: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(word))


def multiply(*words: Sequence[int]) -> Word:
    out = []
    for w in words:
        out.extend(w)
    return kernels.free_reduce(out)


def power(word: Sequence[int], k: int) -> Word:
    return kernels.free_reduce(power_letters(word, k))


def conjugate(word: Sequence[int], by: Sequence[int]) -> Word:
    """``by^-1 word by``."""
    return multiply(inverse(by), word, by)


def cyclic_reduce(word: Sequence[int]):
    """Return ``(cyclic, conjugator)`` with ``word = conjugator cyclic conjugator^-1``."""
    w = kernels.free_reduce(list(word))
    i, j = kernels.cyclic_core(w)
    return w[i:j], w[:i]


def is_cyclically_reduced(word: Sequence[int]) -> bool:
    w = tuple(word)
    if kernels.free_reduce(list(w)) != w:
        return False
    return len(w) < 2 or w[0] != -w[-1]


def period_degree(cyclic: Sequence[int]) -> int:
    """Largest ``d`` such that the cyclic word is a ``d``-th power."""
    c = tuple(cyclic)
    if not c:
        raise ValueError("period_degree needs a nonempty cyclic word")
    n = len(c)
    pi = kernels.prefix_function(c)
    p = n - pi[-1]
    return n // p if n % p == 0 else 1


def primitive_root(cyclic: Sequence[int]):
    """Return ``(root, degree)`` with ``cyclic == root * degree``."""
    c = tuple(cyclic)
    d = period_degree(c)
    return c[: len(c) // d], d


def abelianize(word: Sequence[int], rank: int) -> tuple:
    vec = [0] * rank
    for x in word:
        vec[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(vec)


def rotations(cyclic: Sequence[int]):
    c = tuple(cyclic)
    return [c[i:] + c[:i] for i in range(len(c))] or [()]


def cyclic_normal_form(cyclic: Sequence[int], allow_inverse: bool = False) -> Word:
    """Least rotation (optionally also over the inverse), used as a conjugacy key."""
    c, _ = cyclic_reduce(cyclic)
    best = min(rotations(c))
    if allow_inverse:
        best = min(best, min(rotations(inverse(c))))
    return best


def word_rank(word: Sequence[int]) -> int:
    return max((abs(x) for x in word), default=0)


def rotation_offset(source: Sequence[int], target: Sequence[int]):
    """Index ``i`` with ``source[i:] + source[:i] == target``, or None."""
    s, t = tuple(source), tuple(target)
    if len(s) != len(t):
        return None
    if not s:
        return 0
    doubled = s + s
    for i in range(len(s)):
        if doubled[i : i + len(s)] == t:
            return i
    return None


# Whitehead minimization


def _vertex(letter):
    return 2 * (letter - 1) if letter > 0 else 2 * (-letter - 1) + 1


def _letter(vertex):
    g = vertex // 2 + 1
    return g if vertex % 2 == 0 else -g


def whitehead_images(rank, pivot, side):
    """Images of the generators under the Whitehead automorphism ``(side, pivot)``.

    ``side`` is a set of letters containing ``pivot`` but not ``-pivot``.
    """
    images = []
    for g in range(1, rank + 1):
        if g == abs(pivot):
            images.append((g,))
            continue
        plus, minus = g in side, -g in side
        if plus and minus:
            images.append((-pivot, g, pivot))
        elif plus:
            images.append((g, pivot))
        elif minus:
            images.append((-pivot, g))
        else:
            images.append((g,))
    return images


def _cut_for(counts, rank, pivot):
    size = 2 * rank
    graph = nx.Graph()
    graph.add_nodes_from(range(size))
    for u in range(size):
        for v in range(u + 1, size):
            c = counts[u * size + v]
            if c:
                graph.add_edge(u, v, capacity=c)
    value, (source_side, _) = nx.minimum_cut(graph, _vertex(pivot), _vertex(-pivot))
    return value, {_letter(v) for v in source_side}


def whitehead_step(cyclic: Word, rank: int):
    """One strictly length-decreasing Whitehead move, or None at a local minimum."""
    if len(cyclic) <= 1:
        return None
    counts = kernels.whitehead_graph(tuple(cyclic), rank)
    size = 2 * rank
    for g in range(1, rank + 1):
        for pivot in (g, -g):
            u = _vertex(pivot)
            degree = sum(counts[u * size + v] for v in range(size))
            if degree == 0:
                continue
            value, side = _cut_for(counts, rank, pivot)
            if value < degree:
                image = kernels.substitute(tuple(cyclic), whitehead_images(rank, pivot, side))
                reduced, _ = cyclic_reduce(image)
                if len(reduced) < len(cyclic):
                    return reduced
    return None


def whitehead_minimize(cyclic: Sequence[int], rank: int | None = None) -> Word:
    """A shortest cyclic word in the automorphic orbit of ``cyclic``.

    Strictly decreasing Whitehead moves suffice: a word that is not of minimal
    length in its orbit always admits one.
    """
    c, _ = cyclic_reduce(cyclic)
    if rank is None:
        rank = word_rank(c)
    while True:
        nxt = whitehead_step(c, rank)
        if nxt is None:
            return c
        c = nxt


def _whitehead_move(cyclic, rank):
    """Like :func:`whitehead_step` but also return ``(pivot, side)``."""
    if len(cyclic) <= 1:
        return None
    counts = kernels.whitehead_graph(tuple(cyclic), rank)
    size = 2 * rank
    for g in range(1, rank + 1):
        for pivot in (g, -g):
            u = _vertex(pivot)
            degree = sum(counts[u * size + v] for v in range(size))
            if degree == 0:
                continue
            value, side = _cut_for(counts, rank, pivot)
            if value < degree:
                image = kernels.substitute(tuple(cyclic), whitehead_images(rank, pivot, side))
                reduced, _ = cyclic_reduce(image)
                if len(reduced) < len(cyclic):
                    return reduced, pivot, side
    return None


def whitehead_minimize_tracked(cyclic: Sequence[int], rank: int):
    """Minimize and return ``(minimal, images, inverse_images)``.

    ``images[k]`` is the image of generator ``k+1`` under an automorphism
    taking ``cyclic`` to a conjugate of ``minimal``; ``inverse_images``
    describes its inverse.
    """
    c, _ = cyclic_reduce(cyclic)
    identity = [(g,) for g in range(1, rank + 1)]
    images, inverse_images = list(identity), list(identity)
    while True:
        move = _whitehead_move(c, rank)
        if move is None:
            return c, images, inverse_images
        c, pivot, side = move
        forward = whitehead_images(rank, pivot, side)
        back_side = (set(side) - {pivot}) | {-pivot}
        backward = whitehead_images(rank, -pivot, back_side)
        images = [kernels.substitute(tuple(w), forward) for w in images]
        inverse_images = [kernels.substitute(tuple(w), inverse_images) for w in backward]


def is_primitive(word: Sequence[int], rank: int | None = None) -> bool:
    c, _ = cyclic_reduce(word)
    if not c:
        return False
    return len(whitehead_minimize(c, rank)) == 1


def is_primitive_power(word: Sequence[int], rank: int | None = None) -> bool:
    c, _ = cyclic_reduce(word)
    if not c:
        return False
    root, _ = primitive_root(c)
    return is_primitive(root, rank)


@lru_cache(maxsize=4096)
def _primitive_cached(word, rank):
    return is_primitive(word, rank)


def primitivity_rank(word: Sequence[int], budget: int = 16):
    """Minimal rank of a subgroup containing ``word`` as an imprimitive element.

    Returns ``math.inf`` for primitive words.  Raises ``ValueError`` when the
    cyclic reduction is longer than ``budget``.
    """
    rank, _ = _primitivity_search(word, budget)
    return rank


def w_subgroups(word: Sequence[int], budget: int = 16):
    """Core graphs of the subgroups realising the primitivity rank maximally."""
    _, found = _primitivity_search(word, budget)
    return found


def _primitivity_search(word, budget):
    from .stallings import quotients_of_cycle

    c, _ = cyclic_reduce(word)
    if not c:
        raise ValueError("primitivity rank needs a nonempty word")
    if len(c) > budget:
        raise ValueError(f"word length {len(c)} exceeds search budget {budget}")
    if is_primitive(c):
        return INFINITY, []

    def imprimitive_in(graph):
        expressed = graph.express(c)
        return not _primitive_cached(expressed, graph.rank)

    quotients = quotients_of_cycle(c)
    best = min(g.rank for g in quotients.values() if imprimitive_in(g))
    candidates = [g for g in quotients.values() if g.rank == best and imprimitive_in(g)]
    maximal = []
    for g in candidates:
        below = quotients_of_cycle(c, start=g)
        if not any(h.rank <= best and h.key() != g.key() for h in below.values()):
            maximal.append(g)
    maximal.sort(key=lambda g: g.key())
    return best, maximal
