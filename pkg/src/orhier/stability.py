"""HNN splittings of one-relator groups and their stable number.

A splitting is ``G = <H, t | t a t^-1 = psi(a), a in A>`` where ``H`` is a
one-relator group on the vertex generators and ``psi`` sends the ``k``-th
basis word of ``A`` to the ``k``-th basis word of ``B``.

When ``H`` is free (trivial relator, or a primitive relator) a
:class:`FreeChart` moves words into free coordinates, where subgroup
questions reduce to Stallings graphs.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from . import kernels
from .freegroup import (
    cyclic_reduce,
    free_reduce,
    inverse,
    is_primitive,
    multiply,
    whitehead_minimize_tracked,
)
from .stallings import GeneratedSubgroup, pullback, subgroup_graph

VERTEX_NAMES = "xyzwvutsrqponmlkjihgfedcba"


class Regime(enum.Enum):
    FREE_VERTEX = "FreeVertex"
    IMPRIMITIVE_RELATOR = "ImprimitiveRelator"
    UNSUPPORTED = "Unsupported"


def substitute(word, images):
    return kernels.substitute(tuple(word), [tuple(w) for w in images])


@dataclass(frozen=True)
class FreeChart:
    """Isomorphism between a free one-relator group and a free group.

    ``rho`` sends vertex generator ``k+1`` to a word avoiding ``eliminated``;
    ``sigma`` sends each kept letter back to a vertex word.
    """

    rank: int
    eliminated: int | None
    rho: tuple
    sigma: tuple

    @classmethod
    def identity(cls, rank):
        ident = tuple((g,) for g in range(1, rank + 1))
        return cls(rank, None, ident, ident)

    @classmethod
    def for_relator(cls, rank, relator):
        """Chart for ``<gens | relator>``, or None if that group is not free."""
        rel, _ = cyclic_reduce(relator)
        if not rel:
            return cls.identity(rank)
        if not is_primitive(rel, rank):
            return None
        counts = {}
        for x in rel:
            counts[abs(x)] = counts.get(abs(x), 0) + 1
        single = sorted(g for g, c in counts.items() if c == 1)
        ident = [(g,) for g in range(1, rank + 1)]
        if single:
            g = single[0]
            pos = next(i for i, x in enumerate(rel) if abs(x) == g)
            before, after = rel[:pos], rel[pos + 1 :]
            value = multiply(inverse(before), inverse(after))
            if rel[pos] < 0:
                value = inverse(value)
            rho = list(ident)
            rho[g - 1] = value
            sigma = list(ident)
            sigma[g - 1] = ()
            return cls(rank, g, tuple(rho), tuple(sigma))
        minimal, images, inverse_images = whitehead_minimize_tracked(rel, rank)
        g = abs(minimal[0])
        rho = tuple(tuple(x for x in w if abs(x) != g) for w in images)
        rho = tuple(free_reduce(w) for w in rho)
        sigma = list(inverse_images)
        sigma[g - 1] = ()
        return cls(rank, g, rho, tuple(sigma))

    @property
    def letters(self):
        return [g for g in range(1, self.rank + 1) if g != self.eliminated]

    def to_free(self, word):
        return substitute(word, self.rho)

    def to_vertex(self, word):
        return substitute(word, self.sigma)


@dataclass(frozen=True)
class HNNSplitting:
    """Vertex presentation, edge group bases and provenance for an HNN splitting.

    ``vertex_images[k]`` and ``stable_image`` express vertex generator ``k+1``
    and the stable letter as words over the parent generators;
    ``parent_images[j]`` is parent generator ``j+1`` as a list of syllables
    ``(vertex_word, t_exponent)``.
    """

    names: tuple
    relator: tuple
    a_basis: tuple
    b_basis: tuple
    a_letters: frozenset | None = None
    b_letters: frozenset | None = None
    vertex_images: tuple | None = None
    stable_image: tuple | None = None
    parent_images: tuple | None = None
    parent_names: tuple | None = None

    @property
    def rank(self):
        return len(self.names)

    @cached_property
    def chart(self):
        return FreeChart.for_relator(self.rank, self.relator)

    @property
    def regime(self):
        if self.chart is not None:
            return Regime.FREE_VERTEX
        if self.a_letters is not None and self.b_letters is not None:
            return Regime.IMPRIMITIVE_RELATOR
        return Regime.UNSUPPORTED

    def format(self, word):
        return "".join(self.names[abs(x) - 1] if x > 0 else self.names[abs(x) - 1].upper() for x in word)

    def coordinates(self):
        """``(to_coords, from_coords)`` for the ambient free group used by the families."""
        if self.chart is not None:
            return self.chart.to_free, self.chart.to_vertex
        return (lambda w: free_reduce(w)), (lambda w: free_reduce(w))

    @cached_property
    def free_a(self):
        to, _ = self.coordinates()
        return tuple(to(w) for w in self.a_basis)

    @cached_property
    def free_b(self):
        to, _ = self.coordinates()
        return tuple(to(w) for w in self.b_basis)

    @cached_property
    def a_graph(self):
        return subgroup_graph(self.free_a)

    @cached_property
    def b_graph(self):
        return subgroup_graph(self.free_b)

    @cached_property
    def h_graph(self):
        if self.chart is not None:
            return subgroup_graph([(g,) for g in self.chart.letters])
        return subgroup_graph([(g,) for g in range(1, self.rank + 1)])

    @cached_property
    def _a_sub(self):
        return GeneratedSubgroup(self.free_a)

    @cached_property
    def _b_sub(self):
        return GeneratedSubgroup(self.free_b)

    def psi(self, word):
        """``psi`` on a free-coordinate word of ``A``; None when outside ``A``."""
        expressed = self._a_sub.express(word)
        if expressed is None:
            return None
        return substitute(expressed, self.free_b)

    def psi_inverse(self, word):
        expressed = self._b_sub.express(word)
        if expressed is None:
            return None
        return substitute(expressed, self.free_a)

    def inverted(self):
        """The splitting of the same group with stable letter ``t^-1``."""
        return HNNSplitting(self.names, self.relator, self.b_basis, self.a_basis, self.b_letters, self.a_letters)

    # Normal forms

    def britton_reduce(self, syllables):
        """Britton-reduce a list of ``(vertex_word, t_exponent)`` syllables.

        Each syllable stands for ``vertex_word * t^t_exponent``.  Returns
        tokens ``("h", free_word)`` and ``("t", +-1)`` in reduced form.  Needs a free vertex group.
        """
        if self.chart is None:
            raise ValueError("normal forms need a free vertex group")
        items = []
        for word, e in syllables:
            items.append(("h", self.chart.to_free(word)))
            step = 1 if e > 0 else -1
            for _ in range(abs(e)):
                items.append(("t", step))
        stack = []
        for kind, value in items:
            if kind == "h":
                if stack and stack[-1][0] == "h":
                    stack[-1] = ("h", multiply(stack[-1][1], value))
                else:
                    stack.append(("h", value))
                continue
            pinched = False
            if len(stack) >= 2 and stack[-1][0] == "h" and stack[-2][0] == "t" and stack[-2][1] == -value:
                middle = stack[-1][1]
                image = self.psi(middle) if value < 0 else self.psi_inverse(middle)
                if image is not None:
                    stack.pop()
                    stack.pop()
                    pinched = True
            elif stack and stack[-1][0] == "t" and stack[-1][1] == -value:
                stack.pop()
                image = ()
                pinched = True
            if pinched:
                if stack and stack[-1][0] == "h":
                    stack[-1] = ("h", multiply(stack[-1][1], image))
                else:
                    stack.append(("h", image))
            else:
                stack.append(("t", value))
        return [(k, v) for k, v in stack if not (k == "h" and not v)]

    def is_trivial(self, syllables):
        return not self.britton_reduce(syllables)

    def parent_word_to_syllables(self, word):
        if self.parent_images is None:
            raise ValueError("splitting has no parent images")
        out = []
        for x in word:
            image = self.parent_images[abs(x) - 1]
            if x < 0:
                flipped = []
                for w, e in reversed(image):
                    flipped.append(((), -e))
                    flipped.append((inverse(w), 0))
                image = flipped
            out.extend(image)
        return out


# Families of conjugacy classes


class StabilityError(ValueError):
    pass


@dataclass(frozen=True)
class CyclicDiscard:
    """A cyclic ``A ∩ K^g`` met while iterating, with its image under ``psi``."""

    level: int
    generator: tuple
    image: tuple


@dataclass(frozen=True)
class AFamily:
    level: int
    members: tuple

    @property
    def reduced_rank(self):
        return sum(m.reduced_rank for m in self.members)

    def __bool__(self):
        return bool(self.members)


@dataclass(frozen=True)
class StabilityReport:
    families: tuple
    stable_number: int | None
    cap: int
    discards: tuple
    limit: str | None = None

    @property
    def exceeded(self):
        return self.stable_number is None


def _require_supported(split: HNNSplitting):
    if split.regime is Regime.UNSUPPORTED:
        raise StabilityError("vertex group is neither free nor carried by Magnus subgroups")


def initial_family(split: HNNSplitting) -> AFamily:
    _require_supported(split)
    members = (split.h_graph,) if split.h_graph.rank >= 2 else ()
    return AFamily(0, members)


def next_family(split: HNNSplitting, family: AFamily):
    """``(family_{n+1}, cyclic discards)`` from ``psi(A ∩ K^g)`` over members ``K``."""
    _require_supported(split)
    members, seen, discards = [], set(), []
    for member in family.members:
        for piece in pullback(split.a_graph, member):
            images = tuple(split.psi(w) for w in piece.generators)
            if any(im is None for im in images):
                raise StabilityError("intersection escaped the edge group")
            if piece.rank == 1:
                discards.append(CyclicDiscard(family.level + 1, piece.generators[0], images[0]))
                continue
            graph = subgroup_graph(images)
            key = graph.unbased().key()
            if key not in seen:
                seen.add(key)
                members.append(graph)
    out = AFamily(family.level + 1, tuple(members))
    bound = split.a_graph.reduced_rank
    if out.reduced_rank > bound:
        raise StabilityError(f"family reduced rank {out.reduced_rank} exceeds rr(A) = {bound}")
    return out, tuple(discards)


def default_cap(split: HNNSplitting) -> int:
    return max(8 * split.a_graph.reduced_rank, 2)


DEFAULT_SIZE_BUDGET = 4096


def family_size(family: AFamily) -> int:
    return sum(len(w) for graph in family.members for w in graph.basis())


def stable_number(split: HNNSplitting, cap: int | None = None, size_budget: int = DEFAULT_SIZE_BUDGET) -> StabilityReport:
    """Iterate the families until one is empty; ``stable_number`` is None past ``cap``.

    Iteration also stops, unresolved, once a family's bases exceed
    ``size_budget`` letters in total; ``limit`` names whichever bound hit.
    """
    if cap is None:
        cap = default_cap(split)
    family = initial_family(split)
    families, discards = [family], []
    while family:
        if family.level >= cap:
            return StabilityReport(tuple(families), None, cap, tuple(discards), "depth")
        if family_size(family) > size_budget:
            return StabilityReport(tuple(families), None, cap, tuple(discards), "size")
        family, dropped = next_family(split, family)
        discards.extend(dropped)
        families.append(family)
    return StabilityReport(tuple(families), family.level, cap, tuple(discards))


def family_in_vertex_letters(split: HNNSplitting, family: AFamily):
    """Members as generator lists over the vertex generators."""
    _, back = split.coordinates()
    return [[back(w) for w in graph.basis()] for graph in family.members]
