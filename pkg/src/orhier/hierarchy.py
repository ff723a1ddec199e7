"""One-relator towers, hierarchy length and towers ending at w-subgroups.

Each tower step picks an epimorphism ``phi: pi_1(X) -> Z`` killing the
relator, takes a minimal tree domain of the cyclic cover and continues
with its vertex presentation.  A tower is maximal once the relator is a
power of a primitive element.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, field

from .complex import OneRelatorComplex
from .covers import (
    CoverError,
    CoverSubcomplex,
    CyclicCoverSpec,
    abelian_lift,
    loop_in_domain,
    minimal_tree_domain,
    relator_is_primitive_power,
    splitting_from_domain,
    torsion_free_quotient,
    word_to_refs,
)
from .freegroup import abelianize, primitive_root
from .stability import HNNSplitting
from .stallings import CoreGraph, GeneratedSubgroup

STRATEGIES = ("minimal-h", "first-found")

_memo: dict = {}
_memo_lock = threading.Lock()


def hierarchy_length(X: OneRelatorComplex) -> int:
    """``h(X)``: the number of abelian lifts until the relator is a primitive power."""
    key = X.key()
    cached = _memo.get(key)
    if cached is not None:
        return cached
    if relator_is_primitive_power(X):
        value = 0
    else:
        value = 1 + hierarchy_length(abelian_lift(X).complex)
    with _memo_lock:
        _memo.setdefault(key, value)
    return value


@dataclass(frozen=True)
class TowerLevel:
    complex: OneRelatorComplex
    spec: CyclicCoverSpec
    domain: CoverSubcomplex
    splitting: HNNSplitting

    @property
    def phi(self):
        return self.spec.generator_values()


@dataclass(frozen=True)
class Tower:
    levels: tuple
    terminal: OneRelatorComplex

    def __len__(self):
        return len(self.levels)

    @property
    def complexes(self):
        return [lvl.complex for lvl in self.levels] + [self.terminal]


@dataclass(frozen=True)
class HierarchyReport:
    tower: Tower
    length: int
    terminal_primitive_power: bool
    terminal_root: tuple = field(default=())
    terminal_exponent: int = 0


def vertex_complex(splitting: HNNSplitting) -> OneRelatorComplex:
    """Rose on the vertex generators carrying the vertex relator."""
    return OneRelatorComplex.rose(splitting.rank, splitting.relator, splitting.names)


def _names(X):
    return X.generator_names() or tuple(f"g{k}" for k in range(1, len(X.generator_edges()) + 1))


def _separating_weights(quotient, points, spread):
    """Smallest weights (by max norm, then lexicographic) injective on the
    quotient ``points`` whose induced map ``Z^rank -> Z`` is onto."""
    r = len(quotient)
    for bound in range(1, spread):
        for weights in itertools.product(range(-bound, bound + 1), repeat=r):
            if max(abs(w) for w in weights) != bound or next(w for w in weights if w) < 0:
                continue
            values = [sum(w * row[j] for w, row in zip(weights, quotient)) for j in range(len(quotient[0]))]
            if math.gcd(*values) != 1:
                continue
            if len({sum(w * c for w, c in zip(weights, p)) for p in points}) == len(points):
                return values
    weights = [spread**k for k in range(r)]
    return [sum(w * row[j] for w, row in zip(weights, quotient)) for j in range(len(quotient[0]))]


def candidate_covers(X: OneRelatorComplex):
    """Epimorphisms to try, in order: exponent sums of zero-exponent generators
    from last to first, then the smallest epimorphism that separates the
    relator's trace in the torsion-free abelian cover, so that its tree
    domain carries the same relator as the abelian lift."""
    rank, word = X.presentation()
    ab = abelianize(word, rank)
    out = []
    for g in range(rank, 0, -1):
        if ab[g - 1] == 0:
            out.append(CyclicCoverSpec.exponent_sum(X, g))
    quotient = torsion_free_quotient(rank, word)
    if quotient:
        prefix, prefixes = [0] * rank, [(0,) * rank]
        for x in word:
            prefix[abs(x) - 1] += 1 if x > 0 else -1
            prefixes.append(tuple(prefix))
        points = {tuple(sum(r * c for r, c in zip(row, p)) for row in quotient) for p in prefixes}
        spread = max(2 * len(X.relator) * max(abs(x) for row in quotient for x in row), 2) + 1
        spec = CyclicCoverSpec.from_generator_values(X, _separating_weights(quotient, points, spread))
        if all(spec.iota != c.iota for c in out):
            out.append(spec)
    return out


def tower_step(X: OneRelatorComplex, spec: CyclicCoverSpec, pin_loops=()) -> TowerLevel:
    domain = minimal_tree_domain(spec, pin_loops=pin_loops)
    return TowerLevel(X, spec, domain, splitting_from_domain(domain))


def build_tower(X: OneRelatorComplex, strategy: str = "minimal-h", first=None) -> Tower:
    """A maximal one-relator tower over ``X``.

    ``minimal-h`` takes the first candidate cover whose vertex complex has
    hierarchy length one less than the current level, which yields a
    tower of length ``h(X)``; ``first-found`` always takes the first
    candidate.  ``first`` forces the cover used at the top level.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    levels = []
    current = X
    while not relator_is_primitive_power(current):
        candidates = [first] if first is not None and not levels else candidate_covers(current)
        if not candidates:
            raise CoverError("no epimorphism to Z kills the relator")
        chosen = None
        if strategy == "minimal-h":
            target = hierarchy_length(current) - 1
            for spec in candidates:
                level = tower_step(current, spec)
                if hierarchy_length(vertex_complex(level.splitting)) == target:
                    chosen = level
                    break
        if chosen is None:
            chosen = tower_step(current, candidates[0])
        nxt = vertex_complex(chosen.splitting)
        if not nxt.complexity() < current.complexity():
            raise RuntimeError("tower step did not decrease complexity")
        levels.append(chosen)
        current = nxt
    return Tower(tuple(levels), current)


def hierarchy_report(X: OneRelatorComplex, strategy: str = "minimal-h") -> HierarchyReport:
    tower = build_tower(X, strategy)
    _, word = tower.terminal.presentation()
    root, exponent = primitive_root(word) if word else ((), 0)
    return HierarchyReport(tower, len(tower), relator_is_primitive_power(tower.terminal), tuple(root), exponent)


# Towers ending at a w-subgroup


def integer_kernel(rows, n):
    """A basis of ``{v in Z^n : r . v = 0 for every row r}``, saturated."""
    work = [list(col) + [1 if i == j else 0 for j in range(n)] for i, col in enumerate(zip(*rows))] if rows else None
    if work is None:
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    m = len(rows)
    pivot_row = 0
    for c in range(m):
        while True:
            live = [i for i in range(pivot_row, n) if work[i][c]]
            if not live:
                break
            p = min(live, key=lambda i: (abs(work[i][c]), i))
            work[pivot_row], work[p] = work[p], work[pivot_row]
            done = True
            for i in range(pivot_row + 1, n):
                if work[i][c]:
                    q = work[i][c] // work[pivot_row][c]
                    work[i] = [a - q * b for a, b in zip(work[i], work[pivot_row])]
                    if work[i][c]:
                        done = False
            if done:
                pivot_row += 1
                break
    return [row[m:] for row in work if not any(row[:m])]


def _kernel_choice(basis):
    """Lexicographically least normalized vector among the kernel basis and its negatives."""
    options = []
    for v in basis:
        lead = next(x for x in v if x)
        options.append(tuple(v) if lead > 0 else tuple(-x for x in v))
    return min(options, key=lambda v: (sum(abs(x) for x in v), v))


def _is_whole_group(rank, images):
    if len(images) != rank:
        return False
    sub = GeneratedSubgroup(images)
    return all(sub.contains((g,)) for g in range(1, rank + 1))


def tower_to_w_subgroup(X: OneRelatorComplex, Q) -> Tower:
    """A tower over ``X`` whose terminal complex is the w-subgroup ``Q``.

    ``Q`` is a :class:`CoreGraph` (or a tuple of words) for a subgroup of
    the free group on the generators of ``X`` containing the relator.  Each
    step picks ``phi`` vanishing on the image of ``Q`` in homology so that
    ``Q`` lifts, pins its lift inside the domain and rewrites it in the
    vertex generators.
    """
    images = [tuple(w) for w in (Q.basis() if isinstance(Q, CoreGraph) else Q)]
    levels = []
    current = X
    while True:
        rank, word = current.presentation()
        if _is_whole_group(rank, images):
            return Tower(tuple(levels), current)
        lattice = [list(abelianize(w, rank)) for w in images] + [list(abelianize(word, rank))]
        kernel = integer_kernel(lattice, rank)
        if not kernel:
            raise CoverError("no epimorphism to Z vanishes on the subgroup, so the subgroup has no abelian lift")
        spec = CyclicCoverSpec.from_generator_values(current, _kernel_choice(kernel))
        loops = [word_to_refs(current, w) for w in images]
        level = tower_step(current, spec, pin_loops=loops)
        images = [loop_in_domain(level.domain, refs) for refs in loops]
        nxt = vertex_complex(level.splitting)
        if not nxt.complexity() < current.complexity():
            raise RuntimeError("tower step did not decrease complexity")
        levels.append(level)
        current = nxt
