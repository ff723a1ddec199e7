"""Cyclic and free covers of one-relator complexes.

Cells of the infinite cyclic cover ``Y`` of a complex ``X`` along
``phi: pi_1(X) -> Z`` are named by a cell of ``X`` and a level:

* vertex ``(v, i)``;
* edge ``(e, i)`` running from ``(o(e), i)`` to ``(t(e), i + iota(e))``;
* two-cell ``j``: the relator lift starting at ``(start(relator), j)``.

``iota`` vanishes on the spanning tree, so each level holds one tree copy.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .complex import OneRelatorComplex
from .freegroup import (
    abelianize,
    cyclic_reduce,
    free_reduce,
    inverse,
    is_primitive,
    is_primitive_power,
    multiply,
)
from .stability import VERTEX_NAMES, HNNSplitting


class CoverError(ValueError):
    pass


def _edge(ref):
    return abs(ref) - 1


@dataclass(frozen=True)
class CyclicCoverSpec:
    base: OneRelatorComplex
    iota: tuple

    @classmethod
    def from_generator_values(cls, base: OneRelatorComplex, values):
        gens = base.generator_edges()
        if len(values) != len(gens):
            raise CoverError(f"expected {len(gens)} generator values, got {len(values)}")
        iota = [0] * len(base.edges)
        for e, val in zip(gens, values):
            iota[e] = int(val)
        return cls(base, tuple(iota)).validate()

    @classmethod
    def from_cocycle(cls, base: OneRelatorComplex, edge_values):
        """Normalize an arbitrary integer cocycle so it vanishes on the tree."""
        _, parent = base.spanning_tree()
        potential = {0: 0}
        order = sorted(parent, key=lambda v: len(base.tree_path(v)))
        for v in order:
            if parent[v] is None:
                continue
            u, idx = parent[v]
            o, _ = base.edges[idx]
            potential[v] = potential[u] + (edge_values[idx] if o == u else -edge_values[idx])
        iota = tuple(
            edge_values[e] + potential[o] - potential[t] for e, (o, t) in enumerate(base.edges)
        )
        return cls(base, iota).validate()

    @classmethod
    def exponent_sum(cls, base: OneRelatorComplex, generator: int):
        """``phi`` = exponent sum in generator ``generator`` (1-based)."""
        values = [1 if k == generator else 0 for k in range(1, len(base.generator_edges()) + 1)]
        return cls.from_generator_values(base, values)

    @classmethod
    def parse(cls, base: OneRelatorComplex, text: str):
        """Accept ``"a=5 b=3"`` or ``"exp(t)"`` (an optional ``phi:`` prefix is ignored)."""
        names = base.generator_names()
        if names is None:
            raise CoverError("named assignments need a presentation complex")
        body = text.strip()
        if body.lower().startswith("phi:"):
            body = body[4:].strip()
        m = re.fullmatch(r"exp\(\s*([a-z])\s*\)", body)
        if m:
            if m.group(1) not in names:
                raise CoverError(f"unknown generator {m.group(1)!r}")
            return cls.exponent_sum(base, names.index(m.group(1)) + 1)
        values = [0] * len(names)
        for item in re.split(r"[\s,]+", body):
            if not item:
                continue
            m = re.fullmatch(r"([a-z])\s*=\s*([+-]?\d+)", item)
            if not m or m.group(1) not in names:
                raise CoverError(f"cannot read assignment {item!r}")
            values[names.index(m.group(1))] = int(m.group(2))
        return cls.from_generator_values(base, values)

    def validate(self):
        if not self.iota or math.gcd(*self.iota) != 1:
            raise CoverError("phi is not surjective onto Z")
        if self.base.relator and self.relator_shift() != 0:
            raise CoverError("relator is not in the kernel of phi")
        return self

    def relator_shift(self):
        return sum(self.iota[_edge(r)] * (1 if r > 0 else -1) for r in self.base.relator)

    def edge_ends(self, edge):
        e, i = edge
        o, t = self.base.edges[e]
        return (o, i), (t, i + self.iota[e])

    def step(self, vertex, ref):
        """Follow ``ref`` from ``vertex``; return ``(edge, next_vertex)``."""
        v, i = vertex
        e = _edge(ref)
        if ref > 0:
            return (e, i), (self.base.edges[e][1], i + self.iota[e])
        j = i - self.iota[e]
        return (e, j), (self.base.edges[e][0], j)

    def relator_path(self, j):
        """Edges, directions and vertices of two-cell ``j``."""
        rel = self.base.relator
        if not rel:
            return [], []
        vertex = (self.base.start(rel[0]), j)
        steps, vertices = [], [vertex]
        for ref in rel:
            edge, vertex = self.step(vertex, ref)
            steps.append((edge, 1 if ref > 0 else -1))
            vertices.append(vertex)
        return steps, vertices[:-1]

    def generator_values(self):
        return tuple(self.iota[e] for e in self.base.generator_edges())


# Subcomplexes of the cover


def _connected(vertices, edges, ends):
    if not vertices:
        return False
    adj = {v: [] for v in vertices}
    for edge in edges:
        a, b = ends(edge)
        if a not in adj or b not in adj:
            return False
        adj[a].append(b)
        adj[b].append(a)
    start = next(iter(vertices))
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(vertices)


def _is_interval(levels):
    return not levels or max(levels) - min(levels) + 1 == len(levels)


@dataclass(frozen=True)
class CoverSubcomplex:
    """Finite subcomplex of the cyclic cover: vertex, edge and two-cell lifts."""

    spec: CyclicCoverSpec
    vertices: frozenset
    edges: frozenset
    cells: frozenset = frozenset()

    def translate(self, k):
        return CoverSubcomplex(
            self.spec,
            frozenset((v, i + k) for v, i in self.vertices),
            frozenset((e, i + k) for e, i in self.edges),
            frozenset(j + k for j in self.cells),
        )

    def intersection(self, other):
        return CoverSubcomplex(
            self.spec, self.vertices & other.vertices, self.edges & other.edges, self.cells & other.cells
        )

    def levels(self):
        return sorted({i for _, i in self.vertices})

    def is_connected(self):
        return _connected(self.vertices, self.edges, self.spec.edge_ends)

    @property
    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.cells)

    def violations(self):
        """Tree-domain axioms that fail; an empty list means ``self`` is a tree domain."""
        spec, base = self.spec, self.spec.base
        out = []
        for edge in self.edges:
            a, b = spec.edge_ends(edge)
            if a not in self.vertices or b not in self.vertices:
                out.append(f"edge {edge} has an endpoint outside the subcomplex")
                break
        for j in self.cells:
            steps, _ = spec.relator_path(j)
            if any(edge not in self.edges for edge, _ in steps):
                out.append(f"two-cell {j} is not supported")
                break
        for v in range(base.num_vertices):
            levels = [i for w, i in self.vertices if w == v]
            if not levels:
                out.append(f"vertex {v} has no lift")
            elif not _is_interval(levels):
                out.append(f"lifts of vertex {v} do not form an interval")
        for e in range(len(base.edges)):
            levels = [i for f, i in self.edges if f == e]
            if not levels:
                out.append(f"edge {e} has no lift")
            elif not _is_interval(levels):
                out.append(f"lifts of edge {e} do not form an interval")
        if base.relator:
            if not self.cells:
                out.append("the two-cell has no lift")
            elif not _is_interval(list(self.cells)):
                out.append("two-cell lifts do not form an interval")
        if not self.is_connected():
            out.append("subcomplex is disconnected")
        overlap = self.intersection(self.translate(1))
        if not overlap.vertices:
            out.append("intersection with the translate is empty")
        elif not overlap.is_connected():
            out.append("intersection with the translate is disconnected")
        return out

    def is_tree_domain(self):
        return not self.violations()

    def normalized(self):
        lo = min(i for _, i in self.vertices)
        return self.translate(-lo)

    def to_dot(self, name="domain"):
        """Tree lifts in black, other edge lifts in red."""
        tree, _ = self.spec.base.spanning_tree()
        names = self.spec.base.labels
        lines = [f"graph {name} {{", "  node [shape=point];"]
        for v, i in sorted(self.vertices, key=lambda x: (x[1], x[0])):
            lines.append(f'  "v{v}_{i}" [xlabel="{i}"];')
        for edge in sorted(self.edges, key=lambda x: (x[1], x[0])):
            (o, i), (t, j) = self.spec.edge_ends(edge)
            e = edge[0]
            colour = "black" if e in tree else "red"
            label = names[e] if names else str(e)
            lines.append(f'  "v{o}_{i}" -- "v{t}_{j}" [color={colour}, label="{label}{edge[1]}"];')
        lines.append("}")
        return "\n".join(lines)


CoverWindow = CoverSubcomplex


def window(spec: CyclicCoverSpec, levels, generators=None, cells=()):
    """The 1-skeleton window: tree copies at ``levels`` plus generator edge lifts.

    ``generators`` lists generator edge ids (default: all); an edge lift
    ``e_i`` is present when both ``i`` and ``i + iota(e)`` are in ``levels``.
    """
    base = spec.base
    levels = sorted(set(levels))
    level_set = set(levels)
    tree, _ = base.spanning_tree()
    chosen = set(base.generator_edges() if generators is None else generators) | tree
    vertices = frozenset((v, i) for i in levels for v in range(base.num_vertices))
    edges = frozenset(
        (e, i) for e in chosen for i in levels if i + spec.iota[e] in level_set
    )
    return CoverSubcomplex(spec, vertices, edges, frozenset(cells))


def component_count(spec: CyclicCoverSpec, levels, generators=None):
    """Connected components of :func:`window`, counted with union-find."""
    win = window(spec, levels, generators)
    parent = {v: v for v in win.vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = len(parent)
    for edge in win.edges:
        a, b = (find(x) for x in spec.edge_ends(edge))
        if a != b:
            parent[a] = b
            count -= 1
    return count


def lattice_index(spec: CyclicCoverSpec, generators=None):
    """``[Z : gcd(iota(generators))]``; ``math.inf`` when all values vanish."""
    gens = spec.base.generator_edges() if generators is None else generators
    g = math.gcd(*(spec.iota[e] for e in gens)) if gens else 0
    return math.inf if g == 0 else g


TreeDomain = CoverSubcomplex


def _pinned(spec, loops=()):
    if spec.base.relator:
        steps, verts = spec.relator_path(0)
        pin_v, pin_e, cells = set(verts), {edge for edge, _ in steps}, frozenset({0})
    else:
        pin_v, pin_e, cells = {(0, 0)}, set(), frozenset()
    for refs in loops:
        vertex = (0, 0)
        pin_v.add(vertex)
        for ref in refs:
            edge, vertex = spec.step(vertex, ref)
            pin_e.add(edge)
            pin_v.add(vertex)
    return pin_v, pin_e, cells


def _without(sub, vertex=None, edge=None):
    if edge is not None:
        return CoverSubcomplex(sub.spec, sub.vertices, sub.edges - {edge}, sub.cells)
    ends = sub.spec.edge_ends
    incident = {e for e in sub.edges if vertex in ends(e)}
    return CoverSubcomplex(sub.spec, sub.vertices - {vertex}, sub.edges - incident, sub.cells), incident


def minimal_tree_domain(spec: CyclicCoverSpec, max_pad=None, pin_loops=()) -> CoverSubcomplex:
    """A tree domain containing two-cell 0 from which no cell can be removed.

    Starts from the smallest padded window around the pinned relator lift
    that is a tree domain, then deletes edges and vertex stars farthest
    from the pin first while the axioms keep holding.  ``pin_loops`` are
    extra edge paths lifted from ``(0, 0)`` that must stay inside.  Levels
    are shifted so the lowest vertex sits at level 0.
    """
    pin_v, pin_e, cells = _pinned(spec, pin_loops)
    lo = min(i for _, i in pin_v)
    hi = max(i for _, i in pin_v)
    if max_pad is None:
        max_pad = 2 * (sum(abs(x) for x in spec.iota) + len(spec.base.relator)) + 2
    current = None
    for pad in range(max_pad + 1):
        trial = window(spec, range(lo - pad, hi + pad + 1), cells=cells)
        if pin_e <= trial.edges and trial.is_tree_domain():
            current = trial
            break
    if current is None:
        raise CoverError("no tree domain found within the padding budget")

    def distance(level):
        return max(lo - level, level - hi, 0)

    changed = True
    while changed:
        changed = False
        candidates = [
            (-max(distance(a[1]), distance(b[1])), 0, edge[1], edge[0], edge)
            for edge in current.edges
            if edge not in pin_e
            for a, b in [spec.edge_ends(edge)]
        ]
        candidates += [(-distance(v[1]), 1, v[1], v[0], v) for v in current.vertices if v not in pin_v]
        for _, kind, _, _, cell in sorted(candidates):
            if kind == 0:
                if cell not in current.edges:
                    continue
                trial = _without(current, edge=cell)
            else:
                if cell not in current.vertices:
                    continue
                trial, incident = _without(current, vertex=cell)
                if incident & pin_e:
                    continue
            if trial.is_tree_domain():
                current = trial
                changed = True
    return current.normalized() if not pin_loops else current


# Splittings read off a tree domain


class _DomainGraph:
    """Spanning tree, generators and paths of a tree domain."""

    def __init__(self, domain: CoverSubcomplex):
        self.domain = domain
        spec = domain.spec
        self.ends = spec.edge_ends
        verts, edges = domain.vertices, domain.edges
        self.a_vertices = {(v, i) for v, i in verts if (v, i + 1) in verts}
        self.b_vertices = {(v, i) for v, i in verts if (v, i - 1) in verts}
        self.a_edges = {(e, i) for e, i in edges if (e, i + 1) in edges}
        self.b_edges = {(e, i) for e, i in edges if (e, i - 1) in edges}

        def rank(edge):
            in_a, in_b = edge in self.a_edges, edge in self.b_edges
            group = 0 if in_a and in_b else 1 if in_a else 2 if in_b else 3
            return (group, edge[0], edge[1])

        parent = {v: v for v in verts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        self.tree = set()
        for edge in sorted(edges, key=rank):
            a, b = (find(x) for x in self.ends(edge))
            if a != b:
                parent[a] = b
                self.tree.add(edge)
        self.generators = sorted(edges - self.tree)
        if len(self.generators) > len(VERTEX_NAMES):
            raise CoverError("too many vertex generators to name")
        self.index = {edge: k + 1 for k, edge in enumerate(self.generators)}
        anchors = self.a_vertices or verts
        self.base = min(anchors, key=lambda v: (v[1], v[0]))

    def letters(self, path):
        """Word over the vertex generators for a path of ``(edge, sign)`` steps."""
        out = []
        for edge, sign in path:
            k = self.index.get(edge)
            if k is not None:
                out.append(k * sign)
        return free_reduce(out)

    def path(self, start, goal, vertices, edges):
        """Breadth-first edge path from ``start`` to ``goal`` inside a subgraph."""
        if start == goal:
            return []
        adj = {}
        for edge in sorted(edges):
            a, b = self.ends(edge)
            if a in vertices and b in vertices:
                adj.setdefault(a, []).append((edge, 1, b))
                adj.setdefault(b, []).append((edge, -1, a))
        back = {start: None}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            if v == goal:
                break
            for edge, sign, w in adj.get(v, ()):
                if w not in back:
                    back[w] = (v, edge, sign)
                    queue.append(w)
        if goal not in back:
            raise CoverError(f"no path from {start} to {goal}")
        out = []
        v = goal
        while back[v] is not None:
            u, edge, sign = back[v]
            out.append((edge, sign))
            v = u
        return list(reversed(out))

    def tree_path(self, start, goal):
        return self.path(start, goal, self.domain.vertices, self.tree)


def _translate_path(path, k):
    return [((e, i + k), s) for (e, i), s in path]


def _reverse_path(path):
    return [(edge, -s) for edge, s in reversed(path)]


def _project(path):
    return [(e + 1) * s for (e, _), s in path]


def splitting_from_domain(domain: CoverSubcomplex) -> HNNSplitting:
    """HNN data ``pi_1(X) = <H, t | t a t^-1 = psi(a)>`` read off a tree domain.

    ``H`` is presented on the non-tree edges of the domain, ordered by
    ``(edge, level)`` and named ``x, y, z, ...``; ``A`` and ``B`` are the
    fundamental groups of the overlaps with the translates by -1 and +1.
    """
    spec = domain.spec
    base = spec.base
    g = _DomainGraph(domain)
    d0 = g.base
    names = tuple(VERTEX_NAMES[: len(g.generators)])

    if domain.cells:
        steps, _ = spec.relator_path(min(domain.cells))
        relator, _ = cyclic_reduce(g.letters(steps))
    else:
        relator = ()

    a_tree = {edge for edge in g.tree if edge in g.a_edges}
    a_loops = []
    for edge in sorted(g.a_edges - g.tree):
        o, t = g.ends(edge)
        to_o = g.path(d0, o, g.a_vertices, a_tree)
        from_t = g.path(t, d0, g.a_vertices, a_tree)
        a_loops.append(to_o + [(edge, 1)] + from_t)
    a_basis = tuple(g.letters(loop) for loop in a_loops)
    b_basis = tuple(g.letters(_translate_path(loop, 1)) for loop in a_loops)

    def carrier(basis):
        if all(len(w) == 1 and w[0] > 0 for w in basis):
            return frozenset(w[0] for w in basis)
        return None

    def parent_word(path):
        return base.path_word(_project(path))

    vertex_images = []
    for edge in g.generators:
        o, t = g.ends(edge)
        loop = g.tree_path(d0, o) + [(edge, 1)] + g.tree_path(t, d0)
        vertex_images.append(parent_word(loop))
    stable_path = g.tree_path(d0, (d0[0], d0[1] + 1))
    stable_image = parent_word(stable_path)

    parent_images = []
    for e in base.generator_edges():
        o, t = base.edges[e]
        loop = base.tree_path(o) + [e + 1] + _reverse_refs(base.tree_path(t))
        eps = base.tree_path(d0[0])
        parent_images.append(tuple(_lift_syllables(g, _reverse_refs(eps) + loop + eps)))

    return HNNSplitting(
        names=names,
        relator=relator,
        a_basis=a_basis,
        b_basis=b_basis,
        a_letters=carrier(a_basis),
        b_letters=carrier(b_basis),
        vertex_images=tuple(vertex_images),
        stable_image=stable_image,
        parent_images=tuple(parent_images),
        parent_names=base.generator_names(),
    )


def loop_in_domain(domain: CoverSubcomplex, refs, start=(0, 0)):
    """Vertex-generator word of the lift of ``refs`` from ``start``, or None if it leaves the domain."""
    spec = domain.spec
    vertex, path = start, []
    for ref in refs:
        edge, vertex = spec.step(vertex, ref)
        if edge not in domain.edges:
            return None
        path.append((edge, 1 if ref > 0 else -1))
    if vertex != start:
        raise CoverError("path does not lift to a loop")
    return _DomainGraph(domain).letters(path)


def word_to_refs(base: OneRelatorComplex, word):
    """Edge path at vertex 0 spelling a word in the generators of ``base``."""
    gens = base.generator_edges()
    out = []
    for x in word:
        e = gens[abs(x) - 1]
        o, t = base.edges[e]
        loop = base.tree_path(o) + [e + 1] + _reverse_refs(base.tree_path(t))
        out.extend(loop if x > 0 else _reverse_refs(loop))
    return out


def _reverse_refs(refs):
    return [-r for r in reversed(refs)]


def _lift_syllables(g: _DomainGraph, refs):
    """Rewrite a loop at the anchor's image as ``(vertex_word, t_exponent)`` syllables.

    The loop is lifted into the cover starting at the anchor and cut into
    pieces that each stay inside one translate of the domain; a switch to
    the next translate is routed through the overlap so the detour cancels.
    """
    spec = g.domain.spec
    d0 = g.base
    pos = d0
    frame = 0
    current = []
    out = []

    def shift(vertex, k):
        return (vertex[0], vertex[1] + k)

    def switch(direction):
        nonlocal frame, current
        here = shift(pos, -frame)
        if direction > 0:
            detour = g.path(here, shift(d0, 1), g.b_vertices, g.b_edges)
            out.append((free_reduce(current + list(g.letters(detour))), 1))
            current = list(g.letters(_reverse_path(_translate_path(detour, -1))))
            frame += 1
        else:
            detour = g.path(here, d0, g.a_vertices, g.a_edges)
            out.append((free_reduce(current + list(g.letters(detour))), -1))
            current = list(g.letters(_reverse_path(_translate_path(detour, 1))))
            frame -= 1

    edges = g.domain.edges
    for ref in refs:
        edge, nxt = spec.step(pos, ref)
        e, i = edge
        if (e, i - frame) not in edges:
            frames = [m for m in range(i - max(l for _, l in edges) - 1, i - min(l for _, l in edges) + 2)
                      if (e, i - m) in edges]
            if not frames:
                raise CoverError("edge lift outside every translate")
            target = min(frames, key=lambda m: (abs(m - frame), m))
            while frame != target:
                switch(1 if target > frame else -1)
        k = g.index.get((e, i - frame))
        if k is not None:
            current.append(k if ref > 0 else -k)
        pos = nxt
    target = pos[1] - d0[1]
    if pos[0] != d0[0]:
        raise CoverError("lifted path does not close up at the anchor")
    while frame != target:
        switch(1 if target > frame else -1)
    out.append((free_reduce(current), 0))
    return out


# Free covers


@dataclass(frozen=True)
class FreeCoverSplitting:
    """Multiple HNN data from a free cover: one stable letter per free generator.

    ``edge_groups[s]`` is ``(a_basis, b_basis)`` with ``t_s a t_s^-1 = b`` for
    the ``k``-th pair, where ``A_s`` is the overlap with the translate by
    ``s^-1`` and ``B_s`` the overlap with the translate by ``s``.
    """

    names: tuple
    relator: tuple
    edge_groups: tuple
    magnus: tuple

    @property
    def vertex_free(self):
        from .stability import FreeChart

        return FreeChart.for_relator(len(self.names), self.relator) is not None

    @property
    def relator_collapses(self):
        return bool(self.relator) and is_primitive(self.relator, len(self.names))


def free_cover_splitting(rank: int, relator, assignment) -> FreeCoverSplitting:
    """Split ``<rank gens | relator>`` over the free cover given by ``assignment``.

    ``assignment[k]`` is the free generator index (1-based, signed allowed)
    that generator ``k+1`` maps to, or 0 when it maps to the identity.
    """
    if len(assignment) != rank:
        raise CoverError("assignment must list one target per generator")
    used = [abs(s) for s in assignment if s]
    if len(used) != len(set(used)):
        raise CoverError("assignment is not normalized: two generators share a target")
    num_free = max(used, default=0)
    if sorted(used) != list(range(1, num_free + 1)):
        raise CoverError("assignment targets must be 1..n without gaps")
    rel, _ = cyclic_reduce(relator)
    image = free_reduce(assignment[abs(x) - 1] * (1 if x > 0 else -1) for x in rel if assignment[abs(x) - 1])
    if image:
        raise CoverError("relator does not map to the identity")

    def move(vertex, g):
        s = assignment[abs(g) - 1]
        if not s:
            return vertex
        return multiply(vertex, (s if g > 0 else -s,))

    def edge_of(vertex, g):
        """Edge id ``(generator, origin)`` traversed by letter ``g`` from ``vertex``."""
        if g > 0:
            return (g, vertex)
        return (-g, move(vertex, g))

    def ends(edge):
        g, origin = edge
        return origin, move(origin, g)

    vertex = ()
    lift = []
    core_vertices = {vertex}
    for x in rel:
        lift.append((edge_of(vertex, x), 1 if x > 0 else -1))
        vertex = move(vertex, x)
        core_vertices.add(vertex)
    edges = {edge for edge, _ in lift}
    for v in list(core_vertices):
        for g in range(1, rank + 1):
            edges.add((g, v))
            edges.add((g, move(v, -g)))
    vertices = set(core_vertices)
    for edge in edges:
        vertices.update(ends(edge))

    order = sorted(vertices, key=lambda v: (len(v), v))
    parent = {order[0]: None}
    tree = set()
    adj = {}
    for edge in sorted(edges, key=lambda e: (e[0], len(e[1]), e[1])):
        a, b = ends(edge)
        adj.setdefault(a, []).append((edge, b))
        adj.setdefault(b, []).append((edge, a))
    queue = deque([order[0]])
    while queue:
        v = queue.popleft()
        for edge, w in adj.get(v, ()):
            if w not in parent:
                parent[w] = v
                tree.add(edge)
                queue.append(w)
    gens = sorted(edges - tree, key=lambda e: (len(e[1]), e[1], e[0]))
    if len(gens) > len(VERTEX_NAMES):
        raise CoverError("too many vertex generators to name")
    index = {edge: k + 1 for k, edge in enumerate(gens)}

    def letters(path):
        return free_reduce(index[edge] * s for edge, s in path if edge in index)

    rel_word, _ = cyclic_reduce(letters(lift))

    def overlap_basis(s):
        shift = lambda v: multiply((s,), v)
        sub_v = {v for v in vertices if multiply((-s,), v) in vertices}
        sub_e = {(g, o) for g, o in edges if (g, multiply((-s,), o)) in edges}
        if not sub_v:
            return (), (), False
        start = min(sub_v, key=lambda v: (len(v), v))
        sub_adj = {}
        for edge in sorted(sub_e, key=lambda e: (e[0], len(e[1]), e[1])):
            a, b = ends(edge)
            sub_adj.setdefault(a, []).append((edge, 1, b))
            sub_adj.setdefault(b, []).append((edge, -1, a))
        back = {start: []}
        queue = deque([start])
        sub_tree = set()
        while queue:
            v = queue.popleft()
            for edge, sign, w in sub_adj.get(v, ()):
                if w not in back:
                    back[w] = back[v] + [(edge, sign)]
                    sub_tree.add(edge)
                    queue.append(w)
        connected = len(back) == len(sub_v)
        b_basis, a_basis = [], []
        for edge in sorted(sub_e - sub_tree, key=lambda e: (len(e[1]), e[1], e[0])):
            a, b = ends(edge)
            if a not in back or b not in back:
                continue
            loop = back[a] + [(edge, 1)] + _reverse_path(back[b])
            b_basis.append(letters(loop))
            pulled = [((g, multiply((-s,), o)), sign) for (g, o), sign in loop]
            a_basis.append(letters(pulled))
        missing = any(edge not in sub_e for edge, _ in lift)
        return tuple(a_basis), tuple(b_basis), connected and missing

    groups, magnus = [], []
    for s in range(1, num_free + 1):
        a_basis, b_basis, ok = overlap_basis(s)
        groups.append((a_basis, b_basis))
        magnus.append(ok)
    return FreeCoverSplitting(tuple(VERTEX_NAMES[: len(gens)]), rel_word, tuple(groups), tuple(magnus))


# Abelian lifts


def unimodular_reduction(vector):
    """Integer matrix ``U`` with ``det U = +-1`` and ``U v = (g, 0, ..., 0)``, ``g >= 0``."""
    n = len(vector)
    rows = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    v = list(vector)
    while True:
        nonzero = [i for i in range(n) if v[i]]
        if len(nonzero) <= 1:
            break
        pivot = min(nonzero, key=lambda i: (abs(v[i]), i))
        for i in nonzero:
            if i != pivot:
                q = v[i] // v[pivot]
                v[i] -= q * v[pivot]
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[pivot])]
    lead = next((i for i in range(n) if v[i]), 0)
    rows[0], rows[lead] = rows[lead], rows[0]
    v[0], v[lead] = v[lead], v[0]
    if v[0] < 0:
        rows[0] = [-x for x in rows[0]]
    return rows


def torsion_free_quotient(rank, relator):
    """Rows of an epimorphism ``Z^rank -> Z^b`` whose kernel is spanned by ``ab(relator)``."""
    vec = abelianize(relator, rank)
    if not any(vec):
        return [[1 if i == j else 0 for j in range(rank)] for i in range(rank)]
    return unimodular_reduction(vec)[1:]


@dataclass(frozen=True)
class AbelianLift:
    """Subcomplex of the torsion-free abelian cover carried by one relator lift."""

    complex: OneRelatorComplex
    vertex_labels: tuple
    edge_labels: tuple
    quotient: tuple


def abelian_lift(X: OneRelatorComplex) -> AbelianLift:
    rank, word = X.presentation()
    quotient = torsion_free_quotient(rank, word)
    gens = X.generator_edges()
    shift = {e: tuple(row[k] for row in quotient) for k, e in enumerate(gens)}
    zero = tuple(0 for _ in quotient)

    def add(u, v, sign):
        return tuple(a + sign * b for a, b in zip(u, v))

    vertices, edges, refs = {}, {}, []
    position = (X.start(X.relator[0]), zero)
    vertices[position] = 0
    for ref in X.relator:
        e = _edge(ref)
        o, t = X.edges[e]
        vec = shift.get(e, zero)
        if ref > 0:
            key = (e, position[1])
            position = (t, add(position[1], vec, 1))
        else:
            level = add(position[1], vec, -1)
            key = (e, level)
            position = (o, level)
        vertices.setdefault(position, len(vertices))
        if key not in edges:
            edges[key] = len(edges)
        refs.append((edges[key] + 1) * (1 if ref > 0 else -1))
    edge_list = [None] * len(edges)
    for (e, level), idx in edges.items():
        o, t = X.edges[e]
        end = add(level, shift.get(e, zero), 1)
        edge_list[idx] = (vertices[(o, level)], vertices[(t, end)])
    labels_v = tuple(sorted(vertices, key=vertices.get))
    labels_e = tuple(sorted(edges, key=edges.get))
    lifted = OneRelatorComplex(len(vertices), tuple(edge_list), tuple(refs))
    return AbelianLift(lifted, labels_v, labels_e, tuple(tuple(r) for r in quotient))


def relator_is_primitive_power(X: OneRelatorComplex) -> bool:
    """Whether the relator is a power of a primitive element of the free fundamental group of the graph."""
    rank, word = X.presentation()
    return bool(word) and is_primitive_power(word, rank)


# Primitive elements of F(a, b)


def _unique_cycle(domain: CoverSubcomplex):
    ends = domain.spec.edge_ends
    edges = set(domain.edges)
    degree = {v: 0 for v in domain.vertices}
    for edge in edges:
        a, b = ends(edge)
        degree[a] += 1
        degree[b] += 1
    leaves = deque(v for v, d in degree.items() if d <= 1)
    alive = set(domain.vertices)
    while leaves:
        v = leaves.popleft()
        if v not in alive:
            continue
        alive.discard(v)
        for edge in [e for e in edges if v in ends(e)]:
            edges.discard(edge)
            for w in ends(edge):
                if w in alive:
                    degree[w] -= 1
                    if degree[w] <= 1:
                        leaves.append(w)
    if not edges:
        raise CoverError("domain has no cycle")
    start = min(alive, key=lambda v: (v[1], v[0]))
    word, v, used = [], start, set()
    while True:
        step = None
        for edge in sorted(edges - used):
            a, b = ends(edge)
            if a == v:
                step = (edge, 1, b)
                break
            if b == v:
                step = (edge, -1, a)
                break
        if step is None:
            break
        edge, sign, v = step
        used.add(edge)
        word.append((edge[0] + 1) * sign)
        if v == start:
            break
    if used != edges:
        raise CoverError("core of the domain is not a single cycle")
    return tuple(word)


def primitive_z2(p: int, q: int):
    """The cyclic word of the primitive conjugacy class of ``F(a, b)`` over ``(p, q)``.

    Read off the unique cycle of the minimal tree domain of the cover with
    ``a -> q`` and ``b -> -p``, whose kernel contains ``(p, q)``.
    """
    if math.gcd(p, q) != 1:
        raise CoverError(f"({p}, {q}) is not a primitive vector")
    rose = OneRelatorComplex.rose(2, (), ("a", "b"))
    spec = CyclicCoverSpec.from_generator_values(rose, (q, -p))
    word = _unique_cycle(minimal_tree_domain(spec))
    if abelianize(word, 2) != (p, q):
        word = inverse(word)
    return word
