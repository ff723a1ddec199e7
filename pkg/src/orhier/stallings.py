"""Stallings core graphs of finitely generated subgroups of free groups.

Graphs are labelled by positive generator indices ``1..rank``; an edge
``(o, t, g)`` is read as ``g`` from ``o`` to ``t`` and as ``-g`` backwards.
Every :class:`CoreGraph` is folded, pruned and canonically numbered, so two
graphs describe the same subgroup (or conjugacy class, when unbased) exactly
when their :meth:`CoreGraph.key` values agree.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .freegroup import free_reduce, inverse, multiply


def _letter_order(letter):
    return (abs(letter), letter < 0)


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def fold(num_vertices, edges, merges=()):
    """Fold a labelled graph.  Returns ``(num_vertices, edges, vertex_map)``."""
    uf = _UnionFind(num_vertices)
    for a, b in merges:
        uf.union(a, b)
    changed = True
    while changed:
        changed = False
        seen = {}
        for o, t, g in edges:
            ro, rt = uf.find(o), uf.find(t)
            for key, target in (((ro, g), rt), ((rt, -g), ro)):
                prev = seen.get(key)
                if prev is None:
                    seen[key] = target
                else:
                    prev = uf.find(prev)
                    if prev != uf.find(target):
                        uf.union(prev, target)
                        changed = True
    roots = sorted({uf.find(v) for v in range(num_vertices)})
    index = {r: i for i, r in enumerate(roots)}
    vertex_map = [index[uf.find(v)] for v in range(num_vertices)]
    new_edges = sorted({(vertex_map[o], vertex_map[t], g) for o, t, g in edges})
    return len(roots), new_edges, vertex_map


def prune(num_vertices, edges, keep=None):
    """Remove hanging trees; ``keep`` is a vertex that is never removed."""
    degree = [0] * num_vertices
    incident = [[] for _ in range(num_vertices)]
    for idx, (o, t, _) in enumerate(edges):
        degree[o] += 1
        degree[t] += 1
        incident[o].append(idx)
        incident[t].append(idx)
    alive_edge = [True] * len(edges)
    alive_vertex = [True] * num_vertices
    stack = [v for v in range(num_vertices) if degree[v] <= 1 and v != keep]
    while stack:
        v = stack.pop()
        if not alive_vertex[v] or degree[v] > 1 or v == keep:
            continue
        alive_vertex[v] = False
        for idx in incident[v]:
            if alive_edge[idx]:
                alive_edge[idx] = False
                o, t, _ = edges[idx]
                other = t if o == v else o
                degree[other] -= 1
                degree[v] -= 1
                if other != v and degree[other] <= 1 and other != keep:
                    stack.append(other)
    kept = [v for v in range(num_vertices) if alive_vertex[v]]
    index = {v: i for i, v in enumerate(kept)}
    new_edges = [(index[o], index[t], g) for (o, t, g), a in zip(edges, alive_edge) if a]
    return len(kept), new_edges, index


def _adjacency(num_vertices, edges):
    adj = [dict() for _ in range(num_vertices)]
    for idx, (o, t, g) in enumerate(edges):
        adj[o][g] = (t, idx)
        adj[t][-g] = (o, idx)
    return adj


def _relabel_from(start, num_vertices, adj):
    order = {start: 0}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for letter in sorted(adj[v], key=_letter_order):
            t = adj[v][letter][0]
            if t not in order:
                order[t] = len(order)
                queue.append(t)
    return order


def _canonical(num_vertices, edges, basepoint):
    adj = _adjacency(num_vertices, edges)
    starts = [basepoint] if basepoint is not None else range(num_vertices)
    best = None
    for s in starts:
        order = _relabel_from(s, num_vertices, adj)
        if len(order) != num_vertices:
            raise ValueError("graph is not connected")
        encoded = tuple(sorted((order[o], order[t], g) for o, t, g in edges))
        if best is None or encoded < best[0]:
            best = (encoded, order)
    if best is None:
        return 0, (), None
    return best[0], best[1]


@dataclass(frozen=True, eq=False)
class CoreGraph:
    """A folded connected core graph, optionally based."""

    num_vertices: int
    edges: tuple
    basepoint: int | None
    _adj: list = field(repr=False, compare=False)
    _tree: tuple = field(repr=False, compare=False)

    @classmethod
    def build(cls, num_vertices, edges, basepoint=0, merges=()):
        n, folded, vmap = fold(num_vertices, list(edges), merges)
        base = vmap[basepoint] if basepoint is not None else None
        n, pruned, index = prune(n, folded, keep=base)
        base = index[base] if base is not None else None
        if n == 0:
            return cls._make(0, (), None)
        encoded, order = _canonical(n, pruned, base)
        return cls._make(n, encoded, 0 if base is not None else None)

    @classmethod
    def _make(cls, n, edges, basepoint):
        adj = _adjacency(n, edges)
        tree_parent = {}
        tree_edges = set()
        if n:
            root = basepoint if basepoint is not None else 0
            tree_parent[root] = None
            queue = deque([root])
            while queue:
                v = queue.popleft()
                for letter in sorted(adj[v], key=_letter_order):
                    t, idx = adj[v][letter]
                    if t not in tree_parent:
                        tree_parent[t] = (v, letter)
                        tree_edges.add(idx)
                        queue.append(t)
        non_tree = tuple(i for i in range(len(edges)) if i not in tree_edges)
        return cls(n, tuple(edges), basepoint, adj, (tree_parent, non_tree))

    def __eq__(self, other):
        return isinstance(other, CoreGraph) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        return (self.num_vertices, self.edges, self.basepoint)

    @property
    def rank(self):
        if self.num_vertices == 0:
            return 0
        return len(self.edges) - self.num_vertices + 1

    @property
    def euler_characteristic(self):
        return self.num_vertices - len(self.edges)

    @property
    def reduced_rank(self):
        return max(self.rank - 1, 0)

    @property
    def ambient_rank(self):
        return max((g for _, _, g in self.edges), default=0)

    def degree(self, v):
        return len(self._adj[v])

    def step(self, v, letter):
        hit = self._adj[v].get(letter)
        return None if hit is None else hit[0]

    def read(self, word, start=None):
        v = self.basepoint if start is None else start
        for x in word:
            hit = self._adj[v].get(x)
            if hit is None:
                return None
            v = hit[0]
        return v

    def contains(self, word):
        if self.basepoint is None:
            raise ValueError("membership needs a based graph")
        w = free_reduce(word)
        return self.read(w) == self.basepoint

    def path_to(self, v):
        """Tree path word from the root to ``v``."""
        parent = self._tree[0]
        out = []
        while parent[v] is not None:
            u, letter = parent[v]
            out.append(letter)
            v = u
        return tuple(reversed(out))

    def basis(self):
        """Free basis read off the spanning tree, one word per non-tree edge."""
        out = []
        for idx in self._tree[1]:
            o, t, g = self.edges[idx]
            out.append(multiply(self.path_to(o), (g,), inverse(self.path_to(t))))
        return out

    def express(self, word, start=None):
        """Rewrite a closed word in terms of :meth:`basis`; None if not a loop."""
        root = self.basepoint if self.basepoint is not None else 0
        v = root if start is None else start
        position = {idx: j + 1 for j, idx in enumerate(self._tree[1])}
        out = []
        for x in word:
            hit = self._adj[v].get(x)
            if hit is None:
                return None
            t, idx = hit
            j = position.get(idx)
            if j is not None:
                out.append(j if x > 0 else -j)
            v = t
        if v != (root if start is None else start):
            return None
        return free_reduce(out)

    def unbased(self):
        return CoreGraph.build(self.num_vertices, self.edges, None)

    def rebased(self, v):
        return CoreGraph.build(self.num_vertices, self.edges, v)

    def to_dict(self, alphabet=None):
        label = (lambda g: alphabet.names[g - 1]) if alphabet is not None else (lambda g: g)
        return {
            "vertices": self.num_vertices,
            "basepoint": self.basepoint,
            "edges": [[o, t, label(g)] for o, t, g in self.edges],
        }

    def to_dot(self, alphabet=None, name="core"):
        label = (lambda g: alphabet.names[g - 1]) if alphabet is not None else str
        lines = [f"digraph {name} {{"]
        for v in range(self.num_vertices):
            shape = "doublecircle" if v == self.basepoint else "circle"
            lines.append(f"  v{v} [shape={shape}];")
        for o, t, g in self.edges:
            lines.append(f'  v{o} -> v{t} [label="{label(g)}"];')
        lines.append("}")
        return "\n".join(lines)


def subgroup_graph(generators):
    """Based core graph of the subgroup generated by ``generators``."""
    edges = []
    n = 1
    for word in generators:
        w = free_reduce(word)
        if not w:
            continue
        path = [0] + list(range(n, n + len(w) - 1)) + [0]
        n += len(w) - 1
        for k, x in enumerate(w):
            a, b = path[k], path[k + 1]
            edges.append((a, b, x) if x > 0 else (b, a, -x))
    return CoreGraph.build(n, edges, 0)


def cycle_graph(cyclic):
    """The based cycle reading a cyclically reduced word from vertex 0."""
    return subgroup_graph([cyclic])


def merge_vertices(graph, u, v):
    return CoreGraph.build(graph.num_vertices, graph.edges, graph.basepoint, merges=[(u, v)])


def quotients_of_cycle(cyclic, start=None):
    """All proper-or-equal folded quotients of a based graph (default: the cycle of ``cyclic``)."""
    root = start if start is not None else cycle_graph(cyclic)
    found = {root.key(): root}
    queue = deque([root])
    while queue:
        g = queue.popleft()
        for u, v in itertools.combinations(range(g.num_vertices), 2):
            q = merge_vertices(g, u, v)
            k = q.key()
            if k not in found:
                found[k] = q
                queue.append(q)
    return found


# Fibre products


@dataclass(frozen=True)
class IntersectionMember:
    """One nontrivial subgroup ``H ∩ g^-1 K g`` up to conjugacy in ``H``."""

    generators: tuple
    conjugator: tuple
    graph: CoreGraph
    contains_basepoints: bool

    @property
    def rank(self):
        return self.graph.rank

    @property
    def cyclic(self):
        return self.graph.rank == 1

    @property
    def reduced_rank(self):
        return self.graph.reduced_rank


def _distances(graph):
    root = graph.basepoint
    dist = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for letter in sorted(graph._adj[v], key=_letter_order):
            t = graph._adj[v][letter][0]
            if t not in dist:
                dist[t] = dist[v] + 1
                queue.append(t)
    return dist


def pullback(h_graph, k_graph):
    """Nontrivial components of the fibre product of two based core graphs.

    Each member carries generators of ``H ∩ g^-1 K g`` and the double coset
    representative ``g``; one member per nontrivial double coset.
    """
    if h_graph.basepoint is None or k_graph.basepoint is None:
        raise ValueError("pullback needs based graphs")
    vertices = {}
    edges = []
    for o1, t1, g1 in h_graph.edges:
        for o2, t2, g2 in k_graph.edges:
            if g1 == g2:
                a = vertices.setdefault((o1, o2), len(vertices))
                b = vertices.setdefault((t1, t2), len(vertices))
                edges.append((a, b, g1))
    base_pair = (h_graph.basepoint, k_graph.basepoint)
    names = {i: p for p, i in vertices.items()}
    uf = _UnionFind(len(vertices))
    for a, b, _ in edges:
        uf.union(a, b)
    components = {}
    for e in edges:
        components.setdefault(uf.find(e[0]), []).append(e)
    dist_h, dist_k = _distances(h_graph), _distances(k_graph)
    members = []
    for comp_edges in components.values():
        local = sorted({v for a, b, _ in comp_edges for v in (a, b)})
        index = {v: i for i, v in enumerate(local)}
        n, core_edges, kept = prune(len(local), [(index[a], index[b], g) for a, b, g in comp_edges])
        if n == 0:
            continue
        back = {i: names[local[v]] for v, i in kept.items()}
        has_base = base_pair in back.values()
        chosen = min(back, key=lambda i: (dist_h[back[i][0]] + dist_k[back[i][1]], back[i]))
        u, v = back[chosen]
        local_graph = CoreGraph.build(n, core_edges, chosen)
        p = h_graph.path_to(u)
        q = k_graph.path_to(v)
        gens = tuple(multiply(p, b, inverse(p)) for b in local_graph.basis())
        members.append(
            IntersectionMember(
                generators=gens,
                conjugator=multiply(q, inverse(p)),
                graph=subgroup_graph(gens),
                contains_basepoints=has_base,
            )
        )
    members.sort(key=lambda m: (not m.contains_basepoints, len(m.conjugator), m.conjugator, m.graph.key()))
    return members


def intersect(h_generators, k_generators):
    return pullback(subgroup_graph(h_generators), subgroup_graph(k_generators))


def intersection_at_basepoint(h_graph, k_graph):
    """Generators of ``H ∩ K`` itself (possibly empty)."""
    for m in pullback(h_graph, k_graph):
        if m.contains_basepoints:
            return m.generators
    return ()


def _unbased_core_euler(h_graph, k_graph):
    total = 0
    vertices = {}
    edges = []
    for o1, t1, g1 in h_graph.edges:
        for o2, t2, g2 in k_graph.edges:
            if g1 == g2:
                a = vertices.setdefault((o1, o2), len(vertices))
                b = vertices.setdefault((t1, t2), len(vertices))
                edges.append((a, b, g1))
    n, core_edges, _ = prune(len(vertices), edges)
    total = n - len(core_edges)
    return total


def inertness_counterexample(graph, rank=None, max_word_length=3, max_generators=3, max_edges=12):
    """Search for a test subgroup witnessing failure of inertness.

    ``graph`` is the unbased core of a subgroup ``H``.  A returned generator
    tuple spans ``K`` with ``rr(core(H x K)) > rr(K)`` summed over components,
    measured by Euler characteristic.  Returns None when nothing is found.
    """
    core = graph.unbased() if graph.basepoint is not None else graph
    based = CoreGraph.build(core.num_vertices, core.edges, 0)
    rank = rank or core.ambient_rank
    letters = [g for k in range(1, rank + 1) for g in (k, -k)]
    words = []
    for length in range(1, max_word_length + 1):
        for w in itertools.product(letters, repeat=length):
            r = free_reduce(w)
            if len(r) == length and (length < 2 or r[0] != -r[-1]):
                words.append(r)
    seen = set()
    for count in range(1, max_generators + 1):
        for gens in itertools.combinations(words, count):
            test = subgroup_graph(gens).unbased()
            if test.num_vertices == 0 or len(test.edges) > max_edges:
                continue
            key = test.key()
            if key in seen:
                continue
            seen.add(key)
            test_based = CoreGraph.build(test.num_vertices, test.edges, 0)
            if -_unbased_core_euler(based, test_based) > -test.euler_characteristic:
                return gens
    return None


class GeneratedSubgroup:
    """A subgroup with a fixed free generating tuple.

    ``express`` rewrites a member as a word in the generators, using a fold
    that tracks edge values in the free group on the generators.
    """

    def __init__(self, generators):
        self.generators = tuple(free_reduce(g) for g in generators)
        if any(not g for g in self.generators):
            raise ValueError("generators must be nontrivial")
        self._build()

    def _build(self):
        edges = []
        n = 1
        for i, w in enumerate(self.generators):
            path = [0] + list(range(n, n + len(w) - 1)) + [0]
            n += len(w) - 1
            for k, x in enumerate(w):
                value = (i + 1,) if k == 0 else ()
                a, b = path[k], path[k + 1]
                if x > 0:
                    edges.append([a, b, x, value])
                else:
                    edges.append([b, a, -x, inverse(value)])
        alive = [True] * len(edges)
        while True:
            clash = self._find_clash(edges, alive)
            if clash is None:
                break
            i, j, v, letter = clash
            ei, ej = edges[i], edges[j]
            ui = ei[1] if letter > 0 else ei[0]
            uj = ej[1] if letter > 0 else ej[0]
            vi = ei[3] if letter > 0 else inverse(ei[3])
            vj = ej[3] if letter > 0 else inverse(ej[3])
            if ui == uj:
                if free_reduce(vi) != free_reduce(vj):
                    raise ValueError("generators are not a free basis of the subgroup they span")
                alive[j] = False
                continue
            if uj == 0:
                ui, uj, vi, vj = uj, ui, vj, vi
            self._gauge(edges, alive, uj, multiply(inverse(vj), vi))
            for k, e in enumerate(edges):
                if alive[k]:
                    if e[0] == uj:
                        e[0] = ui
                    if e[1] == uj:
                        e[1] = ui
            alive[j] = False
        self._out = {}
        for k, (o, t, g, val) in enumerate(edges):
            if alive[k]:
                self._out[(o, g)] = (t, val)
                self._out[(t, -g)] = (o, inverse(val))

    @staticmethod
    def _find_clash(edges, alive):
        seen = {}
        for k, (o, t, g, _) in enumerate(edges):
            if not alive[k]:
                continue
            for v, letter in ((o, g), (t, -g)):
                prev = seen.get((v, letter))
                if prev is not None and prev != k:
                    return prev, k, v, letter
                seen[(v, letter)] = k
        return None

    @staticmethod
    def _gauge(edges, alive, vertex, g):
        gi = inverse(g)
        for k, e in enumerate(edges):
            if not alive[k]:
                continue
            val = e[3]
            if e[1] == vertex:
                val = multiply(val, g)
            if e[0] == vertex:
                val = multiply(gi, val)
            e[3] = val

    def express(self, word):
        v = 0
        out = []
        for x in free_reduce(word):
            hit = self._out.get((v, x))
            if hit is None:
                return None
            v, val = hit
            out.extend(val)
        if v != 0:
            return None
        return free_reduce(out)

    def contains(self, word):
        return self.express(word) is not None
