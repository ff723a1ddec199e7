"""One-relator complexes: a finite graph plus one immersed cycle.

Edges are numbered ``0..E-1`` and the relator is a cyclic sequence of
signed edge references: ``e+1`` traverses edge ``e`` forwards, ``-(e+1)``
backwards.  A presentation ``<a, b | w>`` becomes a rose with one vertex.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .freegroup import Alphabet, WordSyntaxError, cyclic_reduce, free_reduce, parse_letters, period_degree


class ComplexError(ValueError):
    pass


def _edge(ref):
    return abs(ref) - 1


@dataclass(frozen=True)
class OneRelatorComplex:
    num_vertices: int
    edges: tuple
    relator: tuple
    labels: tuple | None = None

    @classmethod
    def rose(cls, rank, relator, labels=None):
        return cls(1, tuple((0, 0) for _ in range(rank)), tuple(relator), labels)

    @classmethod
    def from_presentation(cls, alphabet: Alphabet, relator):
        word, _ = cyclic_reduce(relator)
        return cls.rose(alphabet.rank, word, alphabet.names)

    def start(self, ref):
        o, t = self.edges[_edge(ref)]
        return o if ref > 0 else t

    def end(self, ref):
        o, t = self.edges[_edge(ref)]
        return t if ref > 0 else o

    def validate(self):
        """Raise :class:`ComplexError` unless the relator is an immersed cycle."""
        for idx, (o, t) in enumerate(self.edges):
            if not (0 <= o < self.num_vertices and 0 <= t < self.num_vertices):
                raise ComplexError(f"edge {idx} has an endpoint outside the vertex set")
        n = len(self.relator)
        for pos, ref in enumerate(self.relator):
            if ref == 0 or abs(ref) > len(self.edges):
                raise ComplexError(f"relator references unknown edge at position {pos}")
        for pos, ref in enumerate(self.relator):
            nxt = self.relator[(pos + 1) % n]
            if self.end(ref) != self.start(nxt):
                raise ComplexError(f"relator is not a closed path at position {pos}")
            if n > 1 and nxt == -ref:
                raise ComplexError(f"relator backtracks at position {pos}")
        if n == 1 and self.start(self.relator[0]) != self.end(self.relator[0]):
            raise ComplexError("relator is not closed")
        if not self._connected():
            raise ComplexError("graph is not connected")
        return self

    def _connected(self):
        if self.num_vertices == 0:
            return True
        adj = [[] for _ in range(self.num_vertices)]
        for o, t in self.edges:
            adj[o].append(t)
            adj[t].append(o)
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.num_vertices

    @property
    def euler_characteristic(self):
        return self.num_vertices - len(self.edges)

    def relator_edges(self):
        return sorted({_edge(ref) for ref in self.relator})

    def relator_vertices(self):
        return sorted({self.start(ref) for ref in self.relator})

    def support(self):
        """The smallest one-relator subcomplex, renumbered, with its relator."""
        keep_e = self.relator_edges()
        keep_v = self.relator_vertices()
        vmap = {v: i for i, v in enumerate(keep_v)}
        emap = {e: i for i, e in enumerate(keep_e)}
        edges = tuple((vmap[self.edges[e][0]], vmap[self.edges[e][1]]) for e in keep_e)
        rel = tuple((emap[_edge(r)] + 1) * (1 if r > 0 else -1) for r in self.relator)
        labels = tuple(self.labels[e] for e in keep_e) if self.labels else None
        return OneRelatorComplex(len(keep_v), edges, rel, labels)

    def degree(self):
        return period_degree(self.relator) if self.relator else 1

    def complexity(self):
        """Lexicographic pair ``(|relator|/degree - |support vertices|, -chi(graph))``."""
        if not self.relator:
            return (Fraction(0), -self.euler_characteristic)
        first = Fraction(len(self.relator), self.degree()) - len(self.relator_vertices())
        return (first, -self.euler_characteristic)

    def spanning_tree(self):
        """Breadth-first tree from vertex 0, edges taken in id order."""
        adj = [[] for _ in range(self.num_vertices)]
        for idx, (o, t) in enumerate(self.edges):
            adj[o].append((idx, t))
            adj[t].append((idx, o))
        parent = {0: None}
        tree = set()
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for idx, w in sorted(adj[v]):
                if w not in parent:
                    parent[w] = (v, idx)
                    tree.add(idx)
                    queue.append(w)
        return tree, parent

    def generator_edges(self):
        tree, _ = self.spanning_tree()
        return [e for e in range(len(self.edges)) if e not in tree]

    def path_word(self, refs):
        """Rewrite an edge path as a word over :meth:`generator_edges`."""
        index = {e: i + 1 for i, e in enumerate(self.generator_edges())}
        out = []
        for ref in refs:
            g = index.get(_edge(ref))
            if g is not None:
                out.append(g if ref > 0 else -g)
        return free_reduce(out)

    def tree_path(self, v):
        """Signed edge references of the tree path from vertex 0 to ``v``."""
        _, parent = self.spanning_tree()
        out = []
        while parent[v] is not None:
            u, idx = parent[v]
            o, _ = self.edges[idx]
            out.append(idx + 1 if o == u else -(idx + 1))
            v = u
        return list(reversed(out))

    def presentation(self):
        """``(rank, relator word)`` after contracting the spanning tree."""
        return len(self.generator_edges()), self.path_word(self.relator)

    def generator_names(self):
        gens = self.generator_edges()
        if self.labels is not None and self.num_vertices == 1:
            return tuple(self.labels[e] for e in gens)
        return None

    def is_magnus(self, edge_subset, vertex_subset=None):
        """True when the subgraph is connected and misses some relator edge."""
        edges = set(edge_subset)
        vertices = set(vertex_subset or ())
        for e in edges:
            vertices.update(self.edges[e])
        if not vertices:
            return bool(self.relator)
        adj = {v: [] for v in vertices}
        for e in edges:
            o, t = self.edges[e]
            adj[o].append(t)
            adj[t].append(o)
        start = next(iter(vertices))
        seen = {start}
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if seen != vertices:
            return False
        return any(_edge(r) not in edges for r in self.relator)

    def key(self):
        """Hashable form invariant under rotating or inverting the relator."""
        n = len(self.relator)
        variants = []
        for rel in (self.relator, tuple(-r for r in reversed(self.relator))):
            for i in range(max(n, 1)):
                variants.append(rel[i:] + rel[:i])
        return (self.num_vertices, self.edges, min(variants))

    def to_dict(self):
        return {
            "vertices": self.num_vertices,
            "edges": [list(e) for e in self.edges],
            "relator": list(self.relator),
        }

    @classmethod
    def from_dict(cls, data):
        out = cls(int(data["vertices"]), tuple(tuple(e) for e in data["edges"]), tuple(data["relator"]))
        out.validate()
        return out


def magnus_check(complex_: OneRelatorComplex, edge_subset, vertex_subset=None) -> bool:
    return complex_.is_magnus(edge_subset, vertex_subset)


def complexity(complex_: OneRelatorComplex):
    return complex_.complexity()


@dataclass(frozen=True)
class Presentation:
    """``<names | relator>`` as typed on the command line.

    Accepted forms are ``"a b | word"`` and ``"gens: a b ; relator: word"``.
    The relator is cyclically reduced; ``reduced`` records whether that
    changed it.
    """

    alphabet: Alphabet
    relator: tuple
    reduced: bool = False

    @classmethod
    def parse(cls, text: str):
        m = re.fullmatch(r"\s*gens\s*:\s*([^;]*);\s*relator\s*:(.*)", text, re.S)
        if m:
            gens, body = m.group(1), m.group(2)
        elif "|" in text:
            gens, body = text.split("|", 1)
        else:
            raise WordSyntaxError("expected 'a b | word' or 'gens: a b ; relator: word'")
        names = gens.replace(",", " ").split()
        if not names:
            raise WordSyntaxError("no generators given")
        alphabet = Alphabet(tuple(names))
        raw = tuple(parse_letters(body, alphabet))
        word, _ = cyclic_reduce(free_reduce(raw))
        return cls(alphabet, tuple(word), tuple(word) != tuple(raw))

    def format(self):
        return f"{' '.join(self.alphabet.names)} | {self.alphabet.format(self.relator)}"

    def complex(self) -> OneRelatorComplex:
        return OneRelatorComplex.from_presentation(self.alphabet, self.relator)
