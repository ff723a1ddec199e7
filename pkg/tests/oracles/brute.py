"""Independent brute-force oracles used to cross-check the library."""

import itertools
from collections import deque

import networkx as nx

from orhier.freegroup import cyclic_normal_form, cyclic_reduce, free_reduce, inverse, multiply


def reduced_words(rank, max_length):
    """All freely reduced words of length <= max_length."""
    letters = [g * s for g in range(1, rank + 1) for s in (1, -1)]
    layer = [()]
    yield ()
    for _ in range(max_length):
        nxt = []
        for w in layer:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        yield from nxt
        layer = nxt


def cyclic_words(rank, length):
    for w in itertools.product([g * s for g in range(1, rank + 1) for s in (1, -1)], repeat=length):
        if all(w[i] != -w[i + 1] for i in range(length - 1)) and (length < 2 or w[0] != -w[-1]):
            yield w


def nielsen_primitive_classes(max_class_length, word_cap):
    """Cyclic normal forms of primitive elements of F(a, b), found by Nielsen moves on bases."""
    start = ((1,), (2,))
    seen = {start}
    queue = deque([start])
    found = set()
    while queue:
        u, v = queue.popleft()
        for w in (u, v):
            c = cyclic_normal_form(w, allow_inverse=True)
            if len(c) <= max_class_length:
                found.add(c)
        moves = [
            (v, u),
            (inverse(u), v),
            (multiply(u, v), v),
            (multiply(v, u), v),
            (u, multiply(v, u)),
            (u, multiply(u, v)),
        ]
        for b in moves:
            if max(len(b[0]), len(b[1])) > word_cap or b in seen:
                continue
            seen.add(b)
            queue.append(b)
    return found


def subgroup_elements(generators, max_product):
    """Elements of <generators> that are products of at most max_product generators or inverses."""
    gens = [tuple(g) for g in generators] + [inverse(g) for g in generators]
    out = {()}
    layer = {()}
    for _ in range(max_product):
        layer = {multiply(w, g) for w in layer for g in gens} - out
        out |= layer
    return out


def window_components(spec, levels, generators=None):
    from orhier.covers import window

    win = window(spec, levels, generators)
    g = nx.Graph()
    g.add_nodes_from(win.vertices)
    for edge in win.edges:
        a, b = spec.edge_ends(edge)
        g.add_edge(a, b)
    return nx.number_connected_components(g)


def box_functionals(rank, bound, endpoint):
    for phi in itertools.product(range(-bound, bound + 1), repeat=rank):
        if any(phi) and sum(a * b for a, b in zip(phi, endpoint)) == 0:
            yield phi


def brute_second_family(split, conjugator_length):
    """Unbased keys of non-cyclic psi(A ∩ g B g^-1) over conjugators g of bounded length.

    The second family of the stability iteration read straight from its
    definition, with free-coordinate conjugators enumerated explicitly.
    """
    from orhier.stallings import intersection_at_basepoint, subgroup_graph

    rank = max([abs(x) for w in split.free_a + split.free_b for x in w] + [1])
    letters_in = set(split.chart.letters) if split.chart else set(range(1, rank + 1))
    b_graph = split.b_graph
    if b_graph.rank < 2:
        return set()
    keys = set()
    for g in reduced_words(rank, conjugator_length):
        if any(abs(x) not in letters_in for x in g):
            continue
        conj = [multiply(g, w, inverse(g)) for w in b_graph.basis()]
        gens = intersection_at_basepoint(split.a_graph, subgroup_graph(conj))
        if len(gens) == 0:
            continue
        graph = subgroup_graph(gens)
        if graph.rank < 2:
            continue
        image = subgroup_graph([split.psi(w) for w in graph.basis()])
        keys.add(image.unbased().key())
    return keys
