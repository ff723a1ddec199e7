"""Graph of cyclic stabilisers of an HNN splitting with free vertex group.

Vertices are conjugacy classes of maximal cyclic subgroups of ``A`` or
``B`` that contain a cyclic segment stabiliser of the Bass-Serre tree.
They are found by extending segments one edge at a time: the stabiliser
``C`` of a segment ending in an edge of type ``S`` meets every other edge
at the same vertex in ``C ∩ S'^h``, and crossing an edge applies ``psi``
or its inverse.  Edges carry a conjugator ``xi`` and multipliers
``(k, l)`` with ``nu(o)^k = xi nu(t)^l xi^-1``.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .freegroup import cyclic_normal_form, cyclic_reduce, free_reduce, inverse, multiply, power, primitive_root, rotation_offset
from .stability import HNNSplitting, Regime, StabilityReport, stable_number, substitute
from .stallings import GeneratedSubgroup, pullback, subgroup_graph

A_SIDE, B_SIDE = "A", "B"
DEFAULT_BUDGET = 400


class GocsError(ValueError):
    pass


class BudgetExceeded(GocsError):
    pass


def root_decomposition(word):
    """``(R, g, e)`` with ``word = g R^e g^-1`` and ``R`` a canonical primitive cyclic word."""
    core, p = cyclic_reduce(word)
    if not core:
        raise GocsError("trivial element has no root")
    rho, d = primitive_root(core)
    key = cyclic_normal_form(rho, allow_inverse=True)
    i = rotation_offset(key, rho)
    if i is not None:
        return key, multiply(p, inverse(key[:i])), d
    flipped = inverse(key)
    i = rotation_offset(flipped, rho)
    return key, multiply(p, inverse(flipped[:i])), -d


@dataclass(frozen=True)
class GocsVertex:
    side: str
    key: tuple
    nu: tuple
    h_root: tuple
    h_conjugator: tuple
    h_exponent: int


@dataclass(frozen=True)
class GocsEdge:
    """``xi`` is a list of syllables ``(vertex_word, t_exponent)``."""

    kind: str
    origin: int
    target: int
    xi: tuple
    multipliers: tuple


@dataclass
class GocsGraph:
    split: HNNSplitting
    vertices: list
    edges: list

    def vertex_word(self, v):
        """``nu(v)`` over the vertex generators, read through the edge group basis."""
        vert = self.vertices[v]
        basis = self.split.a_basis if vert.side == A_SIDE else self.split.b_basis
        return free_reduce(substitute(vert.key, basis))

    def label(self, v):
        vert = self.vertices[v]
        word = self.vertex_word(v)
        if sum(1 if x > 0 else -1 for x in word) < 0:
            word = inverse(word)
        return f"{vert.side}:[{self.split.format(word)}]"

    def partner(self, v):
        for idx, e in enumerate(self.edges):
            if e.kind == "t" and v in (e.origin, e.target):
                return idx, (e.target if e.origin == v else e.origin)
        raise GocsError(f"vertex {v} has no t-edge")

    def classes(self):
        return {(vert.side, cyclic_normal_form(self.vertex_word(i), allow_inverse=True)) for i, vert in enumerate(self.vertices)}

    def to_dot(self, name="gocs"):
        lines = [f"graph {name} {{"]
        for i, vert in enumerate(self.vertices):
            shape = "box" if vert.side == A_SIDE else "ellipse"
            lines.append(f'  v{i} [label="{self.label(i)}", shape={shape}];')
        for e in self.edges:
            k, l = e.multipliers
            style = "dashed" if e.kind == "t" else "solid"
            xi = "".join(
                (self.split.format(w) if w else "") + ("t" * t if t > 0 else "T" * -t) for w, t in e.xi
            )
            lines.append(f'  v{e.origin} -- v{e.target} [label="{e.kind} ({k},{l}) {xi}", style={style}];')
        lines.append("}")
        return "\n".join(lines)


class _Side:
    def __init__(self, name, basis):
        self.name = name
        self.basis = tuple(basis)
        self.graph = subgroup_graph(self.basis)
        self.sub = GeneratedSubgroup(self.basis)

    def express(self, word):
        out = self.sub.express(word)
        if out is None:
            raise GocsError(f"word is not in edge group {self.name}")
        return out

    def item(self, generators):
        """Dedup key and representative; cyclic subgroups are replaced by their root."""
        local = [self.express(w) for w in generators]
        if len(local) == 1:
            key, _, _ = root_decomposition(local[0])
            return (self.name, 1, key), (substitute(key, self.basis),)
        return (self.name, len(local), subgroup_graph(local).unbased().key()), tuple(generators)

    def root(self, word):
        """Canonical generator of the maximal cyclic subgroup of this side containing ``word``."""
        key, g, e = root_decomposition(self.express(word))
        return key, g, e


class _Builder:
    def __init__(self, split: HNNSplitting, budget):
        self.split = split
        self.budget = budget
        self.sides = {A_SIDE: _Side(A_SIDE, split.free_a), B_SIDE: _Side(B_SIDE, split.free_b)}
        self.vertices = []
        self.index = {}

    def cross(self, side, generators):
        mapper = self.split.psi if side == A_SIDE else self.split.psi_inverse
        out = tuple(mapper(w) for w in generators)
        if any(w is None for w in out):
            raise GocsError("psi applied outside its domain")
        return (B_SIDE if side == A_SIDE else A_SIDE), out

    def add_vertex(self, side, word):
        key, _, _ = self.sides[side].root(word)
        if (side, key) in self.index:
            return self.index[(side, key)]
        nu = substitute(key, self.sides[side].basis)
        h_root, h_conj, h_exp = root_decomposition(nu)
        self.vertices.append(GocsVertex(side, key, nu, h_root, h_conj, h_exp))
        self.index[(side, key)] = len(self.vertices) - 1
        if len(self.vertices) > self.budget:
            raise BudgetExceeded(f"more than {self.budget} vertices")
        return self.index[(side, key)]

    def close(self, seeds):
        """Close ``(side, subgroup)`` items under edge intersections and crossing.

        An item is the stabiliser of a segment through the base vertex that
        also fixes an edge of the given side; it meets every edge stabiliser
        ``S^h`` there, and crossing an edge it fixes applies ``psi``.
        """
        seen = set()
        queue = deque()

        def push(side, gens):
            key, gens = self.sides[side].item(tuple(free_reduce(w) for w in gens))
            if key in seen:
                return
            seen.add(key)
            if len(seen) > self.budget:
                raise BudgetExceeded(f"more than {self.budget} segment stabilisers")
            queue.append((side, gens))

        for side, gens in seeds:
            push(side, gens)
        while queue:
            side, gens = queue.popleft()
            if len(gens) == 1:
                self.add_vertex(side, gens[0])
            push(*self.cross(side, gens))
            here = subgroup_graph(gens)
            for other in (A_SIDE, B_SIDE):
                for member in pullback(self.sides[other].graph, here):
                    push(other, member.generators)

    def t_edges(self):
        edges = []
        for v, vert in enumerate(list(self.vertices)):
            if vert.side != A_SIDE:
                continue
            image = self.split.psi(vert.nu)
            w = self.add_vertex(B_SIDE, image)
            side_b = self.sides[B_SIDE]
            key, g, e = side_b.root(image)
            if abs(e) != 1:
                raise GocsError("psi does not preserve maximal cyclic subgroups")
            q = substitute(g, side_b.basis)
            xi = (((), -1), (self.split.chart.to_vertex(q), 0))
            edges.append(GocsEdge("t", v, w, xi, (1, e)))
        return edges

    def h_edges(self):
        edges = []
        n = len(self.vertices)
        for v in range(n):
            for w in range(v, n):
                a, b = self.vertices[v], self.vertices[w]
                if a.h_root != b.h_root:
                    continue
                if a.side != b.side and a.side == B_SIDE:
                    a, b, v_, w_ = b, a, w, v
                else:
                    v_, w_ = v, w
                m, k = abs(a.h_exponent), abs(b.h_exponent)
                g = math.gcd(m, k)
                excluded = None
                if a.side == b.side:
                    shift = multiply(inverse(a.h_conjugator), b.h_conjugator)
                    excluded = _power_of(shift, a.h_root)
                sign = 1 if a.h_exponent * b.h_exponent > 0 else -1
                for j in range(g):
                    if excluded is not None and (j - excluded) % g == 0:
                        continue
                    word = self.short_conjugator(a, b, j, g)
                    edges.append(GocsEdge("H", v_, w_, ((word, 0),), (k // g, sign * m // g)))
        return edges


    def short_conjugator(self, a, b, j, g):
        """Shortest vertex word in the double coset ``g_a R^(j + gZ) g_b^-1``, searched up to a small length."""
        for word, free in self.candidates():
            s = _power_of(multiply(inverse(a.h_conjugator), free, b.h_conjugator), a.h_root)
            if s is not None and (s - j) % g == 0:
                return word
        return self.split.chart.to_vertex(multiply(a.h_conjugator, power(a.h_root, j), inverse(b.h_conjugator)))

    def candidates(self):
        if not hasattr(self, "_candidates"):
            rank = self.split.rank
            limit = 4 if rank <= 3 else 3
            letters = [x for g in range(1, rank + 1) for x in (g, -g)]
            words, frontier = [()], [()]
            for _ in range(limit):
                frontier = [w + (x,) for w in frontier for x in letters if not w or w[-1] != -x]
                words.extend(frontier)
            self._candidates = [(w, free_reduce(self.split.chart.to_free(w))) for w in words]
        return self._candidates


def _power_of(word, root):
    """``s`` with ``word == root^s``, or None."""
    word = free_reduce(word)
    if not word:
        return 0
    if len(word) % len(root):
        return None
    s = len(word) // len(root)
    for cand in (s, -s):
        if power(root, cand) == word:
            return cand
    return None


def build_gocs(split: HNNSplitting, report: StabilityReport | None = None, budget: int = DEFAULT_BUDGET) -> GocsGraph:
    """The graph of cyclic stabilisers; raises :class:`BudgetExceeded` past ``budget``.

    Cyclic classes discarded while computing ``report`` are added as seeds.
    """
    if split.regime is not Regime.FREE_VERTEX:
        raise GocsError("graph of cyclic stabilisers needs a free vertex group")
    if report is not None and report.exceeded:
        raise GocsError("splitting is not known to be stable")
    builder = _Builder(split, budget)
    seeds = [(A_SIDE, split.free_a), (B_SIDE, split.free_b)]
    if report is not None:
        for d in report.discards:
            seeds.append((A_SIDE, (d.generator,)))
    builder.close(seeds)
    t_edges = builder.t_edges()
    edges = t_edges + builder.h_edges()
    graph = GocsGraph(split, builder.vertices, edges)
    for e in edges:
        if not verify_edge(graph, e):
            raise GocsError(f"edge relation fails for {e}")
    return graph


def _syllables_of(split, free_word):
    return [(split.chart.to_vertex(free_word), 0)]


def _invert(syllables):
    out = []
    for w, e in reversed(syllables):
        out.append(((), -e))
        out.append((inverse(w), 0))
    return out


def verify_edge(graph: GocsGraph, edge: GocsEdge) -> bool:
    """Check ``nu(o)^k = xi nu(t)^l xi^-1`` by Britton reduction."""
    split = graph.split
    k, l = edge.multipliers
    lhs = _syllables_of(split, power(graph.vertices[edge.origin].nu, k))
    rhs = list(edge.xi) + _syllables_of(split, power(graph.vertices[edge.target].nu, l)) + _invert(edge.xi)
    return split.is_trivial(lhs + _invert(rhs))


# Alternating words and Baumslag-Solitar witnesses


@dataclass(frozen=True)
class AlternatingWord:
    """Closed walk ``(edge, +-1), ...`` alternating H-edges and t-edges, starting at ``start``."""

    start: int
    steps: tuple

    def multipliers(self, graph: GocsGraph):
        K = L = 1
        for idx, sign in self.steps:
            k, l = graph.edges[idx].multipliers
            if sign < 0:
                k, l = l, k
            K, L = K * k, L * l
        return K, L

    def image(self, graph: GocsGraph):
        """``mu`` of the walk as syllables."""
        out = []
        for idx, sign in self.steps:
            xi = list(graph.edges[idx].xi)
            out.extend(xi if sign > 0 else _invert(xi))
        return out

    def describe(self, graph: GocsGraph):
        parts = []
        for idx, sign in self.steps:
            e = graph.edges[idx]
            parts.append(f"{e.kind}{idx}{'' if sign > 0 else '^-1'}")
        return " ".join(parts)


def find_alternating_word(graph: GocsGraph):
    """Shortest closed walk taking an H-edge then a t-edge, repeatedly; None when there is none.

    Consecutive steps always differ in kind, so no backtracking can occur
    and every such walk is cyclically reduced.
    """
    n = len(graph.vertices)
    partner = {}
    for idx, e in enumerate(graph.edges):
        if e.kind == "t":
            partner[e.origin] = (idx, 1, e.target)
            partner[e.target] = (idx, -1, e.origin)
    moves = {v: [] for v in range(n)}
    for idx, e in enumerate(graph.edges):
        if e.kind != "H":
            continue
        for u, sign, w in ((e.origin, 1, e.target), (e.target, -1, e.origin)):
            if w in partner:
                t_idx, t_sign, nxt = partner[w]
                moves[u].append((nxt, ((idx, sign), (t_idx, t_sign))))
            if e.origin == e.target:
                break
    best = None
    for root in range(n):
        back = {root: None}
        queue = deque([root])
        found = None
        while queue and found is None:
            v = queue.popleft()
            for w, steps in moves[v]:
                if w == root:
                    found = (v, steps)
                    break
                if w not in back:
                    back[w] = (v, steps)
                    queue.append(w)
        if found is None:
            continue
        v, steps = found
        path = [steps]
        while back[v] is not None:
            u, st = back[v]
            path.append(st)
            v = u
        walk = tuple(step for pair in reversed(path) for step in pair)
        if best is None or len(walk) < len(best.steps):
            best = AlternatingWord(root, walk)
    return best


@dataclass(frozen=True)
class BsWitness:
    """``g^-1 a^m g = a^n`` with ``(m, n) = parameters``, in the input generators.

    ``z2`` marks the commuting case ``m = n = +-1``, where ``<a, g>`` is ``Z^2``.
    """

    level: int
    a: tuple
    g: tuple
    parameters: tuple
    walk: str
    level_a: tuple
    level_g: tuple

    @property
    def z2(self):
        m, n = self.parameters
        return m == n and abs(m) == 1


@dataclass(frozen=True)
class BsVerdict:
    result: str
    reason: str
    witness: BsWitness | None = None

    CONTAINS = "ContainsBS"
    NONE = "NoBS"
    UNKNOWN = "Unknown"


def _power_syllables(syllables, k):
    base = syllables if k >= 0 else _invert(syllables)
    return [s for _ in range(abs(k)) for s in base]


def relation_holds(split: HNNSplitting, a, g, parameters):
    """Britton check of ``g^-1 a^m g a^-n = 1`` for syllable lists ``a`` and ``g``."""
    m, n = parameters
    a, g = list(a), list(g)
    word = _invert(g) + _power_syllables(a, m) + g + _power_syllables(a, -n)
    return split.is_trivial(word)


def syllables_to_parent(split: HNNSplitting, syllables):
    out = []
    for w, e in syllables:
        out.extend(substitute(w, split.vertex_images))
        out.extend(power(split.stable_image, e))
    return free_reduce(out)


def witness_from_walk(graph: GocsGraph, walk: AlternatingWord):
    """``(a, g, (m, n))`` as vertex-level syllables, checked by Britton reduction."""
    split = graph.split
    word = graph.vertex_word(walk.start)
    if sum(1 if x > 0 else -1 for x in word) < 0:
        word = inverse(word)
    a = [(word, 0)]
    g = walk.image(graph)
    params = walk.multipliers(graph)
    if not relation_holds(split, a, g, params):
        raise GocsError("alternating walk does not give a Baumslag-Solitar relation")
    if not any(kind == "t" for kind, _ in split.britton_reduce(g)):
        raise GocsError("alternating walk image is elliptic")
    return a, g, params


def _lift_to_input(tower, level, word):
    for lvl in reversed(tower.levels[:level]):
        word = substitute(word, lvl.splitting.vertex_images)
    return free_reduce(word)


def _examine_level(tower, index, cap, budget):
    """A verdict for one level, or None when the level is clean."""
    split = tower.levels[index].splitting
    if split.regime is not Regime.FREE_VERTEX:
        return BsVerdict(BsVerdict.UNKNOWN, f"level {index}: vertex group is not free")
    report = stable_number(split, cap)
    if report.exceeded or stable_number(split.inverted(), cap).exceeded:
        return BsVerdict(BsVerdict.UNKNOWN, f"level {index}: splitting not stable within depth {report.cap}")
    try:
        graph = build_gocs(split, report, budget)
    except BudgetExceeded:
        return BsVerdict(BsVerdict.UNKNOWN, f"level {index}: cyclic stabiliser graph exceeded budget {budget}")
    walk = find_alternating_word(graph)
    if walk is None:
        return None
    a, g, params = witness_from_walk(graph, walk)
    parent_a = syllables_to_parent(split, a)
    parent_g = syllables_to_parent(split, g)
    if not split.is_trivial(split.parent_word_to_syllables(parent_g) + _invert(g)):
        raise GocsError("witness did not survive translation to the parent generators")
    witness = BsWitness(
        level=index,
        a=_lift_to_input(tower, index, parent_a),
        g=_lift_to_input(tower, index, parent_g),
        parameters=params,
        walk=walk.describe(graph),
        level_a=tuple(a),
        level_g=tuple(g),
    )
    return BsVerdict(BsVerdict.CONTAINS, f"level {index}: alternating walk {witness.walk}", witness)


def _decide_tower(tower, cap, budget):
    if not tower.levels:
        return BsVerdict(BsVerdict.NONE, "relator is a power of a primitive element")
    pending = None
    for index in reversed(range(len(tower.levels))):
        verdict = _examine_level(tower, index, cap, budget)
        if verdict is None:
            continue
        if verdict.result == BsVerdict.CONTAINS:
            return verdict
        pending = pending or verdict
    if pending is not None:
        return pending
    return BsVerdict(BsVerdict.NONE, f"all {len(tower.levels)} levels stable with no alternating walk")


def bs_detect(X, cap=None, budget=DEFAULT_BUDGET, enumerate_budget=0):
    """Decide whether ``pi_1(X)`` contains a Baumslag-Solitar subgroup.

    The canonical tower is tried first.  With ``enumerate_budget > 0`` the
    other top-level covers are tried in turn while the verdict stays
    ``Unknown``, at most that many of them.
    """
    from .hierarchy import build_tower, candidate_covers

    verdict = _decide_tower(build_tower(X), cap, budget)
    if verdict.result != BsVerdict.UNKNOWN or enumerate_budget <= 0:
        return verdict
    for spec in candidate_covers(X)[:enumerate_budget]:
        alternative = _decide_tower(build_tower(X, "first-found", first=spec), cap, budget)
        if alternative.result != BsVerdict.UNKNOWN:
            return alternative
    return verdict
