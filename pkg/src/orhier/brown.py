"""Trace paths of relators in Z^n and supporting hyperplanes.

The trace of a cyclically reduced word is its lattice path from 0 to its
abelianisation.  A hyperplane parallel to the endpoint meets the trace in
a single simple vertex or edge exactly when some epimorphism ``phi``
vanishing on the endpoint attains its extremum there; candidates for
``phi`` come from the faces of the convex hull of the trace, projected
along the endpoint.  All arithmetic is exact.
"""

from __future__ import annotations

import enum
import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .complex import OneRelatorComplex
from .covers import CyclicCoverSpec, minimal_tree_domain
from .freegroup import abelianize, cyclic_reduce


class BrownClass(enum.Enum):
    ASCENDING = "AscendingOnly"
    DESCENDING = "DescendingOnly"
    BOTH = "BothFreeByCyclic"
    NEITHER = "Neither"


@dataclass(frozen=True)
class TracePath:
    """Lattice path of a word from 0 to its abelianisation.

    A closed path visits its start once; otherwise every prefix is a visit.
    """

    word: tuple
    rank: int
    points: tuple

    @property
    def endpoint(self):
        return self.points[-1]

    @property
    def visits(self):
        return self.points[:-1] if not any(self.endpoint) else self.points

    def vertex_multiplicity(self):
        counts = {}
        for p in self.visits:
            counts[p] = counts.get(p, 0) + 1
        return counts

    def edges(self):
        """Unordered lattice edges ``(p, q)`` with ``p < q`` in step order."""
        return [tuple(sorted((self.points[i], self.points[i + 1]))) for i in range(len(self.word))]

    def edge_multiplicity(self):
        counts = {}
        for e in self.edges():
            counts[e] = counts.get(e, 0) + 1
        return counts

    def simple_vertices(self):
        return sorted(p for p, c in self.vertex_multiplicity().items() if c == 1)

    def simple_edges(self):
        return sorted(e for e, c in self.edge_multiplicity().items() if c == 1)

    def to_dot(self, name="trace"):
        simple_v = set(self.simple_vertices())
        simple_e = set(self.simple_edges())
        lines = [f"graph {name} {{"]
        for p in sorted(self.vertex_multiplicity()):
            style = ', color="red"' if p in simple_v else ""
            lines.append(f'  "{p}" [label="{p}"{style}];')
        for p, q in sorted(self.edge_multiplicity()):
            style = ' [color="red"]' if (p, q) in simple_e else ""
            lines.append(f'  "{p}" -- "{q}"{style};')
        lines.append("}")
        return "\n".join(lines)


def trace(word, rank=None) -> TracePath:
    word = tuple(word)
    if not word:
        raise ValueError("the empty word has no trace")
    if cyclic_reduce(word)[0] != word:
        raise ValueError("trace needs a cyclically reduced word")
    if rank is None:
        rank = max(abs(x) for x in word)
    point = [0] * rank
    points = [tuple(point)]
    for x in word:
        point[abs(x) - 1] += 1 if x > 0 else -1
        points.append(tuple(point))
    return TracePath(word, rank, tuple(points))


@dataclass(frozen=True)
class SupportLine:
    """``phi . p <= offset`` on the trace (``>=`` when ``side`` is ``"min"``), touching one simple cell."""

    normal: tuple
    offset: Fraction
    side: str
    touching: tuple

    @property
    def kind(self):
        return "vertex" if len(self.touching) == 1 else "edge"


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _nullspace(rows, n):
    """Rational basis of ``{v : r . v = 0}`` via reduced row echelon form."""
    m = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        m[r] = [x / m[r][c] for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -m[i][f]
        basis.append(v)
    return basis


def _integral(v):
    den = math.lcm(*(x.denominator for x in v))
    ints = [int(x * den) for x in v]
    g = math.gcd(*ints)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _rank(rows, n):
    return n - len(_nullspace(rows, n)) if rows else 0


def _span_coordinates(points, n):
    """Rational coordinates of ``points`` in their affine span, with the lift back to functionals."""
    origin = points[0]
    diffs = [tuple(a - b for a, b in zip(p, origin)) for p in points]
    basis = []
    for d in diffs:
        if any(d) and _rank(basis + [d], n) > len(basis):
            basis.append(d)
    if not basis:
        return basis, [() for _ in points]
    k = len(basis)
    coords = []
    for d in diffs:
        # Solve sum lambda_i basis_i = d through the Gram system.
        gram = [[Fraction(_dot(b, c)) for c in basis] + [Fraction(_dot(b, d))] for b in basis]
        for c in range(k):
            p = next(i for i in range(c, k) if gram[i][c] != 0)
            gram[c], gram[p] = gram[p], gram[c]
            gram[c] = [x / gram[c][c] for x in gram[c]]
            for i in range(k):
                if i != c and gram[i][c] != 0:
                    f = gram[i][c]
                    gram[i] = [a - f * b for a, b in zip(gram[i], gram[c])]
        coords.append(tuple(row[k] for row in gram))
    return basis, coords


def _by_angle(u, v):
    hu, hv = (u[1] < 0 or (u[1] == 0 and u[0] < 0)), (v[1] < 0 or (v[1] == 0 and v[0] < 0))
    if hu != hv:
        return 1 if hu else -1
    cross = u[0] * v[1] - u[1] * v[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _facet_normals(coords, d):
    """Outward normals of the hull facets of ``coords`` in ``Q^d``."""
    if d == 1:
        return [(Fraction(1),), (Fraction(-1),)]
    distinct = sorted(set(coords))
    normals = set()
    for combo in itertools.combinations(distinct, d):
        diffs = [tuple(a - b for a, b in zip(c, combo[0])) for c in combo[1:]]
        null = _nullspace(diffs, d)
        if len(null) != 1:
            continue
        nvec = _integral(null[0])
        level = _dot(nvec, combo[0])
        values = [_dot(nvec, c) for c in distinct]
        if all(v <= level for v in values):
            normals.add(nvec)
        if all(v >= level for v in values):
            normals.add(tuple(-x for x in nvec))
    return sorted(normals)


def _lift_functional(basis, target, lattice):
    """An integral ``phi`` in the span of ``lattice`` whose values on ``basis`` are proportional to ``target``."""
    k = len(lattice)
    rows = [[Fraction(_dot(b, l)) for l in lattice] for b in basis]
    # Solve rows . c = target for c (rows is len(basis) x k, full row rank).
    aug = [r + [Fraction(t)] for r, t in zip(rows, target)]
    pivots = []
    r = 0
    for c in range(k):
        p = next((i for i in range(r, len(aug)) if aug[i][c] != 0), None)
        if p is None:
            continue
        aug[r], aug[p] = aug[p], aug[r]
        aug[r] = [x / aug[r][c] for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    coeffs = [Fraction(0)] * k
    for i, c in enumerate(pivots):
        coeffs[c] = aug[i][k]
    phi = [sum(coeffs[j] * lattice[j][i] for j in range(k)) for i in range(len(lattice[0]))]
    return _integral(phi)


def _orient(phi):
    lead = next((x for x in phi if x), 0)
    return phi if lead >= 0 else tuple(-x for x in phi)


def candidate_functionals(tr: TracePath):
    """Integral ``phi`` vanishing on the endpoint, one per hull face of the projected trace.

    The normal cone of each hull vertex and edge contributes the sum of its
    facet normals, an interior direction of that cone.  In a planar span the
    fan is first refined by its negative, so every combination of extremal
    cells on the two sides gets a representative.
    """
    from .hierarchy import integer_kernel

    n = tr.rank
    e = tr.endpoint
    lattice = integer_kernel([list(e)], n) if any(e) else [[int(i == j) for j in range(n)] for i in range(n)]
    if not lattice:
        return []
    proj = [tuple(_dot(l, p) for l in lattice) for p in tr.points[:-1]]
    m = len(lattice)
    basis, coords = _span_coordinates(proj, m)
    d = len(basis)
    if d == 0:
        return []
    normals = _facet_normals(coords, d)
    faces = set()
    if d == 2:
        # Refine the normal fan by its negative so both support sides are fixed per cone.
        rays = sorted(set(normals) | {tuple(-x for x in n) for n in normals}, key=functools.cmp_to_key(_by_angle))
        for i, ray in enumerate(rays):
            nxt = rays[(i + 1) % len(rays)]
            faces.add(ray)
            faces.add(_integral([a + b for a, b in zip(ray, nxt)]))
        normals = []
    cells = [(c,) for c in set(coords)] if normals else []
    for i in range(len(coords) if normals else 0):
        cells.append((coords[i], coords[(i + 1) % len(coords)]))
    for cell in cells:
        incident = [nv for nv in normals if all(_dot(nv, c) == max(_dot(nv, x) for x in coords) for c in cell)]
        if not incident:
            continue
        total = tuple(sum(col) for col in zip(*incident))
        if any(total):
            faces.add(total)
    out = []
    for f in sorted(faces):
        phi_proj = _lift_functional(basis, f, [tuple(int(i == j) for j in range(m)) for i in range(m)])
        phi = tuple(sum(phi_proj[j] * lattice[j][i] for j in range(m)) for i in range(n))
        g = math.gcd(*phi)
        if g:
            out.append(tuple(x // g for x in phi))
    return sorted(set(out))


def support_line(tr: TracePath, phi, side: str):
    """The supporting line of ``phi`` on ``side`` when it meets the trace in one simple cell, else None."""
    values = [_dot(phi, p) for p in tr.visits]
    level = max(values) if side == "max" else min(values)
    touched = sorted({p for p, v in zip(tr.visits, values) if v == level})
    vcount = tr.vertex_multiplicity()
    if len(touched) == 1:
        if vcount[touched[0]] == 1:
            return SupportLine(tuple(phi), Fraction(level), side, tuple(touched))
        return None
    if len(touched) == 2:
        edge = (touched[0], touched[1])
        if tr.edge_multiplicity().get(edge, 0) == 1:
            return SupportLine(tuple(phi), Fraction(level), side, edge)
    return None


def verify_support_line(tr: TracePath, line: SupportLine) -> bool:
    values = [_dot(line.normal, p) for p in tr.points]
    if line.side == "max" and any(v > line.offset for v in values):
        return False
    if line.side == "min" and any(v < line.offset for v in values):
        return False
    on = {p for p, v in zip(tr.points, values) if v == line.offset}
    if on != set(line.touching):
        return False
    if line.kind == "vertex":
        return tr.vertex_multiplicity()[line.touching[0]] == 1
    return tr.edge_multiplicity().get(line.touching, 0) == 1


def qualifying_lines(tr: TracePath):
    """All ``(phi, min-side line, max-side line)`` with ``phi`` oriented, either line possibly None."""
    out = []
    for phi in sorted({_orient(p) for p in candidate_functionals(tr)}):
        low, high = support_line(tr, phi, "min"), support_line(tr, phi, "max")
        if low or high:
            out.append((phi, low, high))
    return out


@dataclass(frozen=True)
class BrownResult:
    classification: BrownClass
    lines: tuple


def brown_criterion(word) -> BrownResult:
    """Classify a two-generator relator by its supporting lines.

    ``phi`` is oriented with first nonzero coordinate positive; a simple
    minimum counts as ascending and a simple maximum as descending.
    """
    word, _ = cyclic_reduce(tuple(word))
    if any(abs(x) > 2 for x in word):
        raise ValueError("brown_criterion needs a word over two generators")
    tr = trace(word, 2)
    found = qualifying_lines(tr)
    both = [(p, lo, hi) for p, lo, hi in found if lo and hi]
    if both:
        return BrownResult(BrownClass.BOTH, both[0][1:])
    lows = [lo for _, lo, _ in found if lo]
    if lows:
        return BrownResult(BrownClass.ASCENDING, (lows[0],))
    highs = [hi for _, _, hi in found if hi]
    if highs:
        return BrownResult(BrownClass.DESCENDING, (highs[0],))
    return BrownResult(BrownClass.NEITHER, ())


@dataclass(frozen=True)
class HyperplaneSplitting:
    """``phi`` from a supporting hyperplane, the tree domain it produces and a free face of that domain."""

    phi: tuple
    line: SupportLine
    domain: object
    free_face: tuple


def free_face(domain):
    """An edge of ``domain`` crossed exactly once by the two-cells it contains, or None."""
    counts = {}
    for j in domain.cells:
        steps, _ = domain.spec.relator_path(j)
        for edge, _ in steps:
            counts[edge] = counts.get(edge, 0) + 1
    once = sorted(e for e, c in counts.items() if c == 1 and e in domain.edges)
    return once[0] if once else None


def hyperplane_splitting(word, rank=None):
    """First qualifying ``phi`` with its certified free face, or None."""
    word, _ = cyclic_reduce(tuple(word))
    if rank is None:
        rank = max(abs(x) for x in word)
    tr = trace(word, rank)
    X = OneRelatorComplex.rose(rank, word)
    for phi, low, high in qualifying_lines(tr):
        if abelianize(word, rank) and _dot(phi, abelianize(word, rank)) != 0:
            continue
        domain = minimal_tree_domain(CyclicCoverSpec.from_generator_values(X, phi))
        face = free_face(domain)
        if face is not None:
            return HyperplaneSplitting(phi, low or high, domain, face)
    return None
