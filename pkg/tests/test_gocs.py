import pytest

from conftest import BS_EXAMPLE, STABLE_EXAMPLE, cx, non_stable_split, word
from orhier.freegroup import cyclic_normal_form, cyclic_reduce, free_reduce, inverse, multiply, power
from orhier.gocs import (
    AlternatingWord,
    BsVerdict,
    BudgetExceeded,
    GocsEdge,
    GocsError,
    GocsGraph,
    GocsVertex,
    bs_detect,
    build_gocs,
    find_alternating_word,
    relation_holds,
    root_decomposition,
    verify_edge,
)
from orhier.hierarchy import build_tower
from orhier.stability import HNNSplitting, stable_number, substitute


def gocs_of(split):
    return build_gocs(split, stable_number(split))


def invariant(graph):
    sides = [v.side for v in graph.vertices]
    edges = sorted(
        (e.kind,) + tuple(sorted([(sides[e.origin], e.multipliers[0]), (sides[e.target], e.multipliers[1])]))
        for e in graph.edges
    )
    return sorted(sides), edges


def holds_in_parent(split, w):
    return split.is_trivial(split.parent_word_to_syllables(w))


def test_root_decomposition():
    w = (2, 1, 1, 1, 1, -2)
    key, g, e = root_decomposition(w)
    assert key == (1,) or key == (-1,)
    assert free_reduce(multiply(g, power(key, e), inverse(g))) == w
    with pytest.raises(GocsError):
        root_decomposition((1, -1))


def test_bs_graph(bs_split):
    graph = gocs_of(bs_split)
    assert [graph.label(i) for i in range(len(graph.vertices))] == ["A:[x]", "B:[y]"]
    t_edges = [e for e in graph.edges if e.kind == "t"]
    assert [(e.origin, e.target, e.multipliers) for e in t_edges] == [(0, 1, (1, 1))]
    between = [e for e in graph.edges if e.kind == "H" and e.origin != e.target]
    assert [(e.multipliers, e.xi) for e in between] == [((2, -3), (((-3,), 0),))]
    loops = [e for e in graph.edges if e.origin == e.target]
    assert len(loops) == 3 and all(e.multipliers == (1, 1) for e in loops)


def test_no_bs_graph_classes(stable_split):
    graph = gocs_of(stable_split)
    y, yyxyy = (2,), (2, 2, 1, 2, 2)
    expected = {
        ("A", cyclic_normal_form(y, allow_inverse=True)),
        ("A", cyclic_normal_form(yyxyy, allow_inverse=True)),
        ("B", cyclic_normal_form(y, allow_inverse=True)),
    }
    assert expected <= graph.classes()
    assert len(graph.vertices) == 10
    assert sum(e.kind == "t" for e in graph.edges) == 5


def test_every_edge_relation_verifies(bs_split, stable_split):
    for split in (bs_split, stable_split):
        graph = gocs_of(split)
        assert all(verify_edge(graph, e) for e in graph.edges)


def test_each_vertex_has_one_t_edge(stable_split):
    graph = gocs_of(stable_split)
    for v in range(len(graph.vertices)):
        idx, w = graph.partner(v)
        assert graph.edges[idx].kind == "t" and graph.vertices[w].side != graph.vertices[v].side


def test_alternating_word_in_bs_graph(bs_split):
    graph = gocs_of(bs_split)
    walk = find_alternating_word(graph)
    assert walk.describe(graph) == "H3 t0^-1"
    assert walk.multipliers(graph) == (2, -3)
    kinds = [graph.edges[i].kind for i, _ in walk.steps]
    assert kinds == ["H", "t"]


def test_no_alternating_word_in_stable_graph(stable_split):
    assert find_alternating_word(gocs_of(stable_split)) is None


def test_single_t_edge_cannot_alternate(bs_split):
    vertices = [GocsVertex("A", (1,), (1,), (1,), (), 1), GocsVertex("B", (1,), (2,), (2,), (), 1)]
    graph = GocsGraph(bs_split, vertices, [GocsEdge("t", 0, 1, (((), -1), ((), 0)), (1, 1))])
    assert find_alternating_word(graph) is None


def test_disjoint_cyclic_edge_groups_give_t_edge_only():
    split = HNNSplitting(("x", "y", "z"), (3,), ((1,),), ((2,),))
    graph = gocs_of(split)
    assert len(graph.vertices) == 2
    assert [e.kind for e in graph.edges] == ["t"]
    assert find_alternating_word(graph) is None


@pytest.mark.parametrize(
    "images",
    [((1, 2), (2,), (3,)), ((1,), (2, 1), (3,)), ((1,), (2,), (3, -1, -1))],
)
def test_graph_invariant_under_basis_change(stable_split, images):
    def sub(w):
        return free_reduce(substitute(w, images))

    s = stable_split
    moved = HNNSplitting(
        s.names, cyclic_reduce(sub(s.relator))[0], tuple(sub(w) for w in s.a_basis), tuple(sub(w) for w in s.b_basis)
    )
    assert invariant(gocs_of(moved)) == invariant(gocs_of(s))


def test_budget_exceeded(stable_split):
    with pytest.raises(BudgetExceeded):
        build_gocs(stable_split, stable_number(stable_split), budget=2)


def test_unstable_report_is_rejected():
    split = non_stable_split()
    with pytest.raises(GocsError):
        build_gocs(split, stable_number(split, cap=2))


def test_bs_detect_finds_witness():
    verdict = bs_detect(cx(BS_EXAMPLE))
    assert verdict.result == BsVerdict.CONTAINS
    w = verdict.witness
    assert w.parameters == (2, -3) and not w.z2
    assert w.a == word("a", "abt") and w.g == word("Bt", "abt")


def test_bs_witness_relation_in_input_generators(bs_split):
    a, g = word("a", "abt"), word("Bt", "abt")
    assert holds_in_parent(bs_split, multiply(inverse(g), power(a, 2), g, power(a, 3)))
    # The inverse conjugator swaps the exponents.
    h = inverse(g)
    assert holds_in_parent(bs_split, multiply(inverse(h), power(a, -3), h, power(a, -2)))
    assert not holds_in_parent(bs_split, multiply(inverse(g), power(a, 2), g, power(a, -2)))


def test_bs_witness_relation_at_level(bs_split):
    w = bs_detect(cx(BS_EXAMPLE)).witness
    assert relation_holds(bs_split, w.level_a, w.level_g, w.parameters)
    assert not relation_holds(bs_split, w.level_a, w.level_g, (2, 3))


@pytest.mark.parametrize(
    "text, result",
    [
        (STABLE_EXAMPLE, BsVerdict.NONE),
        ("a | aa", BsVerdict.NONE),
        ("a b | aaa", BsVerdict.NONE),
        ("a b | abAB", BsVerdict.CONTAINS),
        ("a b | abbAB", BsVerdict.CONTAINS),
        ("a t | TaatAAA", BsVerdict.UNKNOWN),
    ],
)
def test_bs_detect_verdicts(text, result):
    assert bs_detect(cx(text)).result == result


def test_torus_witness_is_flagged():
    w = bs_detect(cx("a b | abAB")).witness
    assert w.parameters == (1, 1) and w.z2


def test_witnesses_hold_in_input_presentation():
    for text in (BS_EXAMPLE, "a b | abAB", "a b | abbAB"):
        X = cx(text)
        top = build_tower(X).levels[0].splitting
        w = bs_detect(X).witness
        m, n = w.parameters
        assert holds_in_parent(top, multiply(inverse(w.g), power(w.a, m), w.g, power(w.a, -n)))


def test_small_budget_gives_unknown():
    verdict = bs_detect(cx(STABLE_EXAMPLE), budget=2)
    assert verdict.result == BsVerdict.UNKNOWN
    assert "budget" in verdict.reason


def test_alternating_word_image(bs_split):
    graph = gocs_of(bs_split)
    walk = AlternatingWord(0, ((3, 1), (0, -1)))
    assert walk.multipliers(graph) == (2, -3)
    # The image is z^-1 t.
    assert bs_split.is_trivial(walk.image(graph) + [((), -1), ((3,), 0)])
    assert not bs_split.is_trivial(walk.image(graph))
