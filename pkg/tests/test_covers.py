import pytest

from conftest import STABLE_EXAMPLE, BS_EXAMPLE, cx, random_cyclic_word, splitting
from oracles.brute import window_components
from orhier.complex import OneRelatorComplex
from orhier.covers import (
    CoverError,
    CyclicCoverSpec,
    _without,
    abelian_lift,
    component_count,
    free_cover_splitting,
    minimal_tree_domain,
    primitive_z2,
    relator_is_primitive_power,
    splitting_from_domain,
    torsion_free_quotient,
    window,
)
from orhier.freegroup import abelianize, is_primitive
from orhier.hierarchy import candidate_covers
from orhier.stallings import subgroup_graph

ROSE2 = OneRelatorComplex.rose(2, (), ("a", "b"))


def primitive_spec():
    return CyclicCoverSpec.from_generator_values(ROSE2, (5, 3))


def test_primitive_windows():
    spec = primitive_spec()
    short = window(spec, range(0, 7))
    assert short.is_connected()
    assert "intersection with the translate is disconnected" in short.violations()
    full = window(spec, range(0, 8))
    assert full.is_tree_domain()
    domain = minimal_tree_domain(spec)
    assert domain.levels() == list(range(8))
    assert domain.edges <= full.edges


def test_component_count_examples():
    spec = primitive_spec()
    assert component_count(spec, range(8)) == 1
    assert component_count(spec, range(5), generators=[]) == 5
    zero = CyclicCoverSpec.from_generator_values(ROSE2, (1, 0))
    assert component_count(zero, range(4), generators=[1]) == 4


def _corpus_specs(rng, count=40):
    specs = [primitive_spec()]
    for text in (STABLE_EXAMPLE, BS_EXAMPLE, "a t | TaatAAA", "a b | abAB", "a t | TataaTAtAAA"):
        specs.extend(candidate_covers(cx(text)))
    while len(specs) < count:
        rank = rng.choice([2, 3])
        w = random_cyclic_word(rng, rank, rng.randint(4, 10))
        X = OneRelatorComplex.rose(rank, w)
        specs.extend(candidate_covers(X)[:1])
    return specs


def test_component_count_matches_graph_components(rng):
    for spec in _corpus_specs(rng):
        gens = spec.base.generator_edges()
        for lo in range(-2, 1):
            for width in range(1, 13 - 2):
                levels = range(lo, lo + width)
                assert component_count(spec, levels) == window_components(spec, levels)
                assert component_count(spec, levels, gens[:1]) == window_components(spec, levels, gens[:1])


def test_minimal_domains_satisfy_axioms_and_minimality(rng):
    for spec in _corpus_specs(rng, 25):
        domain = minimal_tree_domain(spec)
        assert domain.is_tree_domain()
        if spec.base.relator:
            assert len(domain.cells) == 1
            j = next(iter(domain.cells))
            steps, verts = spec.relator_path(j)
            pinned_e = {edge for edge, _ in steps}
            pinned_v = set(verts)
        else:
            pinned_e, pinned_v = set(), set()
        for edge in domain.edges - pinned_e:
            assert not _without(domain, edge=edge).is_tree_domain()
        for v in domain.vertices - pinned_v:
            trial, incident = _without(domain, vertex=v)
            assert incident & pinned_e or not trial.is_tree_domain()


def test_graph_cover_euler_characteristics():
    for values in ((5, 3), (1, 0), (2, 7), (-3, 4)):
        spec = CyclicCoverSpec.from_generator_values(ROSE2, values)
        domain = minimal_tree_domain(spec)
        assert domain.euler_characteristic == -1 + 1
        overlap = domain.intersection(domain.translate(1))
        assert overlap.euler_characteristic == 1


def test_complexity_decreases_in_domains(rng):
    from orhier.hierarchy import vertex_complex

    for spec in _corpus_specs(rng, 25):
        if not spec.base.relator:
            continue
        split = splitting_from_domain(minimal_tree_domain(spec))
        assert vertex_complex(split).complexity() < spec.base.complexity()


def test_bs_domain_relator():
    split = splitting("a t | TaatAAA", "exp(t)")
    assert split.format(split.relator) == "xxYYY"
    assert split.a_basis == ((1,),) and split.b_basis == ((2,),)


def test_torus_domain():
    spec = CyclicCoverSpec.parse(cx("a b | abAB"), "a=1 b=0")
    split = splitting_from_domain(minimal_tree_domain(spec))
    assert split.rank == 2 and len(split.relator) == 2
    assert is_primitive(split.relator, 2)
    assert split.a_basis == ((1,),) and split.b_basis == ((2,),)


def test_stable_example_splitting(stable_split):
    s = stable_split
    assert s.format(s.relator) == "zzyzzXX"
    assert [s.format(w) for w in s.a_basis] == ["x", "y"]
    assert [s.format(w) for w in s.b_basis] == ["y", "z"]


def test_bs_example_splitting(bs_split):
    s = bs_split
    assert s.format(s.relator) == "yyzxZyzxZ"
    assert [s.format(w) for w in s.a_basis] == ["x"]
    assert [s.format(w) for w in s.b_basis] == ["y"]


def test_splittings_are_magnus_and_free(rng):
    for spec in _corpus_specs(rng, 25):
        if not spec.base.relator:
            continue
        domain = minimal_tree_domain(spec)
        split = splitting_from_domain(domain)
        steps, _ = spec.relator_path(next(iter(domain.cells)))
        rel_edges = {edge for edge, _ in steps}
        for shift in (1, -1):
            overlap = domain.intersection(domain.translate(shift))
            assert overlap.is_connected()
            assert not rel_edges <= overlap.edges
        rel_letters = {abs(x) for x in split.relator}
        for basis, letters in ((split.a_basis, split.a_letters), (split.b_basis, split.b_letters)):
            if letters is not None:
                assert all(abs(x) in letters for w in basis for x in w)
                assert not rel_letters <= set(letters)
            assert subgroup_graph(basis).rank == len(basis)
        assert len(split.a_basis) == len(split.b_basis)


def test_parent_images_round_trip(stable_split, bs_split):
    for split in (stable_split, bs_split):
        for k, image in enumerate(split.vertex_images):
            syllables = split.parent_word_to_syllables(image)
            assert split.is_trivial(syllables + [((-(k + 1),), 0)])


def test_free_cover_splitting_tree_example():
    X = cx("a b c | babccBABacAAccca")
    out = free_cover_splitting(3, X.relator, (1, 2, 0))
    assert len(out.edge_groups) == 2
    assert out.vertex_free and out.relator_collapses
    assert all(out.magnus)


def test_free_cover_splitting_single_letter():
    out = free_cover_splitting(2, cx("a b | abAB").relator, (1, 0))
    assert len(out.edge_groups) == 1
    assert out.vertex_free
    with pytest.raises(CoverError):
        free_cover_splitting(2, cx("a b | abAB").relator, (1, 2))


def test_abelian_lift_examples():
    quotient = torsion_free_quotient(2, cx("a t | TaatAAA").relator)
    assert len(quotient) == 1
    lift = abelian_lift(cx("a t | TaatAAA"))
    lift.complex.validate()
    assert relator_is_primitive_power(abelian_lift(cx(STABLE_EXAMPLE)).complex)
    assert not relator_is_primitive_power(cx("a b | abAB"))
    assert relator_is_primitive_power(cx("a b | aaa"))


def test_primitive_z2_examples():
    assert primitive_z2(1, 0) == (1,)
    w = primitive_z2(5, 3)
    assert abelianize(w, 2) == (5, 3) and is_primitive(w, 2)
    w = primitive_z2(2, 3)
    assert abelianize(w, 2) == (2, 3) and is_primitive(w, 2) and len(w) == 5
    with pytest.raises(CoverError):
        primitive_z2(2, 4)


def test_cover_spec_validation():
    with pytest.raises(CoverError):
        CyclicCoverSpec.from_generator_values(cx("a b | ab"), (1, 1))
    with pytest.raises(CoverError):
        CyclicCoverSpec.from_generator_values(ROSE2, (2, 4))
    spec = CyclicCoverSpec.parse(cx("a b | bbaaBabaaBBAA"), "phi: exp(b)")
    assert spec.generator_values() == (0, 1)
