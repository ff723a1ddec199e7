import pytest

from conftest import STABLE_EXAMPLE, cx, non_stable_split, random_cyclic_word, splitting
from oracles.brute import brute_second_family
from orhier.complex import OneRelatorComplex
from orhier.hierarchy import build_tower, candidate_covers, tower_step
from orhier.stability import (
    HNNSplitting,
    Regime,
    StabilityError,
    default_cap,
    family_in_vertex_letters,
    initial_family,
    next_family,
    stable_number,
)
from orhier.stallings import subgroup_graph


def key(*gens):
    return subgroup_graph(list(gens)).unbased().key()


def member_keys(family):
    return [m.unbased().key() for m in family.members]


def corpus_splittings(rng, count, max_rr=None):
    out = []
    while len(out) < count:
        w = random_cyclic_word(rng, 2, rng.randint(4, 12))
        X = OneRelatorComplex.rose(2, w)
        for spec in candidate_covers(X):
            split = tower_step(X, spec).splitting
            if split.regime is not Regime.FREE_VERTEX:
                continue
            if max_rr is None or split.a_graph.reduced_rank <= max_rr:
                out.append(split)
    return out[:count]


def test_stable_example_families(stable_split):
    x, z = (1,), (3,)
    report = stable_number(stable_split, cap=10)
    fams = report.families
    assert member_keys(fams[0]) == [key(x, z)]
    assert member_keys(fams[1]) == [key((1, 1), z)]
    assert member_keys(fams[2]) == [key((-3, -3, 1, 1, -3, -3) * 2, z)]
    assert not fams[3]
    assert report.stable_number == 3 and report.limit is None


def test_stable_example_vertex_letters(stable_split):
    fams = stable_number(stable_split).families
    assert family_in_vertex_letters(stable_split, fams[1]) == [[(3,), (1, 1)]]


def test_stable_example_discards_one_cyclic_class(stable_split):
    report = stable_number(stable_split)
    assert [d.level for d in report.discards] == [3]
    assert report.discards[0].image == (-3, -3)


def test_inverse_direction_also_stable(stable_split):
    assert stable_number(stable_split.inverted()).stable_number == 3


def test_cyclic_edge_groups_give_one(bs_split):
    assert bs_split.b_graph.rank == 1
    assert stable_number(bs_split).stable_number == 1
    assert stable_number(bs_split.inverted()).stable_number == 1


def test_default_cap(stable_split, bs_split):
    assert default_cap(stable_split) == 8
    assert default_cap(bs_split) == 2


def test_imprimitive_relator_terminates_below_cap():
    split = build_tower(cx("a b | aabbbAAbbb")).levels[0].splitting
    assert split.regime is Regime.IMPRIMITIVE_RELATOR
    report = stable_number(split)
    assert not report.exceeded
    assert report.stable_number < report.cap


def test_unsupported_regime_raises():
    split = HNNSplitting(("x", "y"), (1, 1, 2, 2), ((1,),), ((2,),))
    assert split.regime is Regime.UNSUPPORTED
    with pytest.raises(StabilityError):
        initial_family(split)


def test_depth_cap_reports_exceeded():
    report = stable_number(non_stable_split(), cap=3)
    assert report.exceeded and report.limit == "depth"
    assert len(report.families) == 4


def test_size_budget_reports_exceeded():
    report = stable_number(non_stable_split(), cap=50, size_budget=200)
    assert report.exceeded and report.limit == "size"
    assert sum(len(w) for g in report.families[-1].members for w in g.basis()) > 200


def test_reduced_rank_bound_on_corpus(rng):
    for split in corpus_splittings(rng, 15):
        bound = split.a_graph.reduced_rank
        for family in stable_number(split).families:
            assert family.level == 0 or family.reduced_rank <= bound
            keys = member_keys(family)
            assert len(keys) == len(set(keys))
            assert all(m.rank >= 2 for m in family.members)


def test_second_family_matches_definition(rng, stable_split):
    for split in [stable_split] + corpus_splittings(rng, 12, max_rr=2):
        first, _ = next_family(split, initial_family(split))
        second, _ = next_family(split, first) if first else (first, ())
        assert set(member_keys(second)) == brute_second_family(split, 3)


def test_family_from_example_splitting_helper():
    split = splitting(STABLE_EXAMPLE, "exp(b)")
    assert split.format(split.relator) == "zzyzzXX"
