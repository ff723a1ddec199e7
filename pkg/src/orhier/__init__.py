"""Free-group hierarchy tools for one-relator groups.

Words are tuples of nonzero ints; see :mod:`orhier.freegroup` for the
letter convention.
"""

from .brown import BrownClass, brown_criterion, hyperplane_splitting, trace
from .complex import OneRelatorComplex, Presentation
from .covers import (
    CoverError,
    CyclicCoverSpec,
    free_cover_splitting,
    minimal_tree_domain,
    primitive_z2,
    splitting_from_domain,
    window,
)
from .freegroup import Alphabet, cyclic_reduce, free_reduce, inverse, is_primitive, multiply, primitivity_rank
from .gocs import BsVerdict, bs_detect, build_gocs, find_alternating_word
from .hierarchy import build_tower, hierarchy_length, hierarchy_report, tower_to_w_subgroup
from .stability import HNNSplitting, next_family, stable_number
from .stallings import CoreGraph, pullback, subgroup_graph

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "BrownClass",
    "BsVerdict",
    "CoreGraph",
    "CoverError",
    "CyclicCoverSpec",
    "HNNSplitting",
    "OneRelatorComplex",
    "Presentation",
    "bs_detect",
    "brown_criterion",
    "build_gocs",
    "build_tower",
    "cyclic_reduce",
    "find_alternating_word",
    "free_cover_splitting",
    "free_reduce",
    "hierarchy_length",
    "hierarchy_report",
    "hyperplane_splitting",
    "inverse",
    "is_primitive",
    "minimal_tree_domain",
    "multiply",
    "next_family",
    "primitive_z2",
    "primitivity_rank",
    "pullback",
    "splitting_from_domain",
    "stable_number",
    "subgroup_graph",
    "tower_to_w_subgroup",
    "trace",
    "window",
]
