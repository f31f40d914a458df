from __future__ import annotations

import itertools
import random

import pytest

from raaglab.graph_core import DefiningGraph, StandardSubgroup
from raaglab.mccool import ConstraintFamily, SalvettiState
from raaglab.partitions import (
    compatible,
    enumerate_based_partitions,
    enumerate_partitions,
)
from raaglab.spine import enumerate_simplices, move_graph, verify_changenorm
from raaglab.words import CyclicClass, Word


def classes(graph, *texts):
    return tuple(CyclicClass.parse(graph, t) for t in texts)


# -- simplices ------------------------------------------------------------------


def test_simplices_f2(f2):
    sizes = sorted(len(s) for s in enumerate_simplices(f2, 3))
    assert sizes == [1, 1]  # two singletons, no compatible pair


def test_simplices_edge_graph_empty(z2):
    assert enumerate_simplices(z2, 3) == []


def test_simplices_match_bruteforce_pairs(f3):
    parts = enumerate_partitions(f3)
    expected_pairs = sum(
        1 for p, q in itertools.combinations(parts, 2) if compatible(p, q)
    )
    got_pairs = sum(1 for s in enumerate_simplices(f3, 2) if len(s) == 2)
    assert got_pairs == expected_pairs
    assert sum(1 for s in enumerate_simplices(f3, 2) if len(s) == 1) == len(parts)


def test_simplices_pairwise_compatible(f3):
    for s in enumerate_simplices(f3, 3):
        for p, q in itertools.combinations(s.partitions, 2):
            assert compatible(p, q)


# -- move graph -----------------------------------------------------------------


def test_move_graph_f2_connected(f2):
    fam = ConstraintFamily(f2)
    mg = move_graph(classes(f2, "a", "b"), fam, (2, 2))
    stats = mg.stats()
    assert stats["connected"] and stats["complete"]
    assert stats["nodes"] >= 1
    assert all(n.in_sg for n in mg.nodes)


def test_move_graph_edge_graph_single_node(z2):
    fam = ConstraintFamily(z2)
    mg = move_graph(classes(z2, "a"), fam, (3,))
    assert len(mg.nodes) == 1 and mg.edges == []


def test_move_graph_zero_bound(f2):
    fam = ConstraintFamily(f2)
    mg = move_graph(classes(f2, "a"), fam, (0,))
    assert len(mg.nodes) == 0 or all(n.head == (0,) for n in mg.nodes)


def test_move_graph_respects_constraints(f3):
    fam = ConstraintFamily(f3, (StandardSubgroup.from_names(f3, ["c"]),))
    mg = move_graph(classes(f3, "a", "c"), fam, (2, 1))
    # every node reached through constraint-passing moves keeps [c] length 1
    assert all(n.head[1] == 1 for n in mg.nodes)


def test_move_graph_connected_with_generous_bounds(f2, f3):
    for graph in (f2, f3):
        fam = ConstraintFamily(graph)
        targets = classes(graph, *graph.vertices)
        bound = tuple(2 for _ in graph.vertices)
        mg = move_graph(targets, fam, bound)
        assert mg.stats()["connected"]


# -- norm-change identity ------------------------------------------------------------


def test_changenorm_f2_examples(f2):
    base_a = enumerate_based_partitions(f2)[0]
    assert str(base_a) == "P={a,b} Pstar={a^-1,b^-1} base=a"
    st_b = SalvettiState.initial(f2, classes(f2, "b"))
    assert verify_changenorm(st_b, base_a)
    st_a = SalvettiState.initial(f2, classes(f2, "a"))
    assert verify_changenorm(st_a, base_a)
    st_empty = SalvettiState.initial(f2, classes(f2, ""))
    assert verify_changenorm(st_empty, base_a)


def test_changenorm_given_targets_pull_through_marking(f2):
    from raaglab.partitions import whitehead_automorphism

    bp = enumerate_based_partitions(f2)[0]
    marking = whitehead_automorphism(bp)
    st = SalvettiState.from_marking(marking, classes(f2, "a b"))
    assert verify_changenorm(st, bp, targets=classes(f2, "a b"))


def test_changenorm_randomized(f2, f3, path3):
    rng = random.Random(77)
    for graph in (f2, f3, path3):
        bps = enumerate_based_partitions(graph)
        if not bps:
            continue
        letters = list(graph.letters())
        for _ in range(60):
            word = Word(graph, tuple(rng.choice(letters) for _ in range(rng.randrange(6))))
            st = SalvettiState.initial(graph, (CyclicClass.of(word),))
            bp = bps[rng.randrange(len(bps))]
            assert verify_changenorm(st, bp), (graph, str(word), str(bp))
            st = st.move(bp)
            bp2 = bps[rng.randrange(len(bps))]
            assert verify_changenorm(st, bp2)
