from __future__ import annotations

import itertools

import pytest

from raaglab.automorphisms import compose
from raaglab.errors import PartitionError
from raaglab.graph_core import DefiningGraph, StandardSubgroup
from raaglab.partitions import (
    BasedPartition,
    WhiteheadPartition,
    adjacent,
    classify,
    compatible,
    crossing_count,
    enumerate_based_partitions,
    enumerate_partitions,
    quadrant_partitions,
    relative_condition,
    validate_based,
    whitehead_automorphism,
)
from raaglab.words import CyclicClass, Word

from .conftest import all_graphs_up_to
from .oracles import oracle_blowup_crossing, oracle_partitions, oracle_whitehead_preserves


def L(graph, *names):
    return frozenset(graph.parse_letter(n) for n in names)


def make_bp(graph, side_p, base):
    linkset = graph.link_letters(base)
    other = frozenset(graph.letters()) - frozenset(side_p) - linkset
    return BasedPartition(WhiteheadPartition.make(graph, frozenset(side_p), other, linkset), base)


@pytest.fixture()
def f2_pp(f2):
    return make_bp(f2, L(f2, "a", "b"), f2.parse_letter("a"))


# -- validation -----------------------------------------------------------------


def test_validate_f2_axioms(f2):
    part = WhiteheadPartition.make(f2, L(f2, "a", "b"), L(f2, "a^-1", "b^-1"), frozenset())
    ok, violations = validate_based(part, f2.parse_letter("a"))
    assert ok and not violations


def test_validate_wrong_basepoint_side(f2):
    part = WhiteheadPartition.make(f2, L(f2, "a", "b"), L(f2, "a^-1", "b^-1"), frozenset())
    ok, violations = validate_based(part, f2.parse_letter("b^-1"))
    assert ok  # b^-1 lies in the other side; sides reorder around it
    bad = WhiteheadPartition.make(f2, L(f2, "a", "b", "b^-1"), L(f2, "a^-1"), frozenset())
    ok2, violations2 = validate_based(bad, f2.parse_letter("a"))
    assert not ok2 and any("fewer than two" in v for v in violations2)


def test_validate_small_side(f2):
    part = WhiteheadPartition.make(f2, L(f2, "a", "a^-1", "b"), L(f2, "b^-1"), frozenset())
    for b in part.sideP | part.sideQ:
        ok, _ = validate_based(part, b)
        assert not ok


# -- classification -----------------------------------------------------------------


def test_classify_f2(f2, f2_pp):
    single, dp, dq = classify(f2_pp.partition)
    assert single == L(f2, "a", "a^-1", "b", "b^-1")
    assert dp == dq == frozenset()


def test_classify_f3(f3):
    bp = make_bp(f3, L(f3, "a", "b"), f3.parse_letter("a"))
    single, dp, dq = classify(bp.partition)
    assert single == L(f3, "a", "a^-1", "b", "b^-1")
    assert dp == frozenset()
    assert dq == L(f3, "c", "c^-1")
    assert all((x ^ 1) in dq for x in dq)


# -- the attached automorphism ---------------------------------------------------------


def test_whitehead_formula_f3(f3):
    bp = make_bp(f3, L(f3, "a", "b"), f3.parse_letter("a"))
    w = whitehead_automorphism(bp)
    assert str(Word(f3, w.images[0])) == "a^-1"
    assert str(Word(f3, w.images[1])) == "b a^-1"
    assert str(Word(f3, w.images[2])) == "c"


def test_whitehead_formula_f2(f2, f2_pp):
    w = whitehead_automorphism(f2_pp)
    assert str(Word(f2, w.images[0])) == "a^-1"
    assert str(Word(f2, w.images[1])) == "b a^-1"


def test_whitehead_involutive_everywhere():
    for graph in all_graphs_up_to(3):
        for bp in enumerate_based_partitions(graph):
            w = whitehead_automorphism(bp)
            assert compose(w, w).is_identity()


# -- compatibility ------------------------------------------------------------------------


def test_f2_pair_incompatible(f2):
    p1, p2 = enumerate_partitions(f2)
    quads = [p1.sideP & p2.sideP, p1.sideP & p2.sideQ, p1.sideQ & p2.sideP, p1.sideQ & p2.sideQ]
    assert all(quads)
    assert not adjacent(p1, p2)
    assert not compatible(p1, p2)


def test_compatible_identical_is_error(f2):
    p1, _ = enumerate_partitions(f2)
    with pytest.raises(PartitionError):
        compatible(p1, p1)


def test_compatible_symmetric():
    for graph in all_graphs_up_to(3):
        parts = enumerate_partitions(graph)
        for p, q in itertools.combinations(parts, 2):
            assert compatible(p, q) == compatible(q, p)
            assert adjacent(p, q) == adjacent(q, p)


# -- enumeration ----------------------------------------------------------------------------


def test_enumeration_counts(f2, f3, z2):
    assert len(enumerate_partitions(f2)) == 2
    assert len(enumerate_partitions(f3)) == 22
    assert len(enumerate_partitions(z2)) == 0


def test_enumeration_matches_brute_force_oracle():
    for graph in all_graphs_up_to(3):
        got = {(p.sideP, p.sideQ) for p in enumerate_partitions(graph)}
        expected = {(frozenset(p), frozenset(q)) for p, q, _, _ in oracle_partitions(graph)}
        normalize = lambda s: {frozenset(pair) for pair in s}
        assert normalize(got) == normalize(expected), graph


def test_enumeration_reports_basepoints(f3):
    for part in enumerate_partitions(f3):
        bases = part.valid_basepoints()
        assert bases
        for b in bases:
            ok, _ = validate_based(part, b)
            assert ok


# -- quadrants -----------------------------------------------------------------------------


def test_quadrants_f3_example(f3):
    bp_p = make_bp(f3, L(f3, "a", "b", "c"), f3.parse_letter("a"))
    bp_q = make_bp(f3, L(f3, "a", "b", "c^-1"), f3.parse_letter("b"))
    outs = quadrant_partitions(bp_p, bp_q)
    assert len(outs) == 2
    t, u = outs
    assert t.side_p() == L(f3, "a", "b") and t.base == f3.parse_letter("a")
    assert t.side_q() == L(f3, "a^-1", "b^-1", "c", "c^-1")
    assert u.side_p() == L(f3, "a^-1", "b^-1") and u.base == f3.parse_letter("a^-1")
    assert u.side_q() == L(f3, "a", "b", "c", "c^-1")


def test_quadrants_outputs_valid_and_compatible(f3):
    checked = 0
    based = enumerate_based_partitions(f3)
    for bp_p, bp_q in itertools.permutations(based, 2):
        if bp_p.partition == bp_q.partition:
            continue
        if compatible(bp_p.partition, bp_q.partition):
            continue
        try:
            outs = quadrant_partitions(bp_p, bp_q)
        except PartitionError:
            continue
        checked += 1
        for out in outs:
            ok, violations = validate_based(out.partition, out.base)
            assert ok, violations
            assert compatible(out.partition, bp_p.partition)
            assert compatible(out.partition, bp_q.partition)
    assert checked > 0


def test_quadrants_rejects_compatible_pairs(f3):
    bp1 = make_bp(f3, L(f3, "a", "b"), f3.parse_letter("a"))
    with pytest.raises(PartitionError):
        quadrant_partitions(bp1, bp1)


# -- relative condition --------------------------------------------------------------------


def test_relative_condition_examples(f3):
    bp = make_bp(f3, L(f3, "a", "b"), f3.parse_letter("a"))
    sub_c = StandardSubgroup.from_names(f3, ["c"])
    sub_b = StandardSubgroup.from_names(f3, ["b"])
    sub_ab = StandardSubgroup.from_names(f3, ["a", "b"])
    assert relative_condition(bp, [sub_c]) is True
    assert relative_condition(bp, [sub_b]) is False
    assert relative_condition(bp, [sub_ab]) is True
    w = whitehead_automorphism(bp)
    assert oracle_whitehead_preserves(
        f3, {v: w.images[v] for v in range(3)}, sub_c.support, bp.base
    )
    assert not oracle_whitehead_preserves(
        f3, {v: w.images[v] for v in range(3)}, sub_b.support, bp.base
    )


def test_relative_condition_agrees_with_direct_oracle_small():
    for graph in all_graphs_up_to(3):
        subs = [frozenset({v}) for v in range(graph.n)]
        subs.append(frozenset(range(graph.n)))
        if graph.n >= 2:
            subs.append(frozenset({0, graph.n - 1}))
        for bp in enumerate_based_partitions(graph):
            w = whitehead_automorphism(bp)
            images = {v: w.images[v] for v in range(graph.n)}
            for delta in subs:
                got = relative_condition(bp, [StandardSubgroup(graph, delta)])
                want = oracle_whitehead_preserves(graph, images, delta, bp.base)
                assert got == want, (graph, str(bp), sorted(delta))


# -- crossing counts --------------------------------------------------------------------------


def test_crossing_examples(f2, f2_pp):
    assert crossing_count(f2_pp.partition, CyclicClass.parse(f2, "a b")) == 2
    assert crossing_count(f2_pp.partition, CyclicClass.parse(f2, "")) == 0
    assert crossing_count(f2_pp.partition, CyclicClass.parse(f2, "a")) == 1
    assert crossing_count(f2_pp.partition, CyclicClass.parse(f2, "a b^-1")) == 0


def test_crossing_parity(f3):
    for part in enumerate_partitions(f3)[:8]:
        for text in ("a", "a b", "a b c", "a b a c^-1", "b c b c"):
            cls = CyclicClass.parse(f3, text)
            singles = sum(1 for x in cls.codes if x in part.singles())
            assert (crossing_count(part, cls) + singles) % 2 == 0


def test_crossing_against_blowup_cover_oracle(f2, z2, path3, f3):
    cases = {
        f2: ["a", "a b", "a b^-1", "a a b", "a b a b^-1", "a a b b a"],
        path3: ["a", "a c", "a b c", "a c a c^-1", "c a c a b"],
        f3: ["a", "a b", "a c b"],
    }
    for graph, words in cases.items():
        for part in enumerate_partitions(graph):
            for text in words:
                cls = CyclicClass.parse(graph, text)
                got = crossing_count(part, cls)
                upper = len(cls.codes) + got
                want = oracle_blowup_crossing(
                    graph, part.sideP, part.link_gens(), cls.codes, upper
                )
                assert got == want, (graph, str(part), text)
