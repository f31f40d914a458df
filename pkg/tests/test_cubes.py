from __future__ import annotations

import itertools
import random

import pytest

from raaglab.cubes import (
    VertexSet,
    bounded_displacement_witness,
    build_ball,
    displacement_bound,
    geodesic_through_projection_check,
    hull_neighborhood_check,
    is_convex,
    median,
    minset,
    minset_distance_check,
    projection_to,
)
from raaglab.errors import BoundaryClipped
from raaglab.graph_core import DefiningGraph
from raaglab.words import Word, coset_min_codes, inverse_codes, normal_codes, reduce_codes


def W(graph, text):
    return Word.parse(graph, text)


def nf(graph, text):
    return W(graph, text).normal().codes


# -- ball construction ---------------------------------------------------------


def test_ball_z2_radius1(z2):
    ball = build_ball(z2, 1)
    s = ball.stats()
    assert s["vertices"] == 5 and s["edges"] == 4 and s["squares"] == 0


def test_ball_f2_radius2(f2):
    assert build_ball(f2, 2).stats()["vertices"] == 17


def test_ball_z2_radius2(z2):
    s = build_ball(z2, 2).stats()
    assert s["vertices"] == 13 and s["squares"] > 0


def test_ball_square_counts(square4):
    s = build_ball(square4, 2).stats()
    assert s["squares"] == 16  # 4 commuting pairs x 4 sign quadrants each


def test_hyperplanes_union_parallel_edges(z2):
    ball = build_ball(z2, 2)
    # opposite edges of a square share a class
    e1 = ball.edge_index[(ball.vindex[()], 0)]  # e -> a
    b_idx = ball.vindex[nf(z2, "b")]
    e2 = ball.edge_index[(b_idx, 0)]  # b -> b a
    assert ball.hyperplane_of_edge[e1] == ball.hyperplane_of_edge[e2]


def test_ball_around_center(f2):
    ball = build_ball(f2, 1, center=W(f2, "b"))
    assert nf(f2, "b") in ball.vindex
    assert nf(f2, "b a") in ball.vindex
    assert () in ball.vindex


# -- median ---------------------------------------------------------------------


def test_median_degenerate(z2):
    ball = build_ball(z2, 2)
    x = nf(z2, "a")
    assert median(ball, x, x, nf(z2, "b")) == x


def test_median_z2_examples(z2):
    ball = build_ball(z2, 2)
    assert median(ball, (), nf(z2, "a"), nf(z2, "b")) == ()
    assert median(ball, (), nf(z2, "a b"), nf(z2, "a")) == nf(z2, "a")


def test_median_symmetric(z2):
    ball = build_ball(z2, 3)
    pts = [(), nf(z2, "a"), nf(z2, "b a"), nf(z2, "a^-1")]
    for x, y, z in itertools.permutations(pts[:3]):
        assert median(ball, x, y, z) == median(ball, pts[0], pts[1], pts[2])


def test_median_raises_when_clipped(z2):
    ball = build_ball(z2, 1)
    with pytest.raises(BoundaryClipped):
        median(ball, nf(z2, "a"), nf(z2, "b"), nf(z2, "a^-1"))


# -- minsets ----------------------------------------------------------------------


def test_minset_f2_generator(f2):
    ball = build_ball(f2, 2)
    ms = minset(ball, W(f2, "a"))
    assert set(ms.members) == {(), (0,), (1,), (0, 0), (1, 1)}


def test_minset_f2_conjugate(f2):
    ball = build_ball(f2, 2)
    ms = minset(ball, W(f2, "b a b^-1"))
    assert set(ms.members) == {nf(f2, "b"), nf(f2, "b a"), nf(f2, "b a^-1")}


def test_minset_z2_everything(z2):
    ball = build_ball(z2, 2)
    assert len(minset(ball, W(z2, "a"))) == len(ball.vertices)


def test_minset_invariant_under_g(f2):
    ball = build_ball(f2, 4)
    g = W(f2, "a")
    ms = set(minset(ball, g).members)
    for x in ms:
        gx = normal_codes(f2, g.codes + x)
        if gx in ball.vindex:
            assert gx in ms


def test_minset_convex_on_interior(f2, path3):
    # complete intervals between in-ball minset vertices stay in the minset
    for graph, gtext in ((f2, "a"), (path3, "a c")):
        ball = build_ball(graph, 4)
        ms = minset(ball, W(graph, gtext))
        assert is_convex(ball, ms, skip_clipped=True)


def test_not_convex_pair(z2):
    ball = build_ball(z2, 3)
    assert is_convex(ball, VertexSet.of([nf(z2, "a"), nf(z2, "b")])) is False


def test_singleton_convex(f2):
    ball = build_ball(f2, 2)
    assert is_convex(ball, VertexSet.of([()])) is True


# -- minset distance --------------------------------------------------------------


def test_distance_check_trivial(f2):
    ball = build_ball(f2, 3)
    d, bound, ok = minset_distance_check(ball, W(f2, "a"), W(f2, "b"))
    assert (d, bound, ok) == (0, 1.0, True)


def test_distance_check_conjugate(f2):
    ball = build_ball(f2, 3)
    d, bound, ok = minset_distance_check(ball, W(f2, "a"), W(f2, "b a b^-1"))
    assert (d, bound, ok) == (1, 2.0, True)


def test_distance_check_z2(z2):
    ball = build_ball(z2, 2)
    d, _, ok = minset_distance_check(ball, W(z2, "a"), W(z2, "b"))
    assert d == 0 and ok


def test_distance_check_random(f2, path3):
    rng = random.Random(9)
    for graph in (f2, path3):
        ball = build_ball(graph, 5)
        letters = list(graph.letters())
        for _ in range(40):
            g = Word(graph, tuple(rng.choice(letters) for _ in range(rng.randrange(1, 4))))
            h = Word(graph, tuple(rng.choice(letters) for _ in range(rng.randrange(1, 4))))
            if g.translation_length() == 0 or h.translation_length() == 0:
                continue
            d, bound, ok = minset_distance_check(ball, g, h)
            assert ok, (graph, str(g), str(h), d, bound)


# -- bounded displacement ------------------------------------------------------------


def test_displacement_bound_values(f2, z2):
    assert displacement_bound(f2, [W(f2, "a"), W(f2, "b")]) == 3.5
    assert displacement_bound(f2, [W(f2, "a"), W(f2, "a b")]) == 5.0
    assert displacement_bound(z2, [W(z2, "a"), W(z2, "b")]) == 6.0


def test_witness_basics(f2):
    ball = build_ball(f2, 2)
    x, bound = bounded_displacement_witness(ball, [W(f2, "a"), W(f2, "b")])
    assert x == () and bound == 3.5


def test_witness_never_misses_random(f2, z2, path3):
    rng = random.Random(31)
    for graph in (f2, z2, path3):
        ball = build_ball(graph, 3)
        letters = list(graph.letters())
        for _ in range(30):
            els = [
                Word(graph, tuple(rng.choice(letters) for _ in range(rng.randrange(1, 4))))
                for _ in range(rng.randrange(1, 4))
            ]
            x, bound = bounded_displacement_witness(ball, els)
            xi = inverse_codes(x)
            for a in els:
                assert len(reduce_codes(graph, xi + a.codes + x)) <= bound


# -- hulls ------------------------------------------------------------------------------


def test_hull_r0(z2):
    ball = build_ball(z2, 3)
    assert hull_neighborhood_check(ball, VertexSet.of([()]), 0) is True


def test_hull_z2_diamond(z2):
    ball = build_ball(z2, 4)
    assert hull_neighborhood_check(ball, VertexSet.of([()]), 1) is True


def test_hull_tree_adds_nothing(f2):
    ball = build_ball(f2, 4)
    assert hull_neighborhood_check(ball, VertexSet.of([()]), 1) is True


# -- geodesics through projections ---------------------------------------------------------


def test_geodesic_projection_in_minset(f2):
    ball = build_ball(f2, 3)
    assert geodesic_through_projection_check(ball, W(f2, "a"), ())


def test_geodesic_projection_examples(f2):
    ball = build_ball(f2, 3)
    assert geodesic_through_projection_check(ball, W(f2, "a"), nf(f2, "b"))
    assert geodesic_through_projection_check(ball, W(f2, "a"), nf(f2, "b a"))


def test_projection_gate_property(f2):
    ball = build_ball(f2, 3)
    ms = minset(ball, W(f2, "a"))
    p = projection_to(ball, ms, nf(f2, "b a"))
    assert p == ()


# -- axis separators: orbit bijection ---------------------------------------------------------


def _separating_hyperplanes(graph, x, gcodes):
    """Exact hyperplane labels (generator, gated coset rep) crossed from x to gx."""
    gx = normal_codes(graph, gcodes + x)
    path = reduce_codes(graph, inverse_codes(x) + gx)
    labels = []
    prefix = tuple(x)
    for letter in path:
        v = letter >> 1
        anchor = prefix if letter & 1 == 0 else normal_codes(graph, prefix + (letter,))
        rep = coset_min_codes(graph, anchor, frozenset(graph.adj[v]))
        labels.append((v, rep))
        prefix = normal_codes(graph, prefix + (letter,))
    return labels


def _same_orbit(graph, gcodes, lab1, lab2, k_range=8):
    v1, c1 = lab1
    v2, c2 = lab2
    if v1 != v2:
        return False
    sub = frozenset(graph.adj[v1])
    power = ()
    for _ in range(k_range + 1):
        if coset_min_codes(graph, power + c1, sub) == c2:
            return True
        power = normal_codes(graph, power + gcodes)
    power = ()
    ginv = inverse_codes(gcodes)
    for _ in range(k_range + 1):
        if coset_min_codes(graph, power + c1, sub) == c2:
            return True
        power = normal_codes(graph, power + ginv)
    return False


def test_axis_separator_orbits_match(f2, z2, path3):
    # for x, y in Min(g), the separators Sep(x|gx), Sep(y|gy) match orbitwise
    cases = [(f2, "a"), (f2, "a b"), (z2, "a"), (z2, "a b"), (path3, "a c")]
    for graph, text in cases:
        g = W(graph, text)
        ball = build_ball(graph, 4)
        ms = minset(ball, g)
        members = [x for x in ms.members if ball.depth(x) <= 2][:6]
        base = members[0]
        base_labels = _separating_hyperplanes(graph, base, g.reduced().codes)
        for y in members[1:]:
            other = _separating_hyperplanes(graph, y, g.reduced().codes)
            assert len(other) == len(base_labels)
            used = [False] * len(other)
            for lab in base_labels:
                hit = None
                for j, lab2 in enumerate(other):
                    if not used[j] and _same_orbit(graph, g.reduced().codes, lab, lab2):
                        hit = j
                        break
                assert hit is not None, (graph, text, lab)
                used[hit] = True
