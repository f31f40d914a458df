"""Desk-scale geometry of the Salvetti universal cover: balls, medians,
minsets, hyperplane classes, and the displacement/distance checks.

Vertices are normal-form words; the metric is exact (reduced length of
x^-1 y), so only membership questions depend on the ball.  Checks restricted
to the interior report boundary clipping instead of guessing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import BoundaryClipped, CapExceeded, InvariantBreach
from .graph_core import DefiningGraph
from .words import Codes, Word, inverse_codes, normal_codes, reduce_codes, translation_length_codes

DEFAULT_BALL_CAP = 200000


@dataclass(frozen=True)
class VertexSet:
    """A subset of ball vertices, kept sorted for determinism."""

    members: tuple[Codes, ...]

    @classmethod
    def of(cls, verts) -> "VertexSet":
        return cls(tuple(sorted(set(verts), key=lambda w: (len(w), w))))

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, item: Codes) -> bool:
        return item in set(self.members)


class CubeBall:
    """Radius-R ball of the universal cover, with edges, squares, and
    hyperplane classes from union-find over square-opposite parallelism."""

    def __init__(
        self,
        graph: DefiningGraph,
        radius: int,
        center: Word | None = None,
        cap: int = DEFAULT_BALL_CAP,
    ):
        if radius < 0:
            raise InvariantBreach("negative radius")
        self.graph = graph
        self.radius = radius
        self.center: Codes = normal_codes(graph, center.codes) if center else ()
        verts: list[Codes] = [self.center]
        seen = {self.center}
        frontier = [self.center]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for x in graph.letters():
                    nf = normal_codes(graph, w + (x,))
                    if nf not in seen and self.dist(self.center, nf) == self.dist(self.center, w) + 1:
                        if len(seen) >= cap:
                            raise CapExceeded(f"ball cap {cap} exceeded at radius {radius}")
                        seen.add(nf)
                        nxt.append(nf)
            nxt.sort()
            verts.extend(nxt)
            frontier = nxt
        self.vertices: tuple[Codes, ...] = tuple(verts)
        self.vindex: dict[Codes, int] = {w: i for i, w in enumerate(verts)}
        # Edges (tail, head=tail*v, generator v), tail and head both in ball.
        edges: list[tuple[int, int, int]] = []
        self.edge_index: dict[tuple[int, int], int] = {}
        for i, w in enumerate(self.vertices):
            for v in range(graph.n):
                h = normal_codes(graph, w + (2 * v,))
                j = self.vindex.get(h)
                if j is not None:
                    self.edge_index[(i, v)] = len(edges)
                    edges.append((i, j, v))
        self.edges: tuple[tuple[int, int, int], ...] = tuple(edges)
        # Squares witness commutation; union opposite (parallel) edge pairs.
        parent = list(range(len(edges)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a: int, b: int) -> None:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        squares = 0
        for i, w in enumerate(self.vertices):
            for v, u in itertools.combinations(range(graph.n), 2):
                if u not in graph.adj[v]:
                    continue
                e_v = self.edge_index.get((i, v))
                e_u = self.edge_index.get((i, u))
                if e_v is None or e_u is None:
                    continue
                jv = self.edges[e_v][1]
                ju = self.edges[e_u][1]
                f_v = self.edge_index.get((ju, v))
                f_u = self.edge_index.get((jv, u))
                if f_v is None or f_u is None:
                    continue
                if self.edges[f_v][1] != self.edges[f_u][1]:
                    continue
                squares += 1
                union(e_v, f_v)
                union(e_u, f_u)
        self.square_count = squares
        roots = sorted({find(e) for e in range(len(edges))})
        root_rank = {r: k for k, r in enumerate(roots)}
        self.hyperplane_of_edge: tuple[int, ...] = tuple(
            root_rank[find(e)] for e in range(len(edges))
        )
        self.hyperplane_count = len(roots)

    # -- metric -----------------------------------------------------------

    @lru_cache(maxsize=1 << 20)
    def _dist_codes(self, x: Codes, y: Codes) -> int:  # noqa: B019 - per-ball cache
        return len(reduce_codes(self.graph, inverse_codes(x) + y))

    def dist(self, x: Codes, y: Codes) -> int:
        if x > y:
            x, y = y, x
        return self._dist_codes(x, y)

    def depth(self, x: Codes) -> int:
        return self.dist(self.center, x)

    def interval_complete(self, x: Codes, y: Codes) -> bool:
        """Whether every interval point between x and y lies in the ball.

        Any p between x and y has depth(p) <= (depth(x)+depth(y)+d(x,y))/2,
        and square corners achieve the bound.
        """
        return self.depth(x) + self.depth(y) + self.dist(x, y) <= 2 * self.radius

    def interval(self, x: Codes, y: Codes, require_complete: bool = True) -> list[Codes]:
        if require_complete and not self.interval_complete(x, y):
            raise BoundaryClipped(
                f"interval between depth-{self.depth(x)} and depth-{self.depth(y)} "
                f"vertices may escape the radius-{self.radius} ball"
            )
        d = self.dist(x, y)
        return [p for p in self.vertices if self.dist(x, p) + self.dist(p, y) == d]

    def stats(self) -> dict:
        return {
            "vertices": len(self.vertices),
            "edges": len(self.edges),
            "squares": self.square_count,
            "hyperplane_classes": self.hyperplane_count,
        }


def build_ball(
    graph: DefiningGraph, radius: int, center: Word | None = None, cap: int = DEFAULT_BALL_CAP
) -> CubeBall:
    return CubeBall(graph, radius, center, cap)


def median(ball: CubeBall, x: Codes, y: Codes, z: Codes) -> Codes:
    """The unique vertex on geodesics between each pair."""
    for a, b in ((x, y), (y, z), (x, z)):
        if not ball.interval_complete(a, b):
            raise BoundaryClipped("median intervals may escape the ball; widen the radius")
    dxy, dyz, dxz = ball.dist(x, y), ball.dist(y, z), ball.dist(x, z)
    found = [
        p
        for p in ball.vertices
        if ball.dist(x, p) + ball.dist(p, y) == dxy
        and ball.dist(y, p) + ball.dist(p, z) == dyz
        and ball.dist(x, p) + ball.dist(p, z) == dxz
    ]
    if len(found) != 1:
        raise InvariantBreach(f"median candidates: {len(found)} (expected exactly one)")
    return found[0]


def minset(ball: CubeBall, g: Word) -> VertexSet:
    """Vertices displaced exactly the translation length of g."""
    gr = ball.graph
    ell = translation_length_codes(gr, g.codes)
    gcodes = reduce_codes(gr, g.codes)
    members = [
        x
        for x in ball.vertices
        if len(reduce_codes(gr, inverse_codes(x) + gcodes + x)) == ell
    ]
    return VertexSet.of(members)


def is_convex(ball: CubeBall, s: VertexSet, skip_clipped: bool = False) -> bool:
    """Interval criterion over all pairs.

    In-ball interval points refute convexity soundly even when an interval is
    clipped.  A clean pass with some clipped pair raises BoundaryClipped,
    unless ``skip_clipped`` restricts the claim to pairs whose interval
    provably stays inside the ball (the interior check for large sets).
    """
    members = set(s.members)
    partial = False
    for x, y in itertools.combinations(s.members, 2):
        complete = ball.interval_complete(x, y)
        if not complete:
            partial = True
            if skip_clipped:
                continue
        for p in ball.interval(x, y, require_complete=False):
            if p not in members:
                return False
    if partial and not skip_clipped:
        raise BoundaryClipped("convexity not refuted, but some interval is clipped")
    return True


def minset_distance_check(
    ball: CubeBall, g: Word, h: Word
) -> tuple[int, float, bool]:
    """(distance between minsets, bound ell(gh)/2, distance <= bound).

    The distance is measured inside the ball, hence an overestimate; a
    failing check with a boundary-touching minset raises instead of lying.
    """
    mg = minset(ball, g)
    mh = minset(ball, h)
    if not mg.members or not mh.members:
        raise BoundaryClipped("a minset misses the ball; widen the radius")
    best = min(ball.dist(x, y) for x in mg.members for y in mh.members)
    ell = translation_length_codes(ball.graph, g.codes + h.codes)
    ok = 2 * best <= ell
    if not ok:
        boundary = ball.radius
        touches = any(ball.depth(x) >= boundary for x in mg.members) or any(
            ball.depth(y) >= boundary for y in mh.members
        )
        if touches:
            raise BoundaryClipped(
                "minset distance exceeds the bound but a minset is clipped; widen the radius"
            )
    return best, ell / 2.0, ok


def displacement_bound(graph: DefiningGraph, elements: list[Word]) -> float:
    """max ell(a_i) + (n/2) max ell(a_i a_j) + 3n/2, n the complex dimension."""
    n = graph.max_clique_size()
    max_single = max(translation_length_codes(graph, a.codes) for a in elements)
    pair_lengths = [
        translation_length_codes(graph, a.codes + b.codes)
        for a, b in itertools.combinations(elements, 2)
    ]
    max_pair = max(pair_lengths, default=0)
    return max_single + n * max_pair / 2.0 + 1.5 * n


def bounded_displacement_witness(
    ball: CubeBall, elements: list[Word]
) -> tuple[Codes, float]:
    """First ball vertex (BFS order) displaced at most M by every element."""
    if not elements:
        raise InvariantBreach("witness search needs at least one element")
    gr = ball.graph
    bound = displacement_bound(gr, elements)
    reduced = [reduce_codes(gr, a.codes) for a in elements]
    for x in ball.vertices:
        xi = inverse_codes(x)
        if all(len(reduce_codes(gr, xi + a + x)) <= bound for a in reduced):
            return x, bound
    if ball.radius >= bound:
        raise InvariantBreach(
            f"no witness with displacement <= {bound} in a radius-{ball.radius} ball; "
            "this would falsify the displacement bound"
        )
    raise BoundaryClipped(
        f"no witness found and ball radius {ball.radius} < bound {bound}; widen the radius"
    )


def hull_neighborhood_check(ball: CubeBall, c: VertexSet, r: int) -> bool:
    """Whether the interval-closure hull of N_r(C) stays within n*r of C.

    The in-ball hull is a subset of the true hull, so a too-far hull vertex
    refutes soundly; a pass with clipped intervals raises BoundaryClipped.
    """
    if not c.members:
        raise InvariantBreach("empty convex set")
    n = ball.graph.max_clique_size()
    hull = {x for x in ball.vertices if min(ball.dist(x, y) for y in c.members) <= r}
    partial = False
    changed = True
    while changed:
        changed = False
        for x, y in itertools.combinations(sorted(hull), 2):
            if not ball.interval_complete(x, y):
                partial = True
            for p in ball.interval(x, y, require_complete=False):
                if p not in hull:
                    hull.add(p)
                    changed = True
    limit = n * r
    if not all(min(ball.dist(x, y) for y in c.members) <= limit for x in hull):
        return False
    if partial:
        raise BoundaryClipped("hull bound not refuted, but some interval is clipped")
    return True


def projection_to(ball: CubeBall, s: VertexSet, x: Codes) -> Codes:
    """Nearest member of a gated set; unique when the set is unclipped."""
    if not s.members:
        raise InvariantBreach("projection onto an empty set")
    best = min(ball.dist(x, y) for y in s.members)
    gates = [y for y in s.members if ball.dist(x, y) == best]
    if len(gates) != 1:
        raise BoundaryClipped(
            f"{len(gates)} nearest vertices at distance {best}; set may be clipped"
        )
    return gates[0]


def geodesic_through_projection_check(ball: CubeBall, g: Word, x: Codes) -> bool:
    """Some geodesic from x to gx passes through p and gp, p the projection
    of x onto Min(g): the three-leg sum equals d(x, gx)."""
    gr = ball.graph
    mg = minset(ball, g)
    p = projection_to(ball, mg, x)
    if ball.depth(p) >= ball.radius:
        raise BoundaryClipped("projection lands on the ball boundary; widen the radius")
    gcodes = reduce_codes(gr, g.codes)
    gx = normal_codes(gr, gcodes + x)
    gp = normal_codes(gr, gcodes + p)
    legs = ball.dist(x, p) + ball.dist(p, gp) + ball.dist(gp, gx)
    return legs == ball.dist(x, gx)
