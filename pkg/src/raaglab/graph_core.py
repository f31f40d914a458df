"""Defining graphs, signed alphabets, links, standard subgroups, join detection.

Vertices get a canonical integer index by declaration order. A signed letter
is encoded as ``2*index + signbit`` (signbit 0 for v, 1 for v^-1), so letter
sets can be dense bit-vectors and all tie-breaking downstream is by code.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import GraphError, WordParseError


def inverse_letter(code: int) -> int:
    return code ^ 1


def letter_gen(code: int) -> int:
    return code >> 1


def is_positive(code: int) -> bool:
    return code & 1 == 0


class DefiningGraph:
    """A finite simple graph Gamma = (V, E) with indexed vertices.

    Immutable after construction; safe to share across workers.
    """

    def __init__(self, vertices: Iterable[str], edges: Iterable[tuple[str, str]] = ()):
        self.vertices: tuple[str, ...] = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex names")
        if not self.vertices:
            raise GraphError("graph must have at least one vertex")
        self.index: dict[str, int] = {v: i for i, v in enumerate(self.vertices)}
        self.n = len(self.vertices)
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in edges:
            if a not in self.index or b not in self.index:
                raise GraphError(f"edge ({a},{b}) uses unknown vertex")
            if a == b:
                raise GraphError(f"self-edge at {a} rejected")
            adj[self.index[a]].add(self.index[b])
            adj[self.index[b]].add(self.index[a])
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(s) for s in adj)
        # noncommute_mask[g] = bitmask over generators that do NOT commute with g
        # (g commutes with itself and with its graph neighbors).
        masks = []
        for g in range(self.n):
            m = 0
            for h in range(self.n):
                if h != g and h not in self.adj[g]:
                    m |= 1 << h
            masks.append(m)
        self.noncommute_mask: tuple[int, ...] = tuple(masks)
        self._edge_set = frozenset(
            (min(i, j), max(i, j)) for i in range(self.n) for j in self.adj[i]
        )

    # -- identity ---------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DefiningGraph)
            and self.vertices == other.vertices
            and self._edge_set == other._edge_set
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self._edge_set))

    def __repr__(self) -> str:
        es = " ".join(f"{self.vertices[i]}-{self.vertices[j]}" for i, j in sorted(self._edge_set))
        return f"DefiningGraph({' '.join(self.vertices)}; {es})"

    # -- letters ----------------------------------------------------------

    def letters(self) -> range:
        """All signed letter codes, in canonical order."""
        return range(2 * self.n)

    def letter_name(self, code: int) -> str:
        v = self.vertices[code >> 1]
        return v if code & 1 == 0 else f"{v}^-1"

    def parse_letter(self, token: str) -> int:
        if token.endswith("^-1"):
            name, bit = token[:-3], 1
        elif "^" in token:
            raise WordParseError(f"malformed letter token {token!r}")
        else:
            name, bit = token, 0
        if name not in self.index:
            raise GraphError(f"unknown generator {name!r}")
        return 2 * self.index[name] + bit

    def adjacent(self, g: int, h: int) -> bool:
        return h in self.adj[g]

    def letters_commute(self, x: int, y: int) -> bool:
        """Whether two signed letters represent commuting group elements."""
        gx, gy = x >> 1, y >> 1
        return gx == gy or gy in self.adj[gx]

    def link_letters(self, x: int) -> frozenset[int]:
        """lk(x): the signed letters other than x, x^-1 commuting with x."""
        g = x >> 1
        if g >= self.n:
            raise GraphError(f"letter code {x} out of range")
        return frozenset(c for h in self.adj[g] for c in (2 * h, 2 * h + 1))

    def max_clique_size(self) -> int:
        """Dimension of the Salvetti complex: the largest clique of Gamma."""
        best = 1
        order = range(self.n)

        def extend(clique: list[int], candidates: list[int]) -> None:
            nonlocal best
            best = max(best, len(clique))
            for k, v in enumerate(candidates):
                if len(clique) + len(candidates) - k <= best:
                    return
                extend(clique + [v], [u for u in candidates[k + 1:] if u in self.adj[v]])

        extend([], list(order))
        return best


def link(graph: DefiningGraph, x: int) -> frozenset[int]:
    return graph.link_letters(x)


def is_nontrivial_join(graph: DefiningGraph, support: Iterable[int]) -> bool:
    """Whether the induced subgraph splits as a join of two nonempty parts.

    Equivalent to the complement of the induced subgraph being disconnected.
    Empty or singleton supports are not joins.
    """
    verts = sorted(set(support))
    if len(verts) <= 1:
        return False
    seen = {verts[0]}
    stack = [verts[0]]
    while stack:
        v = stack.pop()
        for u in verts:
            if u not in seen and u != v and u not in graph.adj[v]:
                seen.add(u)
                stack.append(u)
    return len(seen) < len(verts)


def center_vertices(graph: DefiningGraph) -> frozenset[int]:
    """Vertices adjacent to every other vertex; they generate the center."""
    return frozenset(v for v in range(graph.n) if len(graph.adj[v]) == graph.n - 1)


@dataclass(frozen=True)
class StandardSubgroup:
    """A_Delta for Delta the full subgraph induced by ``support``."""

    graph: DefiningGraph
    support: frozenset[int]

    def __post_init__(self) -> None:
        for v in self.support:
            if not 0 <= v < self.graph.n:
                raise GraphError(f"support index {v} out of range")

    @classmethod
    def from_names(cls, graph: DefiningGraph, names: Iterable[str]) -> "StandardSubgroup":
        idx = []
        for name in names:
            if name not in graph.index:
                raise GraphError(f"unknown generator {name!r}")
            idx.append(graph.index[name])
        return cls(graph, frozenset(idx))

    def letter_set(self) -> frozenset[int]:
        return frozenset(c for v in self.support for c in (2 * v, 2 * v + 1))

    def names(self) -> tuple[str, ...]:
        return tuple(self.graph.vertices[v] for v in sorted(self.support))

    def __repr__(self) -> str:
        return f"<A_[{' '.join(self.names())}]>"


def parse_graph_text(text: str) -> DefiningGraph:
    """Graph file format: one `vertices: a b c` line, then `edge: a b` lines.

    Duplicate edges are ignored; self-edges are rejected.
    """
    vertices: list[str] | None = None
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("vertices:"):
            if vertices is not None:
                raise WordParseError(f"line {lineno}: repeated vertices line")
            vertices = line[len("vertices:"):].split()
        elif line.startswith("edge:"):
            parts = line[len("edge:"):].split()
            if len(parts) != 2:
                raise WordParseError(f"line {lineno}: edge needs two endpoints")
            edges.append((parts[0], parts[1]))
        else:
            raise WordParseError(f"line {lineno}: unrecognized line {line!r}")
    if vertices is None:
        raise WordParseError("missing vertices line")
    return DefiningGraph(vertices, edges)


def load_graph(path: str) -> DefiningGraph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph_text(fh.read())
