"""Blow-up simplices, the constraint-respecting Whitehead move graph, and the
norm-change bookkeeping check.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import CapExceeded, PartitionError
from .graph_core import DefiningGraph
from .mccool import (
    ConstraintFamily,
    SalvettiState,
    _canonical_tuple_mod_perms,
    _constraint_perms,
    _move_lengths,
    state_cap_default,
)
from .partitions import (
    BasedPartition,
    WhiteheadPartition,
    compatible,
    enumerate_based_partitions,
    enumerate_partitions,
    relative_condition,
)
from .words import CyclicClass, cyclic_reduce_codes


@dataclass(frozen=True)
class BlowupSimplex:
    """A nonempty set of pairwise compatible Whitehead partitions."""

    partitions: tuple[WhiteheadPartition, ...]

    def __len__(self) -> int:
        return len(self.partitions)


def enumerate_simplices(graph: DefiningGraph, max_size: int) -> list[BlowupSimplex]:
    """All cliques of size <= max_size in the compatibility graph."""
    parts = enumerate_partitions(graph)
    compat = {
        (i, j): compatible(parts[i], parts[j])
        for i, j in itertools.combinations(range(len(parts)), 2)
    }
    result: list[BlowupSimplex] = []

    def extend(clique: list[int], start: int) -> None:
        if clique:
            result.append(BlowupSimplex(tuple(parts[i] for i in clique)))
        if len(clique) >= max_size:
            return
        for k in range(start, len(parts)):
            if all(compat[(i, k)] for i in clique):
                extend(clique + [k], k + 1)

    extend([], 0)
    return result


@dataclass
class MoveGraphNode:
    state: SalvettiState
    in_sg: bool
    head: tuple[int, ...]


@dataclass
class MoveGraph:
    """BFS closure of the identity state under constraint-passing moves with
    heads bounded componentwise."""

    nodes: list[MoveGraphNode]
    edges: list[tuple[int, int, BasedPartition]]
    complete: bool
    node_keys: list[tuple]

    def connected(self) -> bool:
        if not self.nodes:
            return True
        seen = {0}
        stack = [0]
        adj: dict[int, list[int]] = {}
        for a, b, _ in self.edges:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        while stack:
            v = stack.pop()
            for u in adj.get(v, ()):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == len(self.nodes)

    def stats(self) -> dict:
        return {
            "nodes": len(self.nodes),
            "edges": len(self.edges),
            "connected": self.connected(),
            "complete": self.complete,
        }


def move_graph(
    targets: tuple[CyclicClass, ...] | list[CyclicClass],
    family: ConstraintFamily,
    norm_bound: tuple[int, ...],
    state_cap: int | None = None,
) -> MoveGraph:
    """Explore marked Salvettis reachable through constraint-passing moves
    while every head entry stays within the bound.  Nodes are identified by
    canonical pulled tuples modulo constraint-preserving permutations; every
    materialized node is certified inside the constraint-respecting set.
    """
    g = family.graph
    targets = tuple(targets)
    if len(norm_bound) != len(targets):
        raise PartitionError("norm bound must match the number of targets")
    cap = state_cap if state_cap is not None else state_cap_default()
    perms = _constraint_perms(g, tuple(s.support for s in family.stabilized))
    moves = [
        bp
        for bp in enumerate_based_partitions(g)
        if relative_condition(bp, family.stabilized)
    ]
    start = SalvettiState.initial(g, targets)
    if any(a > b for a, b in zip(start.head(), norm_bound)):
        return MoveGraph([], [], True, [])
    start_key = _canonical_tuple_mod_perms(g, start.pulled, perms)
    nodes = [MoveGraphNode(start, True, start.head())]
    keys = {start_key: 0}
    edges: list[tuple[int, int, BasedPartition]] = []
    edge_seen: set[tuple[int, int, tuple]] = set()
    complete = True
    frontier = [0]
    while frontier:
        nxt = []
        for idx in frontier:
            st = nodes[idx].state
            for bp in moves:
                head = _move_lengths(g, st.pulled, bp)
                if any(a > b for a, b in zip(head, norm_bound)):
                    continue
                succ = st.move(bp)
                key = _canonical_tuple_mod_perms(g, succ.pulled, perms)
                j = keys.get(key)
                if j is None:
                    if len(nodes) >= cap:
                        complete = False
                        continue
                    j = len(nodes)
                    keys[key] = j
                    nodes.append(MoveGraphNode(succ, True, succ.head()))
                    nxt.append(j)
                mark = (min(idx, j), max(idx, j), bp.sort_key())
                if idx != j and mark not in edge_seen:
                    edge_seen.add(mark)
                    edges.append((idx, j, bp))
        frontier = nxt
    return MoveGraph(nodes, edges, complete, sorted(keys))


def verify_changenorm(
    state: SalvettiState,
    bp: BasedPartition,
    targets: tuple[CyclicClass, ...] | list[CyclicClass] | None = None,
) -> bool:
    """Entrywise check of the elementary norm-change identity:
    new length = old length + crossings at the partition hyperplane
    - letters at the basepoint hyperplane, on every pulled target."""
    g = state.graph
    if targets is None:
        pulled = state.pulled
    else:
        inv = state.marking.inverse()
        pulled = tuple(
            cyclic_reduce_codes(g, inv.apply_codes(t.codes)) for t in targets
        )
    predicted = _move_lengths(g, pulled, bp)
    actual = SalvettiState(state.marking, pulled).move(bp).head()
    return predicted == actual
