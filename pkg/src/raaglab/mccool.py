"""Lexicographic norm, reductive Whitehead moves, greedy peak-reduction
minimization, and the orbit-equivalence decision with verified certificates.

A state is a marked Salvetti: a marking automorphism plus the pulled-back
target classes (cyclically reduced words).  Moving across a based partition
composes the marking with the attached involutive automorphism and applies it
to the pulled targets.  Norms compare (head, finite tail) lexicographically;
successor heads are bookkept cheaply through hyperplane crossing counts and
re-verified on the chosen move.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from functools import lru_cache

from .automorphisms import (
    Automorphism,
    compose,
    identity_automorphism,
    permutation_automorphism,
    signed_letter_permutations,
)
from .errors import CapExceeded, InvariantBreach, UNDECIDED
from .graph_core import DefiningGraph, StandardSubgroup
from .partitions import (
    BasedPartition,
    crossing_count,
    enumerate_based_partitions,
    relative_condition,
    whitehead_automorphism,
)
from .words import (
    Codes,
    CyclicClass,
    Word,
    classes_up_to,
    conjugacy_canonical_codes,
    cyclic_reduce_codes,
    translation_length_codes,
)

DEFAULT_STATE_CAP = 100000


def state_cap_default() -> int:
    env = os.environ.get("RAAG_STATE_CAP")
    return int(env) if env else DEFAULT_STATE_CAP


@dataclass(frozen=True)
class ConstraintFamily:
    """Stabilized standard subgroups G, fixed classes H, and the tail policy."""

    graph: DefiningGraph
    stabilized: tuple[StandardSubgroup, ...] = ()
    fixed_classes: tuple[CyclicClass, ...] = ()
    tail_max_length: int = 2

    def __post_init__(self) -> None:
        for sub in self.stabilized:
            if sub.graph != self.graph:
                raise InvariantBreach("stabilized subgroup over a different graph")

    def extend_targets(
        self, targets: tuple[CyclicClass, ...] | list[CyclicClass]
    ) -> tuple[CyclicClass, ...]:
        """Working tuple: the given targets followed by the pinned classes,
        which certificates must send back to themselves."""
        return tuple(targets) + self.fixed_classes


@dataclass(frozen=True)
class SalvettiState:
    """Marking automorphism with the pulled-back targets phi^-1(h_i)."""

    marking: Automorphism
    pulled: tuple[Codes, ...]

    @property
    def graph(self) -> DefiningGraph:
        return self.marking.graph

    @classmethod
    def initial(cls, graph: DefiningGraph, targets: tuple[CyclicClass, ...]) -> "SalvettiState":
        return cls(identity_automorphism(graph), tuple(t.codes for t in targets))

    @classmethod
    def from_marking(
        cls, marking: Automorphism, targets: tuple[CyclicClass, ...]
    ) -> "SalvettiState":
        pulled = tuple(
            cyclic_reduce_codes(marking.graph, marking.apply_inverse_codes(t.codes))
            for t in targets
        )
        return cls(marking, pulled)

    def head(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.pulled)

    def pulled_classes(self) -> tuple[CyclicClass, ...]:
        g = self.graph
        return tuple(
            CyclicClass(g, conjugacy_canonical_codes(g, t)) for t in self.pulled
        )

    def move(self, bp: BasedPartition) -> "SalvettiState":
        """Successor across one Whitehead move."""
        w = whitehead_automorphism(bp)
        g = self.graph
        pulled = tuple(cyclic_reduce_codes(g, w.apply_codes(t)) for t in self.pulled)
        return SalvettiState(compose(self.marking, w), pulled)


class NormView:
    """Lexicographic norm: target lengths first, then a finite canonical tail.

    The tail ranges over all conjugacy classes of length <= tail_max_length
    in (length, canonical word) order; entries are lengths of inverse-marking
    images.  Comparisons are lexicographic, head before tail.
    """

    __slots__ = ("head", "_tail_fn", "_tail")

    def __init__(self, head: tuple[int, ...], tail_fn):
        self.head = head
        self._tail_fn = tail_fn
        self._tail = None

    @property
    def tail(self) -> tuple[int, ...]:
        if self._tail is None:
            self._tail = self._tail_fn()
        return self._tail

    def key(self) -> tuple:
        return (self.head, self.tail)

    def __lt__(self, other: "NormView") -> bool:
        if self.head != other.head:
            return self.head < other.head
        return self.tail < other.tail

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, NormView)
            and self.head == other.head
            and self.tail == other.tail
        )

    def __repr__(self) -> str:
        return f"NormView(head={self.head})"


def _tail_classes(graph: DefiningGraph, tail_max_length: int) -> tuple[Codes, ...]:
    if tail_max_length <= 0:
        return ()
    return classes_up_to(graph, tail_max_length)


def norm(state: SalvettiState, family: ConstraintFamily) -> NormView:
    g = state.graph

    def tail() -> tuple[int, ...]:
        inv = state.marking.inverse()
        return tuple(
            translation_length_codes(g, inv.apply_codes(c))
            for c in _tail_classes(g, family.tail_max_length)
        )

    return NormView(state.head(), tail)


def neighbor_moves(
    state: SalvettiState, family: ConstraintFamily
) -> list[tuple[BasedPartition, SalvettiState]]:
    """All constraint-passing Whitehead moves with their successor states."""
    return [
        (bp, state.move(bp))
        for bp in enumerate_based_partitions(state.graph)
        if relative_condition(bp, family.stabilized)
    ]


def reductive_moves(
    state: SalvettiState, family: ConstraintFamily
) -> list[tuple[BasedPartition, SalvettiState]]:
    """Moves whose successor norm is strictly smaller (head, then tail up to
    the cutoff; ties beyond the cutoff are not reductive)."""
    base = norm(state, family)
    out = []
    for bp, nxt in neighbor_moves(state, family):
        if norm(nxt, family) < base:
            out.append((bp, nxt))
    return out


def _move_lengths(
    graph: DefiningGraph, words: tuple[Codes, ...], bp: BasedPartition
) -> tuple[int, ...]:
    """Lengths after one Whitehead move, via the hyperplane bookkeeping:
    new length = old + crossings at the partition - letters at the basepoint."""
    base_gen = bp.base >> 1
    out = []
    for t in words:
        cross = crossing_count(bp.partition, CyclicClass(graph, t))
        letters = sum(1 for x in t if (x >> 1) == base_gen)
        out.append(len(t) + cross - letters)
    return tuple(out)


def _successor_head_fast(state: SalvettiState, bp: BasedPartition) -> tuple[int, ...]:
    return _move_lengths(state.graph, state.pulled, bp)


def minimize(
    targets: tuple[CyclicClass, ...] | list[CyclicClass],
    family: ConstraintFamily,
) -> tuple[SalvettiState, list[BasedPartition]]:
    """Greedy descent: take the move with the smallest successor norm until no
    reductive move remains.  Ties break by canonical partition order, then
    basepoint.  The trace certifies: its composition maps the input classes to
    the final pulled targets.

    Candidate norms come from crossing-count bookkeeping over the pulled
    targets and pulled tail classes, both maintained incrementally; the
    chosen move is re-applied for real and checked against the bookkeeping.
    """
    g = family.graph
    state = SalvettiState.initial(g, family.extend_targets(targets))
    tail_words = _tail_classes(g, family.tail_max_length)
    trace: list[BasedPartition] = []
    moves = [
        bp
        for bp in enumerate_based_partitions(g)
        if relative_condition(bp, family.stabilized)
    ]
    while True:
        current = (state.head(), tuple(len(t) for t in tail_words))
        # Head-first: tails are only computed for moves at the least head.
        best_head = None
        candidates: list[BasedPartition] = []
        for bp in moves:
            head = _move_lengths(g, state.pulled, bp)
            if head > current[0]:
                continue
            if best_head is None or head < best_head:
                best_head, candidates = head, [bp]
            elif head == best_head:
                candidates.append(bp)
        best = None  # (tail, sort_key, bp)
        if best_head is not None:
            for bp in candidates:
                tail = _move_lengths(g, tail_words, bp)
                if (best_head, tail) >= current:
                    continue
                key = (tail, bp.sort_key())
                if best is None or key < best[:2]:
                    best = (tail, bp.sort_key(), bp)
        if best is None:
            return state, trace
        tail, _, bp = best
        w = whitehead_automorphism(bp)
        state = state.move(bp)
        tail_words = tuple(
            cyclic_reduce_codes(g, w.apply_codes(t)) for t in tail_words
        )
        if state.head() != best_head or tuple(len(t) for t in tail_words) != tail:
            raise InvariantBreach(
                "crossing-count norm bookkeeping disagrees with the applied move"
            )
        if (best_head, tail) >= current:
            raise InvariantBreach("selected move does not decrease the norm")
        trace.append(bp)


@lru_cache(maxsize=None)
def _constraint_perms(
    graph: DefiningGraph, supports: tuple[frozenset[int], ...]
) -> tuple[tuple[int, ...], ...]:
    """Signed letter permutations preserving each stabilized support setwise."""
    out = []
    for table in signed_letter_permutations(graph):
        if all(
            frozenset(table[2 * v] >> 1 for v in sup) == sup for sup in supports
        ):
            out.append(table)
    return tuple(out)


def _permute_codes(table: tuple[int, ...], codes: Codes) -> Codes:
    return tuple(table[x] for x in codes)


def _canonical_tuple_mod_perms(
    graph: DefiningGraph,
    pulled: tuple[Codes, ...],
    perms: tuple[tuple[int, ...], ...],
) -> tuple[Codes, ...]:
    """Least tuple of class canonicals over the allowed permutations."""
    best = None
    for table in perms:
        cand = tuple(
            conjugacy_canonical_codes(graph, _permute_codes(table, t)) for t in pulled
        )
        if best is None or cand < best:
            best = cand
    return best


@dataclass
class EquivalenceReport:
    """Outcome of the orbit decision, plus the verified certificate if any."""

    status: str  # "equivalent" | "inequivalent" | "undecided"
    certificate: Automorphism | None = None
    minimal_head_left: tuple[int, ...] = ()
    minimal_head_right: tuple[int, ...] = ()
    trace_left: list[BasedPartition] = field(default_factory=list)
    trace_right: list[BasedPartition] = field(default_factory=list)
    states_explored: int = 0
    norm_window_note: str = ""


def equivalent(
    targets_a: tuple[CyclicClass, ...] | list[CyclicClass],
    targets_b: tuple[CyclicClass, ...] | list[CyclicClass],
    family: ConstraintFamily,
    state_cap: int | None = None,
) -> EquivalenceReport:
    """Decide whether some constraint-respecting untwisted automorphism maps
    the first class tuple to the second; produce a verified certificate.

    Minimize both tuples, compare minimal heads, then search the level set of
    the minimal head by BFS, identifying states by canonical pulled tuples
    modulo constraint-preserving signed graph permutations.
    """
    base_a, base_b = tuple(targets_a), tuple(targets_b)
    if len(base_a) != len(base_b):
        raise InvariantBreach("target tuples must have equal lengths")
    targets_a = family.extend_targets(base_a)
    targets_b = family.extend_targets(base_b)
    g = family.graph
    cap = state_cap if state_cap is not None else state_cap_default()
    state_a, trace_a = minimize(base_a, family)
    state_b, trace_b = minimize(base_b, family)
    report = EquivalenceReport(
        status="inequivalent",
        minimal_head_left=state_a.head(),
        minimal_head_right=state_b.head(),
        trace_left=trace_a,
        trace_right=trace_b,
    )
    if state_a.head() != state_b.head():
        return report

    perms = _constraint_perms(g, tuple(s.support for s in family.stabilized))
    target_key = _canonical_tuple_mod_perms(g, state_b.pulled, perms)
    moves = [
        bp
        for bp in enumerate_based_partitions(g)
        if relative_condition(bp, family.stabilized)
    ]
    level_head = state_a.head()

    start_key = _canonical_tuple_mod_perms(g, state_a.pulled, perms)
    visited = {start_key: state_a}
    frontier = [state_a]
    meet = state_a if start_key == target_key else None
    while frontier and meet is None:
        nxt_frontier = []
        for st in frontier:
            for bp in moves:
                if _successor_head_fast(st, bp) != level_head:
                    continue
                succ = st.move(bp)
                key = _canonical_tuple_mod_perms(g, succ.pulled, perms)
                if key in visited:
                    continue
                if len(visited) >= cap:
                    report.status = UNDECIDED
                    report.states_explored = len(visited)
                    return report
                visited[key] = succ
                nxt_frontier.append(succ)
                if key == target_key:
                    meet = succ
                    break
            if meet is not None:
                break
        frontier = nxt_frontier
    report.states_explored = len(visited)
    if meet is None:
        if family.tail_max_length >= 0:
            report.norm_window_note = (
                f"inequivalent at configured norm window "
                f"(tail length {family.tail_max_length})"
            )
        return report

    # Extract the witnessing permutation and assemble the certificate
    # alpha = marking_b o pi o marking_meet^-1.
    witness = None
    for table in perms:
        if all(
            conjugacy_canonical_codes(g, _permute_codes(table, meet.pulled[i]))
            == conjugacy_canonical_codes(g, state_b.pulled[i])
            for i in range(len(targets_a))
        ):
            witness = table
            break
    if witness is None:
        raise InvariantBreach("level meet without a witnessing permutation")
    pi = permutation_automorphism(g, witness)
    certificate = compose(state_b.marking, compose(pi, meet.marking.inverse()))
    for i, t in enumerate(targets_a):
        image = conjugacy_canonical_codes(g, certificate.apply_codes(t.codes))
        if image != targets_b[i].codes:
            raise InvariantBreach("certificate fails to map the target classes")
    report.status = "equivalent"
    report.certificate = certificate
    return report


def expand_fixed_subgroup(generators: list[Word] | tuple[Word, ...]) -> list[CyclicClass]:
    """Cyclic families standing in for a finitely generated fixed subgroup:
    classes of every a_i and every a_i a_j with i < j, deduplicated."""
    gens = list(generators)
    if not gens:
        raise InvariantBreach("expand_fixed_subgroup needs at least one generator")
    g = gens[0].graph
    out: list[CyclicClass] = []
    seen: set[Codes] = set()
    words = [w.codes for w in gens]
    products = [words[i] + words[j] for i in range(len(words)) for j in range(len(words)) if i < j]
    for codes in words + products:
        canon = conjugacy_canonical_codes(g, codes)
        if canon not in seen:
            seen.add(canon)
            out.append(CyclicClass(g, canon))
    return out


def build_auter_embedding(graph: DefiningGraph) -> tuple[DefiningGraph, ConstraintFamily]:
    """Adjoin an isolated vertex t: untwisted automorphisms of the original
    group match the McCool family (stabilize A_Gamma, fix [t])."""
    fresh = "t"
    k = 0
    while fresh in graph.index:
        k += 1
        fresh = f"t{k}"
    vertices = graph.vertices + (fresh,)
    edges = [
        (graph.vertices[i], graph.vertices[j])
        for i in range(graph.n)
        for j in graph.adj[i]
        if i < j
    ]
    big = DefiningGraph(vertices, edges)
    sub = StandardSubgroup(big, frozenset(range(graph.n)))
    t_class = CyclicClass.of(Word(big, (2 * graph.n,)))
    family = ConstraintFamily(big, (sub,), (t_class,))
    return big, family
