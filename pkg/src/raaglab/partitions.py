"""Whitehead partitions: validation, enumeration, the attached automorphisms,
compatibility, relative constraint tests, quadrants, and crossing counts.

A partition (P, P*, L) of the signed letters is stored with unordered sides;
the canonical side P is the one holding the lowest split letter.  A based view
reorders sides so the basepoint lies in P.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .automorphisms import Automorphism, GeneratorDescriptor
from .errors import PartitionError
from .graph_core import DefiningGraph, StandardSubgroup
from .words import Codes, CyclicClass, reduce_codes


def _split_letters(sideA: frozenset[int], sideB: frozenset[int]) -> frozenset[int]:
    return frozenset(x for x in sideA if x ^ 1 in sideB) | frozenset(
        x for x in sideB if x ^ 1 in sideA
    )


@dataclass(frozen=True)
class WhiteheadPartition:
    """(P, P*, L) with both sides nonempty and some valid basepoint."""

    graph: DefiningGraph
    sideP: frozenset[int]
    sideQ: frozenset[int]
    link: frozenset[int]

    @classmethod
    def make(
        cls,
        graph: DefiningGraph,
        sideA: frozenset[int] | set[int],
        sideB: frozenset[int] | set[int],
        link: frozenset[int] | set[int],
    ) -> "WhiteheadPartition":
        """Canonicalize side order: P holds the lowest split letter."""
        a, b, l = frozenset(sideA), frozenset(sideB), frozenset(link)
        split = _split_letters(a, b)
        if not split:
            raise PartitionError("partition has no split letter, hence no basepoint")
        low = min(split)
        if low in b:
            a, b = b, a
        return cls(graph, a, b, l)

    def parts(self) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
        return self.sideP, self.sideQ, self.link

    def singles(self) -> frozenset[int]:
        return _split_letters(self.sideP, self.sideQ)

    def double_p(self) -> frozenset[int]:
        return frozenset(x for x in self.sideP if x ^ 1 in self.sideP)

    def double_q(self) -> frozenset[int]:
        return frozenset(x for x in self.sideQ if x ^ 1 in self.sideQ)

    def link_gens(self) -> frozenset[int]:
        return frozenset(x >> 1 for x in self.link)

    def sort_key(self) -> tuple:
        return (tuple(sorted(self.sideP)), tuple(sorted(self.sideQ)))

    def valid_basepoints(self) -> tuple[int, ...]:
        return _valid_basepoints(self)

    def __str__(self) -> str:
        name = self.graph.letter_name
        p = ",".join(name(x) for x in sorted(self.sideP))
        q = ",".join(name(x) for x in sorted(self.sideQ))
        return f"{{{p}}}|{{{q}}}"


@dataclass(frozen=True)
class BasedPartition:
    """A partition with a chosen basepoint; sides ordered so base is in P."""

    partition: WhiteheadPartition
    base: int

    def __post_init__(self) -> None:
        ok, violations = validate_based(self.partition, self.base)
        if not ok:
            raise PartitionError("; ".join(violations))

    @property
    def graph(self) -> DefiningGraph:
        return self.partition.graph

    def side_p(self) -> frozenset[int]:
        p, q, _ = self.partition.parts()
        return p if self.base in p else q

    def side_q(self) -> frozenset[int]:
        p, q, _ = self.partition.parts()
        return q if self.base in p else p

    def swapped(self) -> "BasedPartition":
        return BasedPartition(self.partition, self.base ^ 1)

    def sort_key(self) -> tuple:
        return self.partition.sort_key() + (self.base,)

    def __str__(self) -> str:
        name = self.graph.letter_name
        p = ",".join(name(x) for x in sorted(self.side_p()))
        q = ",".join(name(x) for x in sorted(self.side_q()))
        return f"P={{{p}}} Pstar={{{q}}} base={name(self.base)}"


@lru_cache(maxsize=None)
def _valid_basepoints(partition: WhiteheadPartition) -> tuple[int, ...]:
    return tuple(
        b
        for b in sorted(partition.sideP | partition.sideQ)
        if validate_based(partition, b)[0]
    )


def validate_based(
    partition: WhiteheadPartition, base: int
) -> tuple[bool, list[str]]:
    """Check all based-partition axioms; report every violation."""
    g = partition.graph
    violations: list[str] = []
    p, q, link = partition.parts()
    if base in q:
        p, q = q, p
    name = g.letter_name
    if base not in p:
        violations.append(f"basepoint {name(base)} lies in neither side")
        return False, violations
    if base ^ 1 not in q:
        violations.append(f"inverse of basepoint {name(base)} not on the other side")
    if link != g.link_letters(base):
        violations.append(f"link of partition differs from lk({name(base)})")
    for x in sorted(_split_letters(p, q)):
        if not g.link_letters(x) <= link:
            violations.append(f"split letter {name(x)} has link outside the partition link")
    for x in sorted(p):
        for y in sorted(q):
            if y != x ^ 1 and g.letters_commute(x, y):
                violations.append(f"cross pair {name(x)},{name(y)} commutes")
    if len(p) < 2:
        violations.append("side P has fewer than two elements")
    if len(q) < 2:
        violations.append("side P* has fewer than two elements")
    return not violations, violations


def classify(partition: WhiteheadPartition) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    """(single, double(P), double(P*)); union with link is the whole alphabet."""
    return partition.singles(), partition.double_p(), partition.double_q()


def whitehead_automorphism(bp: BasedPartition) -> Automorphism:
    """The involutive automorphism attached to a based partition.

    b -> b^-1; v -> v b^-1 on the single part of P; v -> b v on the single
    part of P*; v -> b v b^-1 on double(P); fixed elsewhere.
    """
    g = bp.graph
    b = bp.base
    p = bp.side_p()
    q = bp.side_q()
    single = bp.partition.singles()
    dbl_p = frozenset(x for x in p if x ^ 1 in p)
    images: list[Codes] = []
    for v in range(g.n):
        pos = 2 * v
        if pos >> 1 == b >> 1:
            images.append((pos + 1,))
        elif pos in single and pos in p:
            images.append((pos, b ^ 1))
        elif pos in single and pos in q:
            images.append((b, pos))
        elif pos in dbl_p:
            images.append(reduce_codes(g, (b, pos, b ^ 1)))
        else:
            images.append((pos,))
    imgs = tuple(images)
    desc = GeneratorDescriptor("whp", (frozenset(p), b))
    return Automorphism(g, imgs, imgs, (desc,))


def adjacent(p: WhiteheadPartition, q: WhiteheadPartition) -> bool:
    """Some (equivalently every) pair of basepoints are graph neighbors."""
    if p.graph != q.graph:
        raise PartitionError("partitions over different graphs")
    g = p.graph
    for bp in p.valid_basepoints():
        for bq in q.valid_basepoints():
            if g.adjacent(bp >> 1, bq >> 1):
                return True
    return False


def compatible(p: WhiteheadPartition, q: WhiteheadPartition) -> bool:
    """Adjacent, or exactly one empty quadrant among the four side meets."""
    if p == q:
        raise PartitionError("compatibility is undefined for identical partitions")
    if adjacent(p, q):
        return True
    quadrants = [
        p.sideP & q.sideP,
        p.sideP & q.sideQ,
        p.sideQ & q.sideP,
        p.sideQ & q.sideQ,
    ]
    return sum(1 for quad in quadrants if not quad) == 1


@lru_cache(maxsize=None)
def enumerate_partitions(graph: DefiningGraph) -> tuple[WhiteheadPartition, ...]:
    """All Whitehead partitions, each listed once, in canonical order."""
    found: dict[tuple, WhiteheadPartition] = {}
    letters = list(graph.letters())
    for b in letters:
        linkset = graph.link_letters(b)
        rest = [x for x in letters if x not in linkset and x != b and x != (b ^ 1)]
        for picks in itertools.product((0, 1), repeat=len(rest)):
            side_a = {b} | {x for x, c in zip(rest, picks) if c == 0}
            side_b = {b ^ 1} | {x for x, c in zip(rest, picks) if c == 1}
            try:
                part = WhiteheadPartition.make(graph, side_a, side_b, linkset)
            except PartitionError:
                continue
            ok, _ = validate_based(part, b)
            if ok:
                found.setdefault(part.sort_key(), part)
    return tuple(found[k] for k in sorted(found))


@lru_cache(maxsize=None)
def enumerate_based_partitions(graph: DefiningGraph) -> tuple[BasedPartition, ...]:
    """All (partition, basepoint) pairs in canonical order."""
    result = []
    for part in enumerate_partitions(graph):
        for b in part.valid_basepoints():
            result.append(BasedPartition(part, b))
    return tuple(result)


def relative_condition(
    bp: BasedPartition, family: list[StandardSubgroup] | tuple[StandardSubgroup, ...]
) -> bool:
    """Constraint test for the attached automorphism to preserve each A_Delta.

    For each Delta not containing the basepoint generator: the single part
    avoids Delta, and at least one of double(P), double(P*) avoids Delta.
    """
    single = bp.partition.singles()
    p = bp.side_p()
    q = bp.side_q()
    dbl_p = frozenset(x for x in p if x ^ 1 in p)
    dbl_q = frozenset(x for x in q if x ^ 1 in q)
    base_gen = bp.base >> 1
    for sub in family:
        delta = sub.support
        if base_gen in delta:
            continue
        if any((x >> 1) in delta for x in single):
            return False
        hit_p = any((x >> 1) in delta for x in dbl_p)
        hit_q = any((x >> 1) in delta for x in dbl_q)
        if hit_p and hit_q:
            return False
    return True


def _based_from_side(graph: DefiningGraph, side: frozenset[int], base: int) -> BasedPartition:
    """Based partition determined by one side and its basepoint."""
    linkset = graph.link_letters(base)
    other = frozenset(graph.letters()) - side - linkset
    part = WhiteheadPartition.make(graph, side, other, linkset)
    return BasedPartition(part, base)


def quadrant_partitions(
    bp_p: BasedPartition, bp_q: BasedPartition
) -> list[BasedPartition]:
    """The two based partitions cut out of a non-compatible pair.

    Tries the two hypothesis cases under all side exchanges in a fixed order
    and returns the outputs of the first case that applies:
    case 1 (v in double(Q), w^-1 in P): (P n Q*, w^-1) and (P* n Q, v^-1);
    case 2 (v,w single, v in Q):        (P n Q, v)     and (P* n Q*, v^-1).
    """
    if bp_p.partition.graph != bp_q.partition.graph:
        raise PartitionError("partitions over different graphs")
    if bp_p.partition == bp_q.partition:
        raise PartitionError("quadrants need two distinct partitions")
    if compatible(bp_p.partition, bp_q.partition):
        raise PartitionError("quadrants are for non-compatible pairs")
    graph = bp_p.partition.graph
    single_p = bp_p.partition.singles()
    single_q = bp_q.partition.singles()

    views = []
    for swap_p, swap_q in itertools.product((False, True), repeat=2):
        views.append((bp_p.swapped() if swap_p else bp_p, bp_q.swapped() if swap_q else bp_q))

    for case in (1, 2):
        for vp, vq in views:
            v, w = vp.base, vq.base
            p, ps = vp.side_p(), vp.side_q()
            q, qs = vq.side_p(), vq.side_q()
            if case == 1:
                if v in q and (v ^ 1) in q and (w ^ 1) in p:
                    return [
                        _based_from_side(graph, p & qs, w ^ 1),
                        _based_from_side(graph, ps & q, v ^ 1),
                    ]
            else:
                if v in single_q and w in single_p and v in q:
                    return [
                        _based_from_side(graph, p & q, v),
                        _based_from_side(graph, ps & qs, v ^ 1),
                    ]
    raise PartitionError("no quadrant hypothesis applies under any side exchange")


def crossing_count(partition: WhiteheadPartition, cls: CyclicClass) -> int:
    """Edges dual to the partition hyperplane on a shortest loop of the class.

    Letters over the partition link are invisible.  A remaining letter x
    travels from the side of x^-1 to the side of x; one crossing per cyclic
    transition whose sides disagree.
    """
    link_gens = partition.link_gens()
    letters = [x for x in cls.codes if (x >> 1) not in link_gens]
    if not letters:
        return 0
    p = partition.sideP
    count = 0
    m = len(letters)
    for i in range(m):
        end_side = letters[i] in p
        start_side = (letters[(i + 1) % m] ^ 1) in p
        if end_side != start_side:
            count += 1
    return count
