"""Generator descriptors, certified automorphisms, application and composition.

Automorphisms carry generator images together with verified inverse images,
so every operation stays total: inverting an arbitrary endomorphism is never
attempted.  Descriptor constructors validate the defining conditions of each
generator kind before building.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceeded, DescriptorError, GraphError, INAPPLICABLE, UNKNOWN
from .graph_core import DefiningGraph, StandardSubgroup, is_nontrivial_join
from .words import (
    Codes,
    Word,
    classes_up_to,
    cyclic_reduce_codes,
    inverse_codes,
    normal_codes,
    reduce_codes,
    support_codes,
    translation_length_codes,
)


@dataclass(frozen=True)
class GeneratorDescriptor:
    """One elementary generator: kind plus canonical parameters.

    kinds: inv(v) | perm(letter map) | fold(v1,v2) | twist(v1,v2)
           | pconj(v, moved) | whp(sideP, base)
    """

    kind: str
    data: tuple

    def text(self, graph: DefiningGraph) -> str:
        name = graph.vertices.__getitem__
        if self.kind == "inv":
            return f"inv {name(self.data[0])}"
        if self.kind == "perm":
            pairs = " ".join(
                f"{name(i)}:{graph.letter_name(self.data[i])}" for i in range(graph.n)
            )
            return f"perm {pairs}"
        if self.kind in ("fold", "twist"):
            return f"{self.kind} {name(self.data[0])} {name(self.data[1])}"
        if self.kind == "pconj":
            moved = ",".join(name(v) for v in sorted(self.data[1]))
            return f"pconj {name(self.data[0])} {{{moved}}}"
        if self.kind == "whp":
            side = ",".join(graph.letter_name(x) for x in sorted(self.data[0]))
            return f"whp P={{{side}}} base={graph.letter_name(self.data[1])}"
        return f"{self.kind} {self.data!r}"


@dataclass(frozen=True)
class Automorphism:
    """Generator images with a certified inverse and optional factorization."""

    graph: DefiningGraph
    images: tuple[Codes, ...]
    inverse_images: tuple[Codes, ...]
    factorization: tuple[GeneratorDescriptor, ...] | None = None

    # -- application ------------------------------------------------------

    def apply_codes(self, codes: Codes) -> Codes:
        out: list[int] = []
        for x in codes:
            img = self.images[x >> 1]
            out.extend(img if x & 1 == 0 else inverse_codes(img))
        return normal_codes(self.graph, tuple(out))

    def apply_inverse_codes(self, codes: Codes) -> Codes:
        out: list[int] = []
        for x in codes:
            img = self.inverse_images[x >> 1]
            out.extend(img if x & 1 == 0 else inverse_codes(img))
        return normal_codes(self.graph, tuple(out))

    def apply(self, w: Word) -> Word:
        return Word(self.graph, self.apply_codes(w.codes))

    def inverse(self) -> "Automorphism":
        return Automorphism(self.graph, self.inverse_images, self.images, None)

    def is_identity(self) -> bool:
        return all(self.images[v] == (2 * v,) for v in range(self.graph.n))

    def image_of_letter(self, code: int) -> Codes:
        img = self.images[code >> 1]
        return img if code & 1 == 0 else inverse_codes(img)

    def max_image_length(self) -> int:
        return max((len(w) for w in self.images), default=0)

    def descriptor_text(self) -> str:
        if self.factorization is None:
            return "<raw images>"
        if not self.factorization:
            return "id"
        return "; ".join(d.text(self.graph) for d in self.factorization)

    def __str__(self) -> str:
        parts = []
        for v in range(self.graph.n):
            img = " ".join(self.graph.letter_name(x) for x in self.images[v]) or "1"
            parts.append(f"{self.graph.vertices[v]} -> {img}")
        return ", ".join(parts)


def identity_automorphism(graph: DefiningGraph) -> Automorphism:
    gens = tuple((2 * v,) for v in range(graph.n))
    return Automorphism(graph, gens, gens, ())


def make_inversion(graph: DefiningGraph, v: int | str) -> Automorphism:
    v = graph.index[v] if isinstance(v, str) else v
    if not 0 <= v < graph.n:
        raise GraphError(f"unknown vertex index {v}")
    imgs = tuple((2 * u + 1,) if u == v else (2 * u,) for u in range(graph.n))
    return Automorphism(graph, imgs, imgs, (GeneratorDescriptor("inv", (v,)),))


def make_graph_permutation(graph: DefiningGraph, letter_map: dict[int, int]) -> Automorphism:
    """From a bijection of the signed letters commuting with inversion and
    preserving adjacency of underlying vertices."""
    mapping = dict(letter_map)
    for x in list(mapping):
        xi = x ^ 1
        if xi not in mapping:
            mapping[xi] = mapping[x] ^ 1
    if sorted(mapping) != list(graph.letters()) or sorted(mapping.values()) != list(graph.letters()):
        raise DescriptorError("permutation is not a bijection of the signed letters")
    for x in graph.letters():
        if mapping[x ^ 1] != mapping[x] ^ 1:
            raise DescriptorError("permutation does not commute with inversion")
    for g in range(graph.n):
        for h in graph.adj[g]:
            if mapping[2 * g] >> 1 not in graph.adj[mapping[2 * h] >> 1]:
                raise DescriptorError("permutation does not preserve adjacency")
    imgs = tuple((mapping[2 * v],) for v in range(graph.n))
    inv_map = {b: a for a, b in mapping.items()}
    inv_imgs = tuple((inv_map[2 * v],) for v in range(graph.n))
    desc = GeneratorDescriptor("perm", tuple(mapping[2 * v] for v in range(graph.n)))
    return Automorphism(graph, imgs, inv_imgs, (desc,))


def make_transvection(graph: DefiningGraph, v1: int | str, v2: int | str) -> Automorphism:
    """v1 -> v1 v2; a twist when v1, v2 commute, otherwise a fold.

    Well-defined iff every generator adjacent to v1 centralizes v2.
    """
    v1 = graph.index[v1] if isinstance(v1, str) else v1
    v2 = graph.index[v2] if isinstance(v2, str) else v2
    if v1 == v2:
        raise DescriptorError("transvection needs distinct vertices")
    for u in graph.adj[v1]:
        if u != v2 and u not in graph.adj[v2]:
            raise DescriptorError(
                f"lk({graph.vertices[v1]}) contains {graph.vertices[u]}, "
                f"which does not centralize {graph.vertices[v2]}"
            )
    kind = "twist" if v2 in graph.adj[v1] else "fold"
    imgs = tuple((2 * v1, 2 * v2) if u == v1 else (2 * u,) for u in range(graph.n))
    inv = tuple((2 * v1, 2 * v2 + 1) if u == v1 else (2 * u,) for u in range(graph.n))
    return Automorphism(graph, imgs, inv, (GeneratorDescriptor(kind, (v1, v2)),))


def make_partial_conjugation(
    graph: DefiningGraph, v: int | str, moved: frozenset[int] | set[int] | tuple
) -> Automorphism:
    """w -> v w v^-1 for w in moved, fixed otherwise.

    Well-defined iff any two generators commuting with each other but not
    with v are both moved or both fixed.
    """
    v = graph.index[v] if isinstance(v, str) else v
    moved_set = frozenset(graph.index[m] if isinstance(m, str) else m for m in moved)
    for m in moved_set:
        if not 0 <= m < graph.n:
            raise GraphError(f"unknown vertex index {m}")
    outside = [u for u in range(graph.n) if u != v and u not in graph.adj[v]]
    for u, w in itertools.combinations(outside, 2):
        if w in graph.adj[u] and (u in moved_set) != (w in moved_set):
            raise DescriptorError(
                f"{graph.vertices[u]} and {graph.vertices[w]} commute, avoid "
                f"{graph.vertices[v]}, and are split by the moved set"
            )
    a, ai = 2 * v, 2 * v + 1
    imgs = tuple(
        reduce_codes(graph, (a, 2 * u, ai)) if u in moved_set else (2 * u,)
        for u in range(graph.n)
    )
    inv = tuple(
        reduce_codes(graph, (ai, 2 * u, a)) if u in moved_set else (2 * u,)
        for u in range(graph.n)
    )
    return Automorphism(graph, imgs, inv, (GeneratorDescriptor("pconj", (v, moved_set)),))


def make_raw(
    graph: DefiningGraph,
    images: dict[int, Codes] | tuple[Codes, ...],
    inverse_images: dict[int, Codes] | tuple[Codes, ...],
) -> Automorphism:
    """Build from explicit images plus claimed inverse images, verifying both
    composition directions and preservation of all defining relations."""
    if isinstance(images, dict):
        images = tuple(tuple(images[v]) for v in range(graph.n))
    if isinstance(inverse_images, dict):
        inverse_images = tuple(tuple(inverse_images[v]) for v in range(graph.n))
    auto = Automorphism(graph, tuple(images), tuple(inverse_images), None)
    _verify_automorphism(auto)
    return auto


def _verify_automorphism(auto: Automorphism) -> None:
    g = auto.graph
    for v in range(g.n):
        if auto.apply_codes(auto.inverse_images[v]) != (2 * v,):
            raise DescriptorError(f"images o inverse_images != id at {g.vertices[v]}")
        if auto.apply_inverse_codes(auto.images[v]) != (2 * v,):
            raise DescriptorError(f"inverse_images o images != id at {g.vertices[v]}")
    for u in range(g.n):
        for w in g.adj[u]:
            if u < w:
                comm = (2 * u, 2 * w, 2 * u + 1, 2 * w + 1)
                if auto.apply_codes(comm):
                    raise DescriptorError(
                        f"relation [{g.vertices[u]},{g.vertices[w]}] not preserved"
                    )


def compose(f: Automorphism, g: Automorphism) -> Automorphism:
    """f o g: apply g first.  Factorizations concatenate when both known."""
    if f.graph != g.graph:
        raise GraphError("automorphisms over different graphs")
    imgs = tuple(f.apply_codes(g.images[v]) for v in range(f.graph.n))
    inv = tuple(g.apply_inverse_codes(f.inverse_images[v]) for v in range(f.graph.n))
    fact = None
    if f.factorization is not None and g.factorization is not None:
        fact = f.factorization + g.factorization
    return Automorphism(f.graph, imgs, inv, fact)


def compose_all(autos: list[Automorphism], graph: DefiningGraph) -> Automorphism:
    acc = identity_automorphism(graph)
    for a in autos:
        acc = compose(acc, a)
    return acc


def equal_automorphisms(f: Automorphism, g: Automorphism) -> bool:
    """Exact equality: identical reduced generator images."""
    return f.graph == g.graph and all(
        normal_codes(f.graph, f.images[v]) == normal_codes(f.graph, g.images[v])
        for v in range(f.graph.n)
    )


def is_simple(auto: Automorphism):
    """Whether every generator image has a join-free support.

    Only meaningful when each generator appears in the cyclically reduced
    image of itself; returns INAPPLICABLE otherwise.
    """
    g = auto.graph
    supports = []
    for v in range(g.n):
        cyc = cyclic_reduce_codes(g, auto.images[v])
        sup = support_codes(cyc)
        if v not in sup:
            return INAPPLICABLE
        supports.append(sup)
    return all(not is_nontrivial_join(g, sup) for sup in supports)


@lru_cache(maxsize=None)
def signed_letter_permutations(graph: DefiningGraph) -> tuple[tuple[int, ...], ...]:
    """All adjacency-preserving signed bijections of the letters, as
    letter-code maps (index by code), in canonical order."""
    n = graph.n
    degree = [len(graph.adj[v]) for v in range(n)]
    result = []
    for perm in itertools.permutations(range(n)):
        if any(degree[v] != degree[perm[v]] for v in range(n)):
            continue
        if any(perm[u] not in graph.adj[perm[v]] for v in range(n) for u in graph.adj[v]):
            continue
        for signs in itertools.product((0, 1), repeat=n):
            table = [0] * (2 * n)
            for v in range(n):
                table[2 * v] = 2 * perm[v] + signs[v]
                table[2 * v + 1] = 2 * perm[v] + 1 - signs[v]
            result.append(tuple(table))
    return tuple(sorted(result))


def permutation_automorphism(graph: DefiningGraph, table: tuple[int, ...]) -> Automorphism:
    return make_graph_permutation(graph, {2 * v: table[2 * v] for v in range(graph.n)})


def is_graph_perm_equivalent(f: Automorphism, g: Automorphism) -> bool:
    """Whether f and g mark the same Salvetti complex: f^-1 o g is, up to an
    inner automorphism, induced by an adjacency-preserving signed bijection.

    Exact criterion: such compositions are precisely the automorphisms
    preserving the conjugacy length of every class of length <= 2.
    """
    if f.graph != g.graph:
        raise GraphError("automorphisms over different graphs")
    h = compose(f.inverse(), g)
    gr = f.graph
    # Quick filter: each generator image must be conjugate to a single letter,
    # and the letter assignment must itself be a signed graph permutation.
    letter_of = []
    for v in range(gr.n):
        cyc = cyclic_reduce_codes(gr, h.images[v])
        if len(cyc) != 1:
            return False
        letter_of.append(cyc[0])
    gens = [x >> 1 for x in letter_of]
    if sorted(gens) != list(range(gr.n)):
        return False
    for v in range(gr.n):
        for u in gr.adj[v]:
            if gens[u] not in gr.adj[gens[v]]:
                return False
    for cls in classes_up_to(gr, 2):
        if translation_length_codes(gr, h.apply_codes(cls)) != len(cls):
            return False
    return True


def iter_ball_words(graph: DefiningGraph, radius: int, cap: int = 100000):
    """Yield all normal forms of length <= radius in BFS order.

    Raises CapExceeded once more than ``cap`` words have been produced.
    """
    seen = {()}
    frontier: list[Codes] = [()]
    yield ()
    for _ in range(radius):
        nxt = []
        for w in frontier:
            for x in graph.letters():
                nf = normal_codes(graph, w + (x,))
                if len(nf) == len(w) + 1 and nf not in seen:
                    if len(seen) >= cap:
                        raise CapExceeded(f"ball word cap {cap} exceeded")
                    seen.add(nf)
                    nxt.append(nf)
        nxt.sort()
        for w in nxt:
            yield w
        frontier = nxt


def is_inner(auto: Automorphism, radius: int | None = None, cap: int = 100000):
    """Search a common conjugator realizing the automorphism.

    True with certainty when found; False is only certain inside the search
    radius, so a clean miss (or a blown cap) returns UNKNOWN.
    """
    g = auto.graph
    if radius is None:
        radius = max(1, auto.max_image_length())
    targets = tuple(normal_codes(g, auto.images[v]) for v in range(g.n))
    try:
        for c in iter_ball_words(g, radius, cap):
            ci = inverse_codes(c)
            if all(
                normal_codes(g, c + (2 * v,) + ci) == targets[v] for v in range(g.n)
            ):
                return True
    except CapExceeded:
        pass
    return UNKNOWN


def outer_equal(f: Automorphism, g: Automorphism, radius: int | None = None):
    """f, g equal in Out: f^-1 o g inner, by bounded conjugator search."""
    h = compose(f.inverse(), g)
    if h.is_identity():
        return True
    return is_inner(h, radius)


def _bareiss_det(matrix: list[list[int]]) -> int:
    """Fraction-free integer determinant."""
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for r in range(k + 1, n):
                if m[r][k]:
                    m[k], m[r] = m[r], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def _abelianized_block_det(auto: Automorphism, support: frozenset[int]) -> int:
    """Determinant of the exponent-sum matrix of images of Delta restricted
    to Delta coordinates (rows/cols over the support)."""
    idx = sorted(support)
    pos = {v: i for i, v in enumerate(idx)}
    mat = [[0] * len(idx) for _ in idx]
    for v in idx:
        for x in auto.images[v]:
            gx = x >> 1
            if gx in pos:
                mat[pos[v]][pos[gx]] += -1 if x & 1 else 1
    return _bareiss_det(mat)


def _conjugates_into(
    graph: DefiningGraph, images: list[Codes], delta: frozenset[int], radius: int
) -> bool:
    """Whether one conjugator sends every image into A_Delta (support test)."""
    try:
        for c in iter_ball_words(graph, radius):
            ci = inverse_codes(c)
            if all(
                support_codes(reduce_codes(graph, ci + w + c)) <= delta for w in images
            ):
                return True
    except CapExceeded:
        pass
    return False


def preserves_standard_family(
    auto: Automorphism,
    family: list[StandardSubgroup] | tuple[StandardSubgroup, ...],
    radius: int | None = None,
):
    """Whether the automorphism preserves the conjugacy class of each A_Delta.

    True is certified: conjugators found in both directions (images and
    preimages of Delta's generators land in A_Delta) and the abelianized
    Delta-block is unimodular.  False is certified by a cyclic-support or
    determinant obstruction.  Anything else is UNKNOWN at the search radius.
    """
    g = auto.graph
    if radius is None:
        radius = min(6, max(1, auto.max_image_length()))
    all_certified = True
    for sub in family:
        delta = sub.support
        if not delta:
            continue
        directions = (auto, auto.inverse())
        for direction in directions:
            for v in sorted(delta):
                cyc = cyclic_reduce_codes(g, direction.images[v])
                if not support_codes(cyc) <= delta:
                    return False
        if abs(_abelianized_block_det(auto, delta)) != 1:
            return False
        for direction in directions:
            images = [direction.images[v] for v in sorted(delta)]
            if not _conjugates_into(g, images, delta, radius):
                all_certified = False
    return True if all_certified else UNKNOWN
