"""Words over the signed alphabet: normal forms, cyclic reduction, conjugacy.

All algorithms work on tuples of letter codes (see graph_core). A word is
reduced when no pair x, x^-1 can be brought together by swaps of adjacent
commuting letters; reduced words of one element differ exactly by such swaps,
so the greedy leftmost-lowest spelling of the swap class is a normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import CapExceeded, WordParseError
from .graph_core import DefiningGraph, inverse_letter

Codes = tuple[int, ...]

#: Words longer than this are rejected by conjugacy canonicalization; the
#: rotation-and-shuffle closure is exponential and desk scale means short.
CANONICAL_LENGTH_GUARD = 64
CANONICAL_CLASS_CAP = 20000


def inverse_codes(codes: Codes) -> Codes:
    return tuple(x ^ 1 for x in reversed(codes))


def reduce_codes(graph: DefiningGraph, codes: Codes) -> Codes:
    """A minimal-length representative, via stack cancellation.

    Scanning right-to-left from each new letter: cancel against the first
    x^-1 reachable through commuting letters, otherwise push.
    """
    out: list[int] = []
    commute = graph.letters_commute
    for x in codes:
        xi = x ^ 1
        k = len(out) - 1
        while k >= 0:
            y = out[k]
            if y == xi:
                del out[k]
                break
            if not commute(y, x):
                out.append(x)
                break
            k -= 1
        else:
            out.append(x)
    return tuple(out)


def lexnf_codes(graph: DefiningGraph, codes: Codes) -> Codes:
    """Least spelling of the commuting-swap class of a reduced word.

    Greedy: repeatedly extract the smallest letter whose whole prefix
    commutes with it.  Canonical on swap classes (unlike adjacent-transposition
    bubbling, which has spurious fixed points on e.g. path graphs).
    """
    noncomm = graph.noncommute_mask
    work = list(codes)
    out: list[int] = []
    while work:
        seen = 0
        best = -1
        best_i = -1
        for i, x in enumerate(work):
            if seen & noncomm[x >> 1] == 0 and (best_i < 0 or x < best):
                best, best_i = x, i
            seen |= 1 << (x >> 1)
        out.append(best)
        del work[best_i]
    return tuple(out)


def normal_codes(graph: DefiningGraph, codes: Codes) -> Codes:
    return lexnf_codes(graph, reduce_codes(graph, codes))


def _frontable_positions(graph: DefiningGraph, codes: Codes) -> list[int]:
    """Positions whose letter can be shuffled to the front."""
    noncomm = graph.noncommute_mask
    seen = 0
    res = []
    for i, x in enumerate(codes):
        if seen & noncomm[x >> 1] == 0:
            res.append(i)
        seen |= 1 << (x >> 1)
    return res


def cyclic_reduce_codes(graph: DefiningGraph, codes: Codes) -> Codes:
    """A cyclically reduced word conjugate to the input, in normal form.

    After reducing, repeatedly strip a letter that shuffles to the front
    while its inverse shuffles to the back, conjugating both away.
    """
    w = list(reduce_codes(graph, codes))
    noncomm = graph.noncommute_mask
    changed = True
    while changed:
        changed = False
        seen = 0
        for i, x in enumerate(w):
            if seen & noncomm[x >> 1] == 0:
                # x reaches the front; look for its inverse reaching the back.
                xi = x ^ 1
                tail_seen = 0
                for j in range(len(w) - 1, i, -1):
                    y = w[j]
                    if y == xi and tail_seen & noncomm[xi >> 1] == 0:
                        del w[j]
                        del w[i]
                        w = list(reduce_codes(graph, tuple(w)))
                        changed = True
                        break
                    tail_seen |= 1 << (y >> 1)
                if changed:
                    break
            seen |= 1 << (x >> 1)
    return lexnf_codes(graph, tuple(w))


def translation_length_codes(graph: DefiningGraph, codes: Codes) -> int:
    return len(cyclic_reduce_codes(graph, codes))


def support_codes(codes: Codes) -> frozenset[int]:
    """Generators appearing in the word (spelling-invariant once reduced)."""
    return frozenset(x >> 1 for x in codes)


def conjugacy_canonical_codes(graph: DefiningGraph, codes: Codes) -> Codes:
    """Least word among all rotations of all swap-equivalent cyclic spellings.

    Two words are conjugate iff their canonicals agree.  Walks the cyclic
    spellings at the level of swap classes: rotating any frontable letter to
    the back reaches every class of the rotation-and-shuffle closure.
    """
    start = cyclic_reduce_codes(graph, codes)
    if not start:
        return ()
    if len(start) > CANONICAL_LENGTH_GUARD:
        raise CapExceeded(
            f"conjugacy canonicalization guard: length {len(start)} > {CANONICAL_LENGTH_GUARD}"
        )
    seen = {start}
    stack = [start]
    best = start
    while stack:
        t = stack.pop()
        for i in _frontable_positions(graph, t):
            rotated = lexnf_codes(graph, t[:i] + t[i + 1:] + (t[i],))
            if rotated not in seen:
                if len(seen) >= CANONICAL_CLASS_CAP:
                    raise CapExceeded("conjugacy canonicalization class cap hit")
                seen.add(rotated)
                stack.append(rotated)
                if rotated < best:
                    best = rotated
    return best


def coset_min_codes(graph: DefiningGraph, codes: Codes, subgens: frozenset[int]) -> Codes:
    """Gate of the coset g*<A_W> nearest the identity, W = ``subgens``.

    Strips trailing letters of W-generators that shuffle to the back; the
    result is the unique minimal-length coset representative.
    """
    w = list(reduce_codes(graph, codes))
    noncomm = graph.noncommute_mask
    changed = True
    while changed:
        changed = False
        tail_seen = 0
        for j in range(len(w) - 1, -1, -1):
            y = w[j]
            if (y >> 1) in subgens and tail_seen & noncomm[y >> 1] == 0:
                del w[j]
                changed = True
                break
            tail_seen |= 1 << (y >> 1)
    return lexnf_codes(graph, tuple(w))


# ---------------------------------------------------------------------------
# Public wrappers


@dataclass(frozen=True)
class Word:
    """A word in the standard generators and their inverses."""

    graph: DefiningGraph
    codes: Codes

    @classmethod
    def parse(cls, graph: DefiningGraph, text: str) -> "Word":
        tokens = text.split()
        return cls(graph, tuple(graph.parse_letter(t) for t in tokens))

    @classmethod
    def identity(cls, graph: DefiningGraph) -> "Word":
        return cls(graph, ())

    def __len__(self) -> int:
        return len(self.codes)

    def __str__(self) -> str:
        return " ".join(self.graph.letter_name(x) for x in self.codes) if self.codes else ""

    def concat(self, other: "Word") -> "Word":
        self._check(other)
        return Word(self.graph, self.codes + other.codes)

    def __mul__(self, other: "Word") -> "Word":
        return self.concat(other)

    def inverse(self) -> "Word":
        return Word(self.graph, inverse_codes(self.codes))

    def reduced(self) -> "Word":
        return Word(self.graph, reduce_codes(self.graph, self.codes))

    def normal(self) -> "Word":
        return Word(self.graph, normal_codes(self.graph, self.codes))

    def cyclic_reduced(self) -> "Word":
        return Word(self.graph, cyclic_reduce_codes(self.graph, self.codes))

    def translation_length(self) -> int:
        return translation_length_codes(self.graph, self.codes)

    def support(self) -> frozenset[int]:
        return support_codes(reduce_codes(self.graph, self.codes))

    def same_element(self, other: "Word") -> bool:
        self._check(other)
        return normal_codes(self.graph, self.codes) == normal_codes(self.graph, other.codes)

    def _check(self, other: "Word") -> None:
        if self.graph != other.graph:
            raise WordParseError("words over different defining graphs")


def reduce(w: Word) -> Word:
    return w.reduced()


def cyclic_reduce(w: Word) -> Word:
    return w.cyclic_reduced()


def translation_length(w: Word) -> int:
    return w.translation_length()


def support(w: Word) -> frozenset[int]:
    return w.support()


@dataclass(frozen=True)
class CyclicClass:
    """A conjugacy class, held by its canonical cyclically reduced word."""

    graph: DefiningGraph
    codes: Codes

    @classmethod
    def of(cls, w: Word) -> "CyclicClass":
        return cls(w.graph, conjugacy_canonical_codes(w.graph, w.codes))

    @classmethod
    def parse(cls, graph: DefiningGraph, text: str) -> "CyclicClass":
        return cls.of(Word.parse(graph, text))

    def __post_init__(self) -> None:
        # canonical means: fixed point of canonicalization
        pass

    def __len__(self) -> int:
        return len(self.codes)

    def __str__(self) -> str:
        return " ".join(self.graph.letter_name(x) for x in self.codes) if self.codes else ""

    def word(self) -> Word:
        return Word(self.graph, self.codes)

    def support(self) -> frozenset[int]:
        return support_codes(self.codes)


def conjugacy_canonical(w: Word) -> CyclicClass:
    return CyclicClass.of(w)


def are_conjugate(w1: Word, w2: Word) -> bool:
    if w1.graph != w2.graph:
        raise WordParseError("words over different defining graphs")
    return (
        conjugacy_canonical_codes(w1.graph, w1.codes)
        == conjugacy_canonical_codes(w2.graph, w2.codes)
    )


@lru_cache(maxsize=None)
def classes_up_to(graph: DefiningGraph, max_length: int) -> tuple[Codes, ...]:
    """All conjugacy-class canonicals of length <= max_length, ordered.

    Brute force over all words of each exact length; lengths stay tiny
    (this backs the finite norm tail and the length-<=2 permutation test).
    """
    found: set[Codes] = {()}
    letters = list(graph.letters())
    words: list[Codes] = [()]
    for _ in range(max_length):
        words = [w + (x,) for w in words for x in letters]
        for w in words:
            if len(reduce_codes(graph, w)) == len(w):
                found.add(conjugacy_canonical_codes(graph, w))
    return tuple(sorted(found, key=lambda c: (len(c), c)))
