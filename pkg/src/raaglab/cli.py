"""Command-line front end with deterministic, seedable reports.

Exit codes: 0 success (or "equivalent"), 1 inequivalent, 2 undecided,
64 parse error, 65 cap exceeded, 70 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from dataclasses import dataclass

from .automorphisms import (
    Automorphism,
    compose_all,
    identity_automorphism,
    is_simple,
    make_graph_permutation,
    make_inversion,
    make_partial_conjugation,
    make_transvection,
)
from .cubes import (
    bounded_displacement_witness,
    build_ball,
    median,
    minset,
    minset_distance_check,
)
from .errors import (
    BoundaryClipped,
    CapExceeded,
    DescriptorError,
    GraphError,
    InvariantBreach,
    PartitionError,
    RaagError,
    UNDECIDED,
    WordParseError,
)
from .graph_core import DefiningGraph, StandardSubgroup, load_graph
from .mccool import (
    ConstraintFamily,
    SalvettiState,
    build_auter_embedding,
    equivalent,
    expand_fixed_subgroup,
    minimize,
    state_cap_default,
)
from .partitions import (
    BasedPartition,
    WhiteheadPartition,
    crossing_count,
    enumerate_partitions,
    quadrant_partitions,
    relative_condition,
    validate_based,
    whitehead_automorphism,
)
from .spine import enumerate_simplices, move_graph, verify_changenorm
from .words import CyclicClass, Word, conjugacy_canonical


@dataclass
class RunConfig:
    """Resolved run parameters; a fixed seed yields identical output bytes."""

    graph: DefiningGraph
    fmt: str = "text"
    seed: int = 0
    jobs: int = 1
    tail_max_length: int = 2
    state_cap: int = 100000


class Report:
    """Ordered key/value report; renders as key=value lines or JSON."""

    def __init__(self) -> None:
        self.items: list[tuple[str, object]] = []

    def add(self, key: str, value: object) -> "Report":
        self.items.append((key, value))
        return self

    def extend_list(self, key: str, values) -> "Report":
        for i, v in enumerate(values):
            self.items.append((f"{key}.{i}", v))
        return self

    def emit(self, fmt: str) -> None:
        if fmt == "json":
            print(json.dumps(dict(self.items), ensure_ascii=False))
        else:
            for k, v in self.items:
                print(f"{k}={v}")


# ---------------------------------------------------------------------------
# Parsing helpers


def parse_targets(graph: DefiningGraph, text: str) -> tuple[CyclicClass, ...]:
    parts = [p.strip() for p in text.split(",")]
    return tuple(CyclicClass.parse(graph, p) for p in parts)


def parse_subgroup(graph: DefiningGraph, text: str) -> StandardSubgroup:
    text = text.strip()
    if text.startswith("{") and text.endswith("}"):
        text = text[1:-1]
    names = [t for t in text.replace(",", " ").split() if t]
    return StandardSubgroup.from_names(graph, names)


def _parse_letter_set(graph: DefiningGraph, text: str) -> frozenset[int]:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise WordParseError(f"expected a brace-delimited letter set, got {text!r}")
    inner = text[1:-1].strip()
    if not inner:
        return frozenset()
    return frozenset(graph.parse_letter(t.strip()) for t in inner.split(","))


def parse_partition_spec(graph: DefiningGraph, text: str) -> BasedPartition:
    """`P={a,b} Pstar={a^-1,b^-1,c,c^-1} base=a`; Pstar may be omitted and is
    then inferred as the complement of P and lk(base)."""
    side_p = side_q = base = None
    for token in text.split():
        if token.startswith("P="):
            side_p = _parse_letter_set(graph, token[2:])
        elif token.startswith("Pstar="):
            side_q = _parse_letter_set(graph, token[6:])
        elif token.startswith("base="):
            base = graph.parse_letter(token[5:])
        else:
            raise WordParseError(f"unrecognized partition token {token!r}")
    if side_p is None or base is None:
        raise WordParseError("partition spec needs at least P={...} and base=...")
    link = graph.link_letters(base)
    inferred = frozenset(graph.letters()) - side_p - link
    if side_q is None:
        side_q = inferred
    elif side_q != inferred:
        raise WordParseError("Pstar does not equal the complement of P and lk(base)")
    part = WhiteheadPartition.make(graph, side_p, side_q, link)
    return BasedPartition(part, base)


def parse_descriptor(graph: DefiningGraph, text: str) -> Automorphism:
    tokens = text.split()
    if not tokens:
        raise WordParseError("empty descriptor")
    kind = tokens[0]
    if kind == "inv" and len(tokens) == 2:
        return make_inversion(graph, _vertex(graph, tokens[1]))
    if kind == "perm":
        mapping = {}
        for pair in tokens[1:]:
            if ":" not in pair:
                raise WordParseError(f"perm entries look like v:w, got {pair!r}")
            src, dst = pair.split(":", 1)
            mapping[2 * _vertex(graph, src)] = graph.parse_letter(dst)
        return make_graph_permutation(graph, mapping)
    if kind in ("fold", "twist") and len(tokens) == 3:
        auto = make_transvection(graph, _vertex(graph, tokens[1]), _vertex(graph, tokens[2]))
        made = auto.factorization[0].kind
        if made != kind:
            raise DescriptorError(f"{kind} requested but the pair makes a {made}")
        return auto
    if kind == "pconj" and len(tokens) == 3:
        moved_text = tokens[2]
        if not (moved_text.startswith("{") and moved_text.endswith("}")):
            raise WordParseError("pconj moved set must be brace-delimited")
        moved = frozenset(
            _vertex(graph, t.strip()) for t in moved_text[1:-1].split(",") if t.strip()
        )
        return make_partial_conjugation(graph, _vertex(graph, tokens[1]), moved)
    if kind == "whp":
        bp = parse_partition_spec(graph, " ".join(tokens[1:]))
        return whitehead_automorphism(bp)
    raise WordParseError(f"unrecognized descriptor {text!r}")


def _vertex(graph: DefiningGraph, name: str) -> int:
    if name not in graph.index:
        raise GraphError(f"unknown generator {name!r}")
    return graph.index[name]


def parse_descriptor_sequence(graph: DefiningGraph, text: str) -> Automorphism:
    parts = [p.strip() for p in text.split(";") if p.strip()]
    if not parts:
        return identity_automorphism(graph)
    return compose_all([parse_descriptor(graph, p) for p in parts], graph)


# ---------------------------------------------------------------------------
# Subcommand handlers (each returns an exit code)


def _family(graph: DefiningGraph, args) -> ConstraintFamily:
    stabilized = tuple(
        parse_subgroup(graph, s) for s in (getattr(args, "stabilize", None) or [])
    )
    fixed = tuple(
        CyclicClass.parse(graph, w) for w in (getattr(args, "fix", None) or [])
    )
    tail = getattr(args, "tail_len", 2)
    return ConstraintFamily(graph, stabilized, fixed, tail)


def cmd_reduce(graph, args, rep: Report) -> int:
    w = Word.parse(graph, args.word).normal()
    rep.add("word", str(w)).add("length", len(w))
    return 0


def cmd_cyclic(graph, args, rep: Report) -> int:
    w = Word.parse(graph, args.word).cyclic_reduced()
    rep.add("word", str(w)).add("length", len(w))
    return 0


def cmd_length(graph, args, rep: Report) -> int:
    rep.add("translation_length", Word.parse(graph, args.word).translation_length())
    return 0


def cmd_conj(graph, args, rep: Report) -> int:
    left = Word.parse(graph, args.left)
    right = Word.parse(graph, args.right)
    cl, cr = conjugacy_canonical(left), conjugacy_canonical(right)
    rep.add("canonical_left", str(cl)).add("canonical_right", str(cr))
    rep.add("conjugate", cl.codes == cr.codes)
    return 0


def cmd_auto(graph, args, rep: Report) -> int:
    if args.action == "apply":
        auto = parse_descriptor_sequence(graph, args.auto)
        rep.add("image", str(auto.apply(Word.parse(graph, args.word))))
    elif args.action == "compose":
        f = parse_descriptor_sequence(graph, args.auto)
        g = parse_descriptor_sequence(graph, args.with_auto)
        from .automorphisms import compose

        h = compose(f, g)
        for v in range(graph.n):
            rep.add(f"image.{graph.vertices[v]}", str(Word(graph, h.images[v])))
    else:  # check
        auto = parse_descriptor_sequence(graph, args.auto)
        for v in range(graph.n):
            rep.add(f"image.{graph.vertices[v]}", str(Word(graph, auto.images[v])))
        rep.add("inverse_certified", True)
        rep.add("simple", str(is_simple(auto)))
    return 0


def cmd_wh(graph, args, rep: Report) -> int:
    if args.action == "enumerate":
        parts = enumerate_partitions(graph)
        rep.add("count", len(parts))
        for i, p in enumerate(parts):
            bases = ",".join(graph.letter_name(b) for b in p.valid_basepoints())
            rep.add(f"partition.{i}", f"{p} bases={{{bases}}}")
        return 0
    if args.action == "validate":
        try:
            bp = parse_partition_spec(graph, args.partition)
            rep.add("valid", True).add("partition", str(bp))
        except (PartitionError, WordParseError) as exc:
            rep.add("valid", False).add("violations", str(exc))
        return 0
    bp = parse_partition_spec(graph, args.partition)
    if args.action == "apply":
        auto = whitehead_automorphism(bp)
        rep.add("image", str(auto.apply(Word.parse(graph, args.word))))
    elif args.action == "quadrants":
        other = parse_partition_spec(graph, args.other)
        outs = quadrant_partitions(bp, other)
        for i, out in enumerate(outs):
            rep.add(f"quadrant.{i}", str(out))
    elif args.action == "relcond":
        family = _family(graph, args)
        rep.add("relative_condition", relative_condition(bp, family.stabilized))
    elif args.action == "cross":
        cls = CyclicClass.parse(graph, args.word)
        rep.add("crossings", crossing_count(bp.partition, cls))
    return 0


def cmd_minimize(graph, args, rep: Report) -> int:
    family = _family(graph, args)
    targets = parse_targets(graph, args.targets)
    state, trace = minimize(targets, family)
    rep.add("minimal_head", ",".join(map(str, state.head())))
    rep.extend_list("trace", [str(bp) for bp in trace])
    rep.extend_list("pulled", [str(c) for c in state.pulled_classes()])
    return 0


def cmd_equivalent(graph, args, rep: Report) -> int:
    family = _family(graph, args)
    left = parse_targets(graph, args.left)
    right = parse_targets(graph, args.right)
    outcome = equivalent(left, right, family, state_cap=args.state_cap)
    rep.add("status", outcome.status)
    rep.add("minimal_head_left", ",".join(map(str, outcome.minimal_head_left)))
    rep.add("minimal_head_right", ",".join(map(str, outcome.minimal_head_right)))
    if outcome.norm_window_note:
        rep.add("note", outcome.norm_window_note)
    if outcome.certificate is not None:
        cert = outcome.certificate
        for v in range(graph.n):
            rep.add(f"certificate.{graph.vertices[v]}", str(Word(graph, cert.images[v])))
    if outcome.status == "equivalent":
        return 0
    if outcome.status == UNDECIDED:
        return 2
    return 1


def cmd_expand_fixed(graph, args, rep: Report) -> int:
    gens = [Word.parse(graph, t.strip()) for t in args.generators.split(",")]
    classes = expand_fixed_subgroup(gens)
    rep.extend_list("class", [str(c) for c in classes])
    return 0


def cmd_auter_embed(graph, args, rep: Report) -> int:
    big, family = build_auter_embedding(graph)
    rep.add("vertices", " ".join(big.vertices))
    edges = sorted(
        f"{big.vertices[i]}-{big.vertices[j]}" for i in range(big.n) for j in big.adj[i] if i < j
    )
    rep.add("edges", " ".join(edges))
    rep.add("stabilized", str(family.stabilized[0]))
    rep.add("fixed", str(family.fixed_classes[0]))
    return 0


def cmd_cube(graph, args, rep: Report) -> int:
    if args.action == "ball":
        ball = build_ball(graph, args.radius)
        for k, v in ball.stats().items():
            rep.add(k, v)
        if args.dump:
            tables = {
                "vertices": [str(Word(graph, w)) for w in ball.vertices],
                "edges": [
                    [str(Word(graph, ball.vertices[a])), str(Word(graph, ball.vertices[b])), graph.vertices[v]]
                    for a, b, v in ball.edges
                ],
                "hyperplane_of_edge": list(ball.hyperplane_of_edge),
            }
            with open(args.dump, "w", encoding="utf-8") as fh:
                json.dump(tables, fh, indent=1, sort_keys=True)
            rep.add("dump", args.dump)
        return 0
    ball = build_ball(graph, args.radius)
    if args.action == "median":
        x = Word.parse(graph, args.x).normal().codes
        y = Word.parse(graph, args.y).normal().codes
        z = Word.parse(graph, args.z).normal().codes
        rep.add("median", str(Word(graph, median(ball, x, y, z))))
    elif args.action == "minset":
        ms = minset(ball, Word.parse(graph, args.g))
        rep.add("size", len(ms))
        rep.extend_list("vertex", [str(Word(graph, w)) for w in ms.members])
    elif args.action == "distcheck":
        dist, bound, ok = minset_distance_check(
            ball, Word.parse(graph, args.g), Word.parse(graph, args.h)
        )
        rep.add("distance", dist).add("bound", bound).add("ok", ok)
    elif args.action == "witness":
        elements = [Word.parse(graph, t.strip()) for t in args.elements.split(",")]
        x, bound = bounded_displacement_witness(ball, elements)
        rep.add("witness", str(Word(graph, x))).add("bound", bound)
    return 0


def cmd_spine(graph, args, rep: Report) -> int:
    if args.action == "simplices":
        simplices = enumerate_simplices(graph, args.max_size)
        by_size: dict[int, int] = {}
        for s in simplices:
            by_size[len(s)] = by_size.get(len(s), 0) + 1
        rep.add("count", len(simplices))
        for size in sorted(by_size):
            rep.add(f"size.{size}", by_size[size])
        return 0
    family = _family(graph, args)
    if args.action == "movegraph":
        targets = parse_targets(graph, args.targets)
        targets = family.extend_targets(targets)
        bound = tuple(int(t) for t in args.bound.split(","))
        if len(bound) < len(targets):
            bound = bound + tuple(len(c.codes) for c in targets[len(bound):])
        graph_obj = move_graph(targets, family, bound, state_cap=args.state_cap)
        for k, v in graph_obj.stats().items():
            rep.add(k, v)
        if args.export:
            payload = {
                "nodes": [
                    {"head": list(n.head), "in_SG": n.in_sg} for n in graph_obj.nodes
                ],
                "edges": [
                    {"from": a, "to": b, "move": str(bp)} for a, b, bp in graph_obj.edges
                ],
            }
            with open(args.export, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=1, sort_keys=True)
            rep.add("export", args.export)
        return 0
    # changenorm
    targets = parse_targets(graph, args.targets)
    state = SalvettiState.initial(graph, family.extend_targets(targets))
    if args.partition:
        bp = parse_partition_spec(graph, args.partition)
        rep.add("holds", verify_changenorm(state, bp))
        return 0
    rng = random.Random(args.seed)
    from .partitions import enumerate_based_partitions

    bps = enumerate_based_partitions(graph)
    if not bps:
        rep.add("samples", 0).add("failures", 0)
        return 0
    failures = 0
    for _ in range(args.samples):
        bp = bps[rng.randrange(len(bps))]
        if not verify_changenorm(state, bp):
            failures += 1
        state = state.move(bp)
    rep.add("samples", args.samples).add("failures", failures)
    return 0


# ---------------------------------------------------------------------------
# Wiring


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--graph", required=True, help="graph file (vertices:/edge: lines)")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--state-cap", type=int, default=None)


def _add_family(p: argparse.ArgumentParser) -> None:
    p.add_argument("--stabilize", action="append", help="standard subgroup {a,b}; repeatable")
    p.add_argument("--fix", action="append", help="pinned conjugacy class word; repeatable")
    p.add_argument("--tail-len", type=int, default=2)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="raag", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce");  _add_common(p); p.add_argument("--word", required=True)
    p = sub.add_parser("cyclic");  _add_common(p); p.add_argument("--word", required=True)
    p = sub.add_parser("length");  _add_common(p); p.add_argument("--word", required=True)
    p = sub.add_parser("conj");    _add_common(p)
    p.add_argument("--left", required=True); p.add_argument("--right", required=True)

    p = sub.add_parser("auto"); _add_common(p)
    p.add_argument("action", choices=("apply", "compose", "check"))
    p.add_argument(
        "--auto",
        required=True,
        help="';'-separated descriptors in trace order (rightmost acts first on words)",
    )
    p.add_argument("--with-auto", dest="with_auto", help="second sequence for compose")
    p.add_argument("--word", help="word for apply")

    p = sub.add_parser("wh"); _add_common(p); _add_family(p)
    p.add_argument("action", choices=("enumerate", "validate", "apply", "quadrants", "relcond", "cross"))
    p.add_argument("--partition", help="P={...} [Pstar={...}] base=x")
    p.add_argument("--other", help="second partition for quadrants")
    p.add_argument("--word", help="word (apply/cross)")

    p = sub.add_parser("minimize"); _add_common(p); _add_family(p)
    p.add_argument("--targets", required=True, help="comma-separated words")

    p = sub.add_parser("equivalent"); _add_common(p); _add_family(p)
    p.add_argument("--left", required=True); p.add_argument("--right", required=True)

    p = sub.add_parser("expand-fixed"); _add_common(p)
    p.add_argument("--generators", required=True, help="comma-separated words")

    p = sub.add_parser("auter-embed"); _add_common(p)

    p = sub.add_parser("cube"); _add_common(p)
    p.add_argument("action", choices=("ball", "median", "minset", "distcheck", "witness"))
    p.add_argument("--radius", type=int, default=4)
    p.add_argument("--stats", action="store_true")
    p.add_argument("--dump", help="JSON dump path for ball tables")
    p.add_argument("--x"); p.add_argument("--y"); p.add_argument("--z")
    p.add_argument("--g"); p.add_argument("--h")
    p.add_argument("--elements", help="comma-separated words")

    p = sub.add_parser("spine"); _add_common(p); _add_family(p)
    p.add_argument("action", choices=("simplices", "movegraph", "changenorm"))
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--targets", help="comma-separated words")
    p.add_argument("--bound", default="", help="comma-separated head bound")
    p.add_argument("--export", help="JSON export path")
    p.add_argument("--partition", help="single based partition to check")
    p.add_argument("--samples", type=int, default=100)
    return ap


HANDLERS = {
    "reduce": cmd_reduce,
    "cyclic": cmd_cyclic,
    "length": cmd_length,
    "conj": cmd_conj,
    "auto": cmd_auto,
    "wh": cmd_wh,
    "minimize": cmd_minimize,
    "equivalent": cmd_equivalent,
    "expand-fixed": cmd_expand_fixed,
    "auter-embed": cmd_auter_embed,
    "cube": cmd_cube,
    "spine": cmd_spine,
}


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 64 if exc.code not in (0, None) else 0
    if args.state_cap is None:
        args.state_cap = state_cap_default()
    else:
        os.environ["RAAG_STATE_CAP"] = str(args.state_cap)
    rep = Report()
    try:
        graph = load_graph(args.graph)
        code = HANDLERS[args.command](graph, args, rep)
    except (WordParseError, GraphError, DescriptorError, PartitionError) as exc:
        print(f"error={exc}", file=sys.stderr)
        return 64
    except (CapExceeded, BoundaryClipped) as exc:
        print(f"error={exc}", file=sys.stderr)
        return 65
    except InvariantBreach as exc:
        print(f"error={exc}", file=sys.stderr)
        print(f"repro=argv:{argv if argv is not None else sys.argv[1:]}", file=sys.stderr)
        return 70
    except RaagError as exc:
        print(f"error={exc}", file=sys.stderr)
        return 64
    rep.emit(args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
