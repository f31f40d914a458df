from __future__ import annotations

import itertools

import pytest

from raaglab.graph_core import DefiningGraph


@pytest.fixture(scope="session")
def f2() -> DefiningGraph:
    return DefiningGraph(["a", "b"])


@pytest.fixture(scope="session")
def f3() -> DefiningGraph:
    return DefiningGraph(["a", "b", "c"])


@pytest.fixture(scope="session")
def z2() -> DefiningGraph:
    return DefiningGraph(["a", "b"], [("a", "b")])


@pytest.fixture(scope="session")
def path3() -> DefiningGraph:
    return DefiningGraph(["a", "b", "c"], [("a", "b"), ("b", "c")])


@pytest.fixture(scope="session")
def square4() -> DefiningGraph:
    return DefiningGraph(["a", "b", "c", "d"], [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


def all_graphs_up_to(max_vertices: int) -> list[DefiningGraph]:
    """Every labeled simple graph on 1..max_vertices vertices."""
    names = ["a", "b", "c", "d", "e"]
    graphs = []
    for n in range(1, max_vertices + 1):
        verts = names[:n]
        pairs = list(itertools.combinations(verts, 2))
        for picks in itertools.product((False, True), repeat=len(pairs)):
            edges = [p for p, keep in zip(pairs, picks) if keep]
            graphs.append(DefiningGraph(verts, edges))
    return graphs
