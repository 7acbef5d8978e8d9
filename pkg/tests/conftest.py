from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import settings, strategies as st

from ffactor import build_problem
from ffactor.core import FactorProblem

settings.register_profile("suite", deadline=None, max_examples=60)
settings.load_profile("suite")


@st.composite
def problems(draw, min_vertices: int = 1, max_vertices: int = 5) -> FactorProblem:
    """Random admissible instances: any edge subset of a small complete
    graph, capacities anywhere between zero and the vertex degree."""
    n = draw(st.integers(min_vertices, max_vertices))
    vertices = [f"v{i}" for i in range(n)]
    pairs = list(combinations(range(n), 2))
    flags = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [
        (vertices[i], vertices[j]) for (i, j), flag in zip(pairs, flags) if flag
    ]
    degrees = {v: 0 for v in vertices}
    for u, v in edges:
        degrees[u] += 1
        degrees[v] += 1
    f = {v: draw(st.integers(0, degrees[v])) for v in vertices}
    return build_problem(vertices, edges, f)


@st.composite
def problems_with_factor(draw, max_vertices: int = 5):
    """An instance together with one of its factors, drawn uniformly from
    the full enumeration (kept feasible by the vertex bound)."""
    from ffactor.properties import enumerate_factors

    problem = draw(problems(max_vertices=max_vertices))
    factors = list(enumerate_factors(problem))
    factor = draw(st.sampled_from(factors))
    return problem, factor


@pytest.fixture
def k2():
    return build_problem(["a", "b"], [("a", "b")], {"a": 1, "b": 1})


@pytest.fixture
def path3():
    return build_problem(
        ["a", "b", "c"], [("a", "b"), ("b", "c")], {"a": 1, "b": 1, "c": 1}
    )


@pytest.fixture
def triangle1():
    return build_problem(
        ["a", "b", "c"],
        [("a", "b"), ("b", "c"), ("a", "c")],
        {"a": 1, "b": 1, "c": 1},
    )


@pytest.fixture
def triangle2():
    return build_problem(
        ["a", "b", "c"],
        [("a", "b"), ("b", "c"), ("a", "c")],
        {"a": 2, "b": 2, "c": 2},
    )


@pytest.fixture
def c4():
    return build_problem(
        ["v0", "v1", "v2", "v3"],
        [("v0", "v1"), ("v1", "v2"), ("v2", "v3"), ("v3", "v0")],
        {"v0": 1, "v1": 1, "v2": 1, "v3": 1},
    )
