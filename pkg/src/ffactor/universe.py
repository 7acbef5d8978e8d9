"""Instance universes for the invariant suites.

The exhaustive layer walks every labeled graph up to a vertex bound and
every admissible capacity map on it, in a fixed canonical order.  The
seeded layers draw random instances reproducibly from a caller-supplied
seed; identical seeds give identical instances, independent of platform.
"""

from __future__ import annotations

import random
from itertools import combinations, product
from typing import Iterator

from .core import FactorProblem, build_problem


def exhaustive_instances(
    max_vertices: int = 4,
) -> Iterator[tuple[str, FactorProblem]]:
    """Every labeled instance with at most ``max_vertices`` vertices: all
    edge subsets of the complete graph crossed with all capacity maps that
    stay within vertex degrees.  Labels are stable across runs."""
    for n in range(1, max_vertices + 1):
        vertices = [f"v{i}" for i in range(n)]
        pairs = list(combinations(range(n), 2))
        for edge_mask in range(1 << len(pairs)):
            chosen = [pairs[k] for k in range(len(pairs)) if edge_mask >> k & 1]
            edges = [(vertices[i], vertices[j]) for i, j in chosen]
            degs = [0] * n
            for i, j in chosen:
                degs[i] += 1
                degs[j] += 1
            for caps in product(*(range(d + 1) for d in degs)):
                label = f"x{n}:{edge_mask}:" + ".".join(map(str, caps))
                yield label, build_problem(
                    vertices, edges, dict(zip(vertices, caps))
                )


def sample_instance(
    rng: random.Random, n: int, density: float, max_edges: int | None = None
) -> FactorProblem:
    """One random admissible instance: edges drawn independently with the
    given density, capacities uniform between zero and the vertex degree."""
    vertices = [f"v{i}" for i in range(n)]
    while True:
        edges = [
            (vertices[i], vertices[j])
            for i, j in combinations(range(n), 2)
            if rng.random() < density
        ]
        if max_edges is not None and len(edges) > max_edges:
            continue
        degs = {v: 0 for v in vertices}
        for u, v in edges:
            degs[u] += 1
            degs[v] += 1
        f = {v: rng.randint(0, degs[v]) for v in vertices}
        return build_problem(vertices, edges, f)


def seeded_instances(
    seed: int,
    n: int,
    count: int,
    densities: tuple[float, ...] = (0.3, 0.5, 0.7),
    max_edges: int | None = None,
    label_prefix: str = "r",
) -> list[tuple[str, FactorProblem]]:
    """A reproducible batch of random instances on ``n`` vertices, cycling
    through the density list."""
    rng = random.Random(f"{seed}:{label_prefix}:{n}")
    out = []
    for i in range(count):
        density = densities[i % len(densities)]
        problem = sample_instance(rng, n, density, max_edges=max_edges)
        out.append((f"{label_prefix}{n}:{i}", problem))
    return out
