"""Augmenting trails and the augmentation solver.

A trail is a vertex sequence whose consecutive pairs are edges, no edge
repeated (vertices may repeat).  Relative to a factor F, a trail augments
when it starts at a deficient vertex, alternates non-F/F/non-F/..., has
even length, and ends either at a different deficient vertex or back at the
start with two units of slack.  Flipping (symmetric difference with the
trail's edges) then yields a factor with total degree raised by exactly 2.

If some factor leaves a deficient vertex with no augmenting trail, no
perfect factor exists at all; the solver uses that as its sound early exit.

Trail search is exhaustive depth-first over edge-distinct sequences with an
explicit used-edge set.  That is exponential in the worst case and accepted
at this scale; a polynomial matching reduction is deliberately out of scope.
"""

from __future__ import annotations

from typing import Sequence

from .core import (
    Edge,
    Factor,
    FactorProblem,
    Graph,
    factor_to_mask,
    mask_to_factor,
    validate_factor,
)
from .errors import BudgetExceeded, NotAugmenting, NotDeficient

DEFAULT_MAX_FACTORS = 1_000_000


def is_trail(graph: Graph, vertices: Sequence[str]) -> bool:
    """True iff the sequence is a trail of the graph: nonempty, consecutive
    vertices adjacent, and no edge used twice."""
    if len(vertices) < 1:
        return False
    if any(not graph.has_vertex(v) for v in vertices):
        return False
    seen: set[Edge] = set()
    for a, b in zip(vertices, vertices[1:]):
        if a == b or not graph.has_edge(a, b):
            return False
        key = graph.edge_key(a, b)
        if key in seen:
            return False
        seen.add(key)
    return True


def trail_edges(graph: Graph, vertices: Sequence[str]) -> tuple[Edge, ...]:
    return tuple(graph.edge_key(a, b) for a, b in zip(vertices, vertices[1:]))


def is_augmenting(
    problem: FactorProblem, factor: Factor, trail: Sequence[str]
) -> bool:
    """Check every augmenting clause; any malformation simply yields False."""
    graph = problem.graph
    if not is_trail(graph, trail):
        return False
    k = len(trail)
    if k <= 1 or k % 2 != 0:
        return False
    degrees = {v: 0 for v in graph.vertices}
    for u, v in factor:
        degrees[u] += 1
        degrees[v] += 1
    # edges alternate: the i-th edge belongs to the factor exactly when i is even
    for i in range(1, k):
        in_factor = graph.edge_key(trail[i - 1], trail[i]) in factor
        if in_factor != (i % 2 == 0):
            return False
    v0, vlast = trail[0], trail[-1]
    if not degrees[v0] < problem.f[v0]:
        return False
    if v0 != vlast:
        return degrees[vlast] < problem.f[vlast]
    return degrees[vlast] + 1 < problem.f[vlast]


def flip(problem: FactorProblem, factor: Factor, trail: Sequence[str]) -> Factor:
    """Symmetric difference of the factor with the trail's edges.  Raises the
    degree at each trail end by one (by two for a closed trail) and leaves
    every interior visit's net degree unchanged."""
    if not is_augmenting(problem, factor, trail):
        raise NotAugmenting(f"trail {tuple(trail)!r} does not augment this factor")
    return frozenset(factor ^ set(trail_edges(problem.graph, trail)))


def _find_trail_indices(
    problem: FactorProblem,
    factor_mask: int,
    degrees: list[int],
    start: int,
) -> list[int] | None:
    """Shortest, then lexicographically least augmenting trail from start, as
    vertex indices.  Iterative deepening over even lengths keeps the
    depth-first neighbor order canonical at every length."""
    caps = problem._caps
    incident = problem._incident
    m = len(problem.graph.sorted_edges)

    path = [start]
    used = 0

    def extend(target_len: int) -> bool:
        position = len(path)
        if position == target_len:
            last = path[-1]
            if last != start:
                return degrees[last] < caps[last]
            return degrees[last] + 1 < caps[last]
        nonlocal used
        want_factor_edge = position % 2 == 0
        for y, k in incident[path[-1]]:
            if used >> k & 1:
                continue
            if bool(factor_mask >> k & 1) != want_factor_edge:
                continue
            path.append(y)
            used |= 1 << k
            if extend(target_len):
                return True
            used &= ~(1 << k)
            path.pop()
        return False

    for target_len in range(2, m + 2, 2):
        if extend(target_len):
            return list(path)
    return None


def find_augmenting_trail(
    problem: FactorProblem, factor: Factor, start: str
) -> tuple[str, ...] | None:
    """Search for an augmenting trail from a deficient vertex.

    Returns the shortest trail, breaking ties toward the lexicographically
    least sequence of canonical vertex indices, or None when the exhaustive
    search finds nothing.
    """
    validate_factor(problem, factor)
    graph = problem.graph
    degrees = [0] * len(graph.vertices)
    for u, v in factor:
        degrees[graph._index[u]] += 1
        degrees[graph._index[v]] += 1
    x = graph.index(start)
    if degrees[x] >= problem._caps[x]:
        raise NotDeficient(f"{start!r} is already saturated")
    found = _find_trail_indices(problem, factor_to_mask(problem, factor), degrees, x)
    if found is None:
        return None
    return tuple(graph.vertices[i] for i in found)


def solve_by_augmentation(problem: FactorProblem) -> Factor | None:
    """Grow a perfect factor by repeated augmentation, or report that none
    exists.

    Starting from the empty factor, repeatedly take the least-index deficient
    vertex and flip along the canonical augmenting trail from it.  Every flip
    raises the total degree by 2, so the loop ends.  If some deficient vertex
    admits no trail, no perfect factor exists and the search stops early.
    """
    graph = problem.graph
    caps = problem._caps
    n = len(graph.vertices)
    edge_id = {}
    for k, (u, v) in enumerate(graph.sorted_edges):
        edge_id[(graph._index[u], graph._index[v])] = k
    factor_mask = 0
    degrees = [0] * n
    while True:
        deficient = next((x for x in range(n) if degrees[x] < caps[x]), None)
        if deficient is None:
            return mask_to_factor(problem, factor_mask)
        found = _find_trail_indices(problem, factor_mask, degrees, deficient)
        if found is None:
            return None
        for a, b in zip(found, found[1:]):
            u, v = (a, b) if a < b else (b, a)
            k = edge_id[(u, v)]
            if factor_mask >> k & 1:
                degrees[u] -= 1
                degrees[v] -= 1
            else:
                degrees[u] += 1
                degrees[v] += 1
            factor_mask ^= 1 << k


def check_p4(
    problem: FactorProblem,
    *,
    max_edges: int | None = None,
    max_factors: int | None = None,
) -> bool:
    """True iff every factor leaves every deficient vertex with an augmenting
    trail.  Quantifies over the full factor enumeration, so this is only
    feasible on small instances; the factor-count budget guards the rest."""
    from .properties import iter_factor_masks

    caps = problem._caps
    n = len(problem.graph.vertices)
    graph = problem.graph
    ends = [(graph._index[u], graph._index[v]) for u, v in graph.sorted_edges]
    budget = DEFAULT_MAX_FACTORS if max_factors is None else max_factors
    count = 0
    for mask in iter_factor_masks(problem, max_edges=max_edges):
        count += 1
        if count > budget:
            raise BudgetExceeded("factor-count budget exhausted during trail check")
        degrees = [0] * n
        for k, (iu, iv) in enumerate(ends):
            if mask >> k & 1:
                degrees[iu] += 1
                degrees[iv] += 1
        for x in range(n):
            if degrees[x] < caps[x]:
                if _find_trail_indices(problem, mask, degrees, x) is None:
                    return False
    return True
