"""Independent reference oracles, deliberately naive.

Expected values in the test suite come from these functions, which re-derive
everything straight from the definitions: powerset filtering over all edge
subsets and a plain unmemoized recursion for obstruction ranks.  They share
no search machinery with the package.
"""

from __future__ import annotations

from itertools import combinations

from ffactor.core import Factor, FactorProblem


def all_subsets_lex(count: int) -> list[tuple[int, ...]]:
    """Every subset of range(count) as a sorted id tuple, in lexicographic
    order of those tuples."""
    subsets: list[tuple[int, ...]] = []
    for r in range(count + 1):
        subsets.extend(combinations(range(count), r))
    subsets.sort()
    return subsets


def naive_factors(problem: FactorProblem) -> list[Factor]:
    edges = problem.graph.sorted_edges
    out = []
    for ids in all_subsets_lex(len(edges)):
        chosen = frozenset(edges[i] for i in ids)
        degrees = {v: 0 for v in problem.graph.vertices}
        for u, v in chosen:
            degrees[u] += 1
            degrees[v] += 1
        if all(degrees[v] <= problem.f[v] for v in problem.graph.vertices):
            out.append(chosen)
    return out


def naive_perfect(problem: FactorProblem) -> Factor | None:
    edges = problem.graph.sorted_edges
    for ids in all_subsets_lex(len(edges)):
        chosen = frozenset(edges[i] for i in ids)
        degrees = {v: 0 for v in problem.graph.vertices}
        for u, v in chosen:
            degrees[u] += 1
            degrees[v] += 1
        if all(degrees[v] == problem.f[v] for v in problem.graph.vertices):
            return chosen
    return None


def naive_rank(problem: FactorProblem) -> int | None:
    """Minimal obstruction rank by unmemoized definitional recursion: a
    positive-capacity vertex whose positive-capacity neighbors all lead to
    obstructions witnesses rank 1 + max(sub-ranks) (0 with no such
    neighbors); the instance's rank is the minimum over witnesses."""
    vertices = problem.graph.vertices
    index = {v: i for i, v in enumerate(vertices)}

    def rec(edges: frozenset, caps: dict) -> int | None:
        best = None
        for x in vertices:
            if caps[x] <= 0:
                continue
            targets = []
            for u, v in edges:
                if u == x and caps[v] > 0:
                    targets.append(v)
                elif v == x and caps[u] > 0:
                    targets.append(u)
            if not targets:
                candidate: int | None = 0
            else:
                subranks = []
                for y in targets:
                    key = (x, y) if index[x] < index[y] else (y, x)
                    sub_caps = dict(caps)
                    sub_caps[x] -= 1
                    sub_caps[y] -= 1
                    sub = rec(edges - {key}, sub_caps)
                    if sub is None:
                        subranks = None
                        break
                    subranks.append(sub)
                candidate = None if subranks is None else 1 + max(subranks)
            if candidate is not None and (best is None or candidate < best):
                best = candidate
        return best

    return rec(frozenset(problem.graph.edges), dict(problem.f))
