"""Brute-force oracle, factor enumeration, and the hereditary-property framework.

Four instance properties are implemented behind one dispatch:

  p1  a perfect factor exists (decided by exhaustive subset search)
  p2  the instance is obstruction-free
  p3  some perfect factor is acyclic as a subgraph
  p4  every factor leaves every deficient vertex an augmenting trail

A property is hereditary when any instance satisfying it lets every
positive-capacity vertex consume one incident edge (toward a neighbor with
positive capacity) without losing the property.  ``hereditary_step``
materializes that quantifier for one instance, and ``saturate_finite_set``
chains such steps until a chosen vertex set is fully saturated.

p1, p2, and p4 are hereditary on the instances handled here, so a
counterexample from ``hereditary_step`` signals an implementation bug.  p3
is not known to be hereditary; its step results are measured and reported,
never asserted.

The subset search in this module is the independent oracle that every other
decision procedure in the package is validated against.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, MutableMapping

from .core import (
    Factor,
    FactorProblem,
    canonical_key,
    mask_to_factor,
    remove_edge,
)
from .errors import (
    BudgetExceeded,
    InternalHereditaryFailure,
    MalformedInstance,
    PropertyDoesNotHold,
)
from .obstruction import check_p2
from .trails import check_p4

DEFAULT_MAX_EDGES = 20


class PropertyId(str, Enum):
    P1 = "p1"
    P2 = "p2"
    P3 = "p3"
    P4 = "p4"


@dataclass(frozen=True)
class HereditaryReport:
    """Outcome of one hereditary step over every positive-capacity vertex.

    Each such vertex lands either in ``witnesses`` (mapped to the least-index
    neighbor whose edge can be consumed while keeping the property) or in
    ``counterexamples``.
    """

    property_id: PropertyId
    witnesses: dict[str, str]
    counterexamples: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _edge_budget(problem: FactorProblem, max_edges: int | None) -> None:
    limit = DEFAULT_MAX_EDGES if max_edges is None else max_edges
    m = len(problem.graph.sorted_edges)
    if m > limit:
        raise BudgetExceeded(f"{m} edges exceeds the enumeration cap of {limit}")


def iter_factor_masks(
    problem: FactorProblem, *, max_edges: int | None = None
) -> Iterator[int]:
    """All capacity-respecting edge subsets as bitmasks over the sorted edge
    list, each exactly once, in canonical order: subsets compared as sorted
    edge-id sequences, lexicographically (the empty set first, then every
    extension of a subset before its successors)."""
    _edge_budget(problem, max_edges)
    graph = problem.graph
    caps = problem._caps
    m = len(graph.sorted_edges)
    ends = [(graph._index[u], graph._index[v]) for u, v in graph.sorted_edges]
    degrees = [0] * len(graph.vertices)

    def rec(start: int, mask: int) -> Iterator[int]:
        yield mask
        for k in range(start, m):
            iu, iv = ends[k]
            if degrees[iu] < caps[iu] and degrees[iv] < caps[iv]:
                degrees[iu] += 1
                degrees[iv] += 1
                yield from rec(k + 1, mask | (1 << k))
                degrees[iu] -= 1
                degrees[iv] -= 1

    yield from rec(0, 0)


def enumerate_factors(
    problem: FactorProblem, *, max_edges: int | None = None
) -> Iterator[Factor]:
    """Every factor of the instance, in the canonical subset order of
    ``iter_factor_masks``."""
    for mask in iter_factor_masks(problem, max_edges=max_edges):
        yield mask_to_factor(problem, mask)


def _perfect_masks(
    problem: FactorProblem, *, max_edges: int | None = None
) -> Iterator[int]:
    """Perfect-factor bitmasks in the same canonical order as
    ``iter_factor_masks``.  The subset tree is pruned on one sound bound
    only: a vertex still in need of more edges than remain available to it
    can never be saturated."""
    _edge_budget(problem, max_edges)
    graph = problem.graph
    caps = problem._caps
    m = len(graph.sorted_edges)
    ends = [(graph._index[u], graph._index[v]) for u, v in graph.sorted_edges]
    n = len(graph.vertices)

    # suffix_deg[k][x]: number of edges with id >= k incident to x
    suffix_deg = [[0] * n for _ in range(m + 1)]
    for k in range(m - 1, -1, -1):
        row = suffix_deg[k + 1][:]
        iu, iv = ends[k]
        row[iu] += 1
        row[iv] += 1
        suffix_deg[k] = row

    need = [caps[x] for x in range(n)]
    total_need = sum(need)

    def rec(start: int, mask: int) -> Iterator[int]:
        nonlocal total_need
        if total_need == 0:
            yield mask
            return
        available = suffix_deg[start]
        if any(need[x] > available[x] for x in range(n)):
            return
        for k in range(start, m):
            iu, iv = ends[k]
            if need[iu] > 0 and need[iv] > 0:
                need[iu] -= 1
                need[iv] -= 1
                total_need -= 2
                yield from rec(k + 1, mask | (1 << k))
                need[iu] += 1
                need[iv] += 1
                total_need += 2

    yield from rec(0, 0)


def perfect_factor_bruteforce(
    problem: FactorProblem, *, max_edges: int | None = None
) -> Factor | None:
    """First perfect factor in canonical enumeration order, or None.

    This subset search is the package's independent oracle; it shares no
    machinery with the obstruction recursion or the trail solver.
    """
    mask = next(_perfect_masks(problem, max_edges=max_edges), None)
    if mask is None:
        return None
    return mask_to_factor(problem, mask)


def _mask_is_acyclic(problem: FactorProblem, mask: int) -> bool:
    # union-find over the chosen edges; a join of two already-connected
    # endpoints closes a cycle
    graph = problem.graph
    parent = list(range(len(graph.vertices)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for k, (u, v) in enumerate(graph.sorted_edges):
        if mask >> k & 1:
            ra, rb = find(graph._index[u]), find(graph._index[v])
            if ra == rb:
                return False
            parent[ra] = rb
    return True


def check_property(
    pid: PropertyId,
    problem: FactorProblem,
    *,
    max_edges: int | None = None,
    max_factors: int | None = None,
    node_budget: int | None = None,
    cache: MutableMapping | None = None,
) -> bool:
    """Decide one of the four properties on a finite instance.

    ``cache`` may hold verdicts across calls, keyed by property and canonical
    instance state; sweeps over many overlapping residual instances get most
    of their answers for free that way.
    """
    pid = PropertyId(pid)
    key = None
    if cache is not None:
        key = (pid, canonical_key(problem))
        if key in cache:
            return cache[key]
    if pid is PropertyId.P1:
        verdict = perfect_factor_bruteforce(problem, max_edges=max_edges) is not None
    elif pid is PropertyId.P2:
        verdict = check_p2(problem, node_budget=node_budget)
    elif pid is PropertyId.P3:
        verdict = any(
            _mask_is_acyclic(problem, mask)
            for mask in _perfect_masks(problem, max_edges=max_edges)
        )
    else:
        verdict = check_p4(problem, max_edges=max_edges, max_factors=max_factors)
    if cache is not None:
        cache[key] = verdict
    return verdict


def hereditary_step(
    pid: PropertyId,
    problem: FactorProblem,
    *,
    max_edges: int | None = None,
    max_factors: int | None = None,
    node_budget: int | None = None,
    cache: MutableMapping | None = None,
) -> HereditaryReport:
    """For every positive-capacity vertex x, find the least-index neighbor y
    with positive capacity such that consuming {x, y} keeps the property.

    Requires the property to hold on the input.  Vertices with no such
    neighbor are reported as counterexamples; for p1, p2, and p4 any
    counterexample means a bug in this package rather than a legal outcome.
    """
    pid = PropertyId(pid)
    budgets = dict(max_edges=max_edges, max_factors=max_factors, node_budget=node_budget)
    if not check_property(pid, problem, cache=cache, **budgets):
        raise PropertyDoesNotHold(f"{pid.value} does not hold on the instance")
    witnesses: dict[str, str] = {}
    counterexamples: list[str] = []
    for x in problem.graph.vertices:
        if not problem.f[x] > 0:
            continue
        witness = None
        for y in problem.graph.neighbors(x):
            if not problem.f[y] > 0:
                continue
            child = remove_edge(problem, x, y)
            if check_property(pid, child, cache=cache, **budgets):
                witness = y
                break
        if witness is None:
            counterexamples.append(x)
        else:
            witnesses[x] = witness
    return HereditaryReport(pid, witnesses, tuple(counterexamples))


def saturate_finite_set(
    pid: PropertyId,
    problem: FactorProblem,
    targets: Iterable[str],
    *,
    max_edges: int | None = None,
    max_factors: int | None = None,
    node_budget: int | None = None,
    cache: MutableMapping | None = None,
) -> Factor:
    """Build a finite factor that saturates every target vertex while the
    property keeps holding on the residual instance.

    One hereditary step at a time: take the least-index target with residual
    capacity, consume the least-index witness edge, and recurse on the
    residual.  The returned edge set is a factor of the original instance
    with full degree at every target.
    """
    pid = PropertyId(pid)
    budgets = dict(max_edges=max_edges, max_factors=max_factors, node_budget=node_budget)
    wanted = set(targets)
    unknown = wanted - set(problem.graph.vertices)
    if unknown:
        raise MalformedInstance(f"unknown target vertices {sorted(unknown)}")
    if not check_property(pid, problem, cache=cache, **budgets):
        raise PropertyDoesNotHold(f"{pid.value} does not hold on the instance")

    current = problem
    chosen: set = set()
    while True:
        x = next(
            (v for v in current.graph.vertices if v in wanted and current.f[v] > 0),
            None,
        )
        if x is None:
            return frozenset(chosen)
        witness = None
        for y in current.graph.neighbors(x):
            if not current.f[y] > 0:
                continue
            child = remove_edge(current, x, y)
            if check_property(pid, child, cache=cache, **budgets):
                witness = y
                break
        if witness is None:
            raise InternalHereditaryFailure(
                f"no hereditary extension at {x!r} for {pid.value}"
                + ("" if pid is PropertyId.P3 else " (implementation bug)")
            )
        chosen.add(current.graph.edge_key(x, witness))
        current = remove_edge(current, x, witness)
