"""Obstruction ranks: a well-founded certificate that no perfect factor exists.

An instance is a rank-0 obstruction when some vertex still has positive
capacity but every neighbor's capacity is already zero; that vertex can
never be saturated.  Recursively, a vertex x with positive capacity
witnesses an obstruction of rank ``1 + max(sub-ranks)`` when consuming any
edge from x to a positive-capacity neighbor leaves an obstruction behind.
A vertex with positive capacity and no positive-capacity neighbors is the
empty case of the recursive clause and gets rank 0, matching the base case.

Being obstruction-free is necessary for a perfect factor, and on the finite
instances handled here it is also sufficient (verified empirically by the
acceptance suite against the brute-force oracle).

The relation "is an obstruction of rank alpha" holds for many alphas at
once; this module canonicalizes to the minimum, which is the usual
well-founded rank.  Whether that matches anyone else's convention is
documented rather than assumed.

Recursion is memoized per call on the canonical residual state.  The worst
case is exponential; a node budget aborts with BudgetExceeded instead of
ever returning a wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .core import FactorProblem
from .errors import BudgetExceeded, InfiniteCapacityUnsupported

DEFAULT_NODE_BUDGET = 5_000_000


@dataclass(frozen=True, eq=True)
class ObstructionWitness:
    """Witness tree for an obstruction.

    ``children`` maps each positive-capacity neighbor y of ``vertex`` to the
    witness for the residual instance after consuming {vertex, y}.  A leaf
    (no children) asserts that every neighbor of ``vertex`` has capacity
    zero, i.e. a rank-0 obstruction.
    """

    vertex: str
    children: Mapping[str, "ObstructionWitness"]

    def rank(self) -> int:
        if not self.children:
            return 0
        return 1 + max(child.rank() for child in self.children.values())


def witness_to_json(witness: ObstructionWitness) -> dict:
    return {
        "vertex": witness.vertex,
        "children": {y: witness_to_json(w) for y, w in witness.children.items()},
    }


class _Search:
    """Per-call search state: indexed instance, memo tables, node budget."""

    def __init__(self, problem: FactorProblem, node_budget: int):
        for v in problem.graph.vertices:
            if not isinstance(problem.f[v], int):
                raise InfiniteCapacityUnsupported(
                    f"obstruction ranks require finite capacities ({v!r} is infinite)"
                )
        self.names = problem.graph.vertices
        self.n = len(self.names)
        self.m = len(problem.graph.sorted_edges)
        self.incident = problem._incident  # per vertex: ((neighbor, edge_id), ...)
        self.init_caps = tuple(problem.f[v] for v in self.names)
        self.full_mask = (1 << self.m) - 1
        self.edge_ends = [
            (problem.graph._index[u], problem.graph._index[v])
            for u, v in problem.graph.sorted_edges
        ]
        self.rank_memo: dict = {}
        self.bool_memo: dict = {}
        self.nodes_left = node_budget

    def _spend(self) -> None:
        if self.nodes_left <= 0:
            raise BudgetExceeded("obstruction search node budget exhausted")
        self.nodes_left -= 1

    def _key(self, mask: int, caps: tuple[int, ...]) -> tuple:
        # canonical residual state: edge set plus capacities of vertices that
        # still matter (positive capacity or at least one residual edge)
        deg = [0] * self.n
        for k in range(self.m):
            if mask >> k & 1:
                iu, iv = self.edge_ends[k]
                deg[iu] += 1
                deg[iv] += 1
        relevant = tuple(
            (x, caps[x]) for x in range(self.n) if caps[x] > 0 or deg[x] > 0
        )
        return (mask, relevant)

    def _targets(self, x: int, mask: int, caps: tuple[int, ...]) -> list[tuple[int, int]]:
        return [
            (y, k) for (y, k) in self.incident[x] if mask >> k & 1 and caps[y] > 0
        ]

    def min_rank(self, mask: int, caps: tuple[int, ...]) -> int | None:
        key = self._key(mask, caps)
        if key in self.rank_memo:
            return self.rank_memo[key]
        self._spend()
        best: int | None = None
        for x in range(self.n):
            if caps[x] <= 0:
                continue
            targets = self._targets(x, mask, caps)
            if not targets:
                best = 0  # no rank can be smaller
                break
            cand = 0
            witnesses_all = True
            for y, k in targets:
                child = list(caps)
                child[x] -= 1
                child[y] -= 1
                sub = self.min_rank(mask & ~(1 << k), tuple(child))
                if sub is None:
                    witnesses_all = False
                    break
                if sub + 1 > cand:
                    cand = sub + 1
            if witnesses_all and (best is None or cand < best):
                best = cand
        self.rank_memo[key] = best
        return best

    def is_obstruction(self, mask: int, caps: tuple[int, ...]) -> bool:
        key = self._key(mask, caps)
        if key in self.bool_memo:
            return self.bool_memo[key]
        self._spend()
        result = False
        for x in range(self.n):
            if caps[x] <= 0:
                continue
            witnesses_all = True
            for y, k in self._targets(x, mask, caps):
                child = list(caps)
                child[x] -= 1
                child[y] -= 1
                if not self.is_obstruction(mask & ~(1 << k), tuple(child)):
                    witnesses_all = False
                    break
            if witnesses_all:
                result = True
                break
        self.bool_memo[key] = result
        return result

    def witness(self, mask: int, caps: tuple[int, ...]) -> ObstructionWitness:
        target = self.min_rank(mask, caps)
        assert target is not None
        for x in range(self.n):
            if caps[x] <= 0:
                continue
            targets = self._targets(x, mask, caps)
            if not targets:
                return ObstructionWitness(self.names[x], {})
            cand = 0
            subs: list[tuple[int, int, int]] = []
            witnesses_all = True
            for y, k in targets:
                child = list(caps)
                child[x] -= 1
                child[y] -= 1
                sub = self.min_rank(mask & ~(1 << k), tuple(child))
                if sub is None:
                    witnesses_all = False
                    break
                subs.append((y, k, sub))
                if sub + 1 > cand:
                    cand = sub + 1
            if witnesses_all and cand == target:
                children = {}
                for y, k, _sub in subs:
                    child = list(caps)
                    child[x] -= 1
                    child[y] -= 1
                    children[self.names[y]] = self.witness(
                        mask & ~(1 << k), tuple(child)
                    )
                return ObstructionWitness(self.names[x], children)
        raise AssertionError("rank was attained but no witness realizes it")


def obstruction_rank(
    problem: FactorProblem, *, node_budget: int | None = None
) -> int | None:
    """Minimal obstruction rank, or None when the instance is not an
    obstruction of any rank.  Each recursive step removes one edge, so a
    returned rank never exceeds the edge count."""
    search = _Search(problem, node_budget or DEFAULT_NODE_BUDGET)
    return search.min_rank(search.full_mask, search.init_caps)


def check_p2(problem: FactorProblem, *, node_budget: int | None = None) -> bool:
    """True iff the instance is not an obstruction of any rank."""
    search = _Search(problem, node_budget or DEFAULT_NODE_BUDGET)
    return not search.is_obstruction(search.full_mask, search.init_caps)


def obstruction_witness(
    problem: FactorProblem, *, node_budget: int | None = None
) -> ObstructionWitness | None:
    """Witness tree whose root realizes the minimal rank, or None when the
    instance is obstruction-free.  Vertices and neighbors are examined in
    canonical index order, so the tree is deterministic."""
    search = _Search(problem, node_budget or DEFAULT_NODE_BUDGET)
    if search.min_rank(search.full_mask, search.init_caps) is None:
        return None
    return search.witness(search.full_mask, search.init_caps)
