"""Greedy prefix construction of perfect factors on countable graphs.

A countable instance is presented as a lazily generated source: an
enumeration position -> vertex (finite-capacity vertices appear once,
infinite-capacity vertices recur forever with a documented gap bound),
per-vertex capacities drawn from the naturals plus OMEGA, and lazy neighbor
streams.  Processing the enumeration position by position and extending the
factor at each visit (saturating a finite-capacity vertex outright, adding
exactly one new edge per visit to an infinite-capacity vertex) yields a
monotone chain of finite factors whose union saturates every vertex.

Deciding on-the-fly whether an extension keeps a perfect factor reachable is
hopeless for arbitrary infinite graphs, so extension choices are delegated
to an ExtensionChooser whose validity is certified per family: shipped
choosers either follow a declared perfect factor of the source, or, on
finite instances, follow obstruction-free residuals step by step.

One deliberately absent feature: no source constructor for uncountable
vertex sets exists.  The augmenting-trail property is too weak out there (a
complete bipartite graph with one countable and one uncountable side,
capacity 1 everywhere, satisfies it without having a perfect factor), and
none of the machinery in this module applies.
"""

from __future__ import annotations

import itertools
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from .core import OMEGA, Factor, FactorProblem, _Omega, capacity_to_json, make_factor
from .errors import ChooserFailure, DeclarationViolated, MalformedInstance
from .obstruction import check_p2


class CountableGraphSource(ABC):
    """Lazily generated countable instance with a documented visit schedule."""

    family: str = "custom"
    #: number of enumeration positions, or None when infinite
    schedule_length: int | None = None

    @abstractmethod
    def vertex_at(self, position: int) -> str:
        """Vertex at an enumeration position (IndexError past a finite schedule)."""

    @abstractmethod
    def capacity(self, vertex: str) -> int | _Omega:
        ...

    @abstractmethod
    def neighbors(self, vertex: str) -> Iterator[str]:
        """Deterministic, possibly infinite neighbor stream."""

    def gap_bound(self, window: int) -> int:
        """Documented bound on the gap between successive visits to an
        infinite-capacity vertex, given the number of distinct vertices seen."""
        return 2 * max(window, 1)


@dataclass
class VertexLedger:
    capacity: "int | _Omega"
    degree: int = 0
    occurrences: int = 0


@dataclass
class StreamReport:
    """Outcome of a prefix run: the factor built so far, one ledger row per
    touched vertex, and the invariant monitors (must stay empty)."""

    steps: int
    edges: tuple[tuple[str, str], ...]
    ledger: dict[str, VertexLedger]
    violations: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "steps": self.steps,
            "edges": [list(e) for e in self.edges],
            "ledger": {
                v: {
                    "capacity": capacity_to_json(row.capacity),
                    "degree": row.degree,
                    "occurrences": row.occurrences,
                }
                for v, row in self.ledger.items()
            },
            "violations": list(self.violations),
        }


class ConstructionState:
    """Read view of the factor under construction, handed to choosers."""

    def __init__(self, source: CountableGraphSource):
        self.source = source
        self._edges: set[tuple[str, str]] = set()
        self._degrees: dict[str, int] = {}
        self._occurrences: dict[str, int] = {}
        self._caps: dict[str, int | _Omega] = {}

    def capacity(self, v: str) -> int | _Omega:
        if v not in self._caps:
            self._caps[v] = self.source.capacity(v)
        return self._caps[v]

    def degree(self, v: str) -> int:
        return self._degrees.get(v, 0)

    def occurrences(self, v: str) -> int:
        return self._occurrences.get(v, 0)

    def has_edge(self, u: str, v: str) -> bool:
        return (min(u, v), max(u, v)) in self._edges

    def edges(self) -> frozenset[tuple[str, str]]:
        return frozenset(self._edges)

    def _add_edge(self, u: str, v: str) -> bool:
        key = (min(u, v), max(u, v))
        if key in self._edges:
            return False
        self._edges.add(key)
        self._degrees[u] = self.degree(u) + 1
        self._degrees[v] = self.degree(v) + 1
        return True


class ExtensionChooser(ABC):
    """Strategy for extending the factor when a vertex comes up.

    The contract mirrors the hereditary step: for a finite-capacity vertex
    return edges that saturate it, for an infinite-capacity vertex return
    exactly one new edge at it.  Raise ChooserFailure when no admissible
    extension exists (that marks the source/chooser pairing invalid, not a
    recoverable condition).
    """

    strategy: str = "custom"

    @abstractmethod
    def extend(self, state: ConstructionState, vertex: str) -> Sequence[tuple[str, str]]:
        ...


def stream_factor(
    source: CountableGraphSource, chooser: ExtensionChooser, steps: int
) -> StreamReport:
    """Run the construction over the first ``steps`` enumeration positions.

    The chain of factors is monotone by construction (edges are only ever
    added).  Monitors record any violation of the factor invariant, of
    saturation after a finite-capacity visit, or of one-new-edge growth per
    infinite-capacity visit.
    """
    if steps < 0:
        raise ValueError("steps must be nonnegative")
    if source.schedule_length is not None and steps > source.schedule_length:
        raise ValueError(
            f"source schedule has only {source.schedule_length} positions"
        )
    state = ConstructionState(source)
    violations: list[str] = []
    for position in range(steps):
        v = source.vertex_at(position)
        cap = state.capacity(v)
        state._occurrences[v] = state.occurrences(v) + 1
        degree_before = state.degree(v)
        if isinstance(cap, int) and degree_before >= cap:
            # already saturated; a correct schedule does not revisit, but a
            # revisit needs no work either
            continue
        chosen = tuple(chooser.extend(state, v))
        for a, b in chosen:
            if v not in (a, b):
                violations.append(
                    f"step {position}: chosen edge ({a!r}, {b!r}) does not touch {v!r}"
                )
            if a == b:
                violations.append(f"step {position}: loop at {a!r}")
                continue
            if not state._add_edge(a, b):
                violations.append(
                    f"step {position}: edge ({a!r}, {b!r}) already present"
                )
                continue
            for endpoint in (a, b):
                ecap = state.capacity(endpoint)
                if isinstance(ecap, int) and state.degree(endpoint) > ecap:
                    violations.append(
                        f"step {position}: degree exceeds capacity at {endpoint!r}"
                    )
        if isinstance(cap, int):
            if state.degree(v) != cap:
                violations.append(
                    f"step {position}: {v!r} not saturated after its visit"
                )
        elif state.degree(v) != degree_before + 1:
            violations.append(
                f"step {position}: visit to {v!r} must add exactly one new edge"
            )

    ledger = {}
    touched = set(state._occurrences) | {v for e in state._edges for v in e}
    for v in sorted(touched):
        ledger[v] = VertexLedger(
            capacity=state.capacity(v),
            degree=state.degree(v),
            occurrences=state.occurrences(v),
        )
    return StreamReport(
        steps=steps,
        edges=tuple(sorted(state._edges)),
        ledger=ledger,
        violations=tuple(violations),
    )


class _KnownFactorChooser(ExtensionChooser):
    strategy = "known-factor"

    def __init__(self, partners: Callable[[str], Iterable[str]]):
        self._partners = partners

    def extend(self, state: ConstructionState, vertex: str) -> list[tuple[str, str]]:
        cap = state.capacity(vertex)
        if isinstance(cap, int):
            return self._saturate(state, vertex, cap)
        return [self._one_new_edge(state, vertex)]

    def _saturate(
        self, state: ConstructionState, vertex: str, cap: int
    ) -> list[tuple[str, str]]:
        need = cap - state.degree(vertex)
        chosen: list[tuple[str, str]] = []
        batch: set[tuple[str, str]] = set()
        for y in self._partners(vertex):
            if need == 0:
                break
            key = (min(vertex, y), max(vertex, y))
            if y == vertex:
                raise DeclarationViolated(f"declared factor loops at {vertex!r}")
            if state.has_edge(vertex, y) or key in batch:
                continue
            ycap = state.capacity(y)
            if isinstance(ycap, int) and state.degree(y) >= ycap:
                raise DeclarationViolated(
                    f"declared edge ({vertex!r}, {y!r}) would overflow {y!r}"
                )
            chosen.append((vertex, y))
            batch.add(key)
            need -= 1
        if need > 0:
            raise DeclarationViolated(
                f"declared factor has too few edges at {vertex!r}"
            )
        return chosen

    def _one_new_edge(self, state: ConstructionState, vertex: str) -> tuple[str, str]:
        # among the first degree+1 distinct partners at least one edge is new
        limit = state.degree(vertex) + 1
        seen: set[str] = set()
        for y in self._partners(vertex):
            if y == vertex:
                raise DeclarationViolated(f"declared factor loops at {vertex!r}")
            if y in seen:
                raise DeclarationViolated(
                    f"declared factor repeats partner {y!r} at {vertex!r}"
                )
            seen.add(y)
            if not state.has_edge(vertex, y):
                return (vertex, y)
            if len(seen) > limit:
                break
        raise DeclarationViolated(
            f"declared factor ran out of fresh edges at {vertex!r}"
        )


def known_factor_chooser(
    partners: Callable[[str], Iterable[str]]
) -> ExtensionChooser:
    """Chooser that walks a declared perfect factor of the source.

    ``partners(v)`` lazily lists the declared factor's partners of v (a
    finite list when v has finite capacity).  Local degree checks on the
    explored region raise DeclarationViolated when the declaration lies.
    """
    return _KnownFactorChooser(partners)


class _ObstructionFreeChooser(ExtensionChooser):
    """Finite-instance chooser: consume only edges whose residual stays
    obstruction-free, exactly the hereditary step of that property."""

    strategy = "obstruction-free"

    def __init__(self, problem: FactorProblem, node_budget: int | None = None):
        self._residual = problem
        self._node_budget = node_budget

    def extend(self, state: ConstructionState, vertex: str) -> list[tuple[str, str]]:
        from .core import remove_edge

        chosen: list[tuple[str, str]] = []
        while self._residual.f[vertex] > 0:
            witness = None
            for y in self._residual.graph.neighbors(vertex):
                if not self._residual.f[y] > 0:
                    continue
                child = remove_edge(self._residual, vertex, y)
                if check_p2(child, node_budget=self._node_budget):
                    witness = y
                    break
            if witness is None:
                raise ChooserFailure(
                    f"no obstruction-free extension at {vertex!r}"
                )
            chosen.append((vertex, witness))
            self._residual = remove_edge(self._residual, vertex, witness)
        return chosen


def p2_guided_chooser(
    problem: FactorProblem, *, node_budget: int | None = None
) -> ExtensionChooser:
    """Chooser for one run over a finite instance (it consumes its residual
    state as edges are chosen; build a fresh one per run)."""
    return _ObstructionFreeChooser(problem, node_budget)


class FiniteProblemSource(CountableGraphSource):
    """A finite instance presented as a one-pass schedule in canonical order."""

    family = "finite"

    def __init__(self, problem: FactorProblem):
        self.problem = problem
        self.schedule_length = len(problem.graph.vertices)

    def vertex_at(self, position: int) -> str:
        return self.problem.graph.vertices[position]

    def capacity(self, vertex: str) -> int | _Omega:
        return self.problem.f[vertex]

    def neighbors(self, vertex: str) -> Iterator[str]:
        return iter(self.problem.graph.neighbors(vertex))


def finite_problem_source(problem: FactorProblem) -> CountableGraphSource:
    return FiniteProblemSource(problem)


def run_finite_degeneration(
    problem: FactorProblem, *, node_budget: int | None = None
) -> Factor | None:
    """Run the prefix construction on a finite instance with the
    obstruction-free chooser.  Returns a perfect factor when the instance is
    obstruction-free, None otherwise."""
    source = finite_problem_source(problem)
    chooser = p2_guided_chooser(problem, node_budget=node_budget)
    try:
        report = stream_factor(source, chooser, len(problem.graph.vertices))
    except ChooserFailure:
        return None
    if report.violations:
        raise AssertionError(f"construction monitors fired: {report.violations}")
    return make_factor(problem.graph, report.edges)


# --- built-in families ------------------------------------------------------


class DoubleRaySource(CountableGraphSource):
    """Two-way infinite path on the integers, capacity 2 everywhere.

    Enumeration 0, 1, -1, 2, -2, ...: every vertex appears exactly once.
    The full edge set is the unique perfect factor, declared as such for the
    known-factor chooser.
    """

    family = "double-ray"

    def vertex_at(self, position: int) -> str:
        if position == 0:
            return "0"
        if position % 2 == 1:
            return str((position + 1) // 2)
        return str(-(position // 2))

    def capacity(self, vertex: str) -> int:
        return 2

    def neighbors(self, vertex: str) -> Iterator[str]:
        i = int(vertex)
        return iter((str(i - 1), str(i + 1)))

    def declared_partners(self, vertex: str) -> Iterable[str]:
        return self.neighbors(vertex)


class CompleteBipartiteSource(CountableGraphSource):
    """All edges between two countable sides (a0, a1, ... and b0, b1, ...),
    capacity 1 everywhere.

    Enumeration a0, b0, a1, b1, ...; the declared factor is the diagonal
    matching ai-bi.
    """

    family = "bipartite"

    def vertex_at(self, position: int) -> str:
        side = "a" if position % 2 == 0 else "b"
        return f"{side}{position // 2}"

    def capacity(self, vertex: str) -> int:
        return 1

    def neighbors(self, vertex: str) -> Iterator[str]:
        other = "b" if vertex[0] == "a" else "a"
        return (f"{other}{i}" for i in itertools.count())

    def declared_partners(self, vertex: str) -> Iterable[str]:
        other = "b" if vertex[0] == "a" else "a"
        return (f"{other}{vertex[1:]}",)


class CompleteSource(CountableGraphSource):
    """Complete graph on the naturals with infinite capacity everywhere.

    Enumeration by growing blocks 0; 0,1; 0,1,2; ... so every vertex recurs
    forever, with gaps bounded by twice the current window of distinct
    vertices.  Any fresh edge extends the factor, so the declared factor is
    the full edge set.
    """

    family = "complete"

    def vertex_at(self, position: int) -> str:
        block = (math.isqrt(8 * position + 1) - 1) // 2
        start = block * (block + 1) // 2
        return str(position - start)

    def capacity(self, vertex: str) -> _Omega:
        return OMEGA

    def neighbors(self, vertex: str) -> Iterator[str]:
        own = int(vertex)
        return (str(i) for i in itertools.count() if i != own)

    def declared_partners(self, vertex: str) -> Iterable[str]:
        return self.neighbors(vertex)


BUILTIN_FAMILIES: dict[str, tuple[type, object]] = {
    "double-ray": (DoubleRaySource, 2),
    "bipartite": (CompleteBipartiteSource, 1),
    "complete": (CompleteSource, OMEGA),
}


def make_family(
    name: str, f: object | None = None
) -> tuple[CountableGraphSource, ExtensionChooser]:
    """Instantiate a built-in family and its certified chooser.  Each family
    ships with one fixed capacity; requesting another is rejected."""
    if name not in BUILTIN_FAMILIES:
        raise MalformedInstance(
            f"unknown family {name!r}; choose from {sorted(BUILTIN_FAMILIES)}"
        )
    cls, fixed_f = BUILTIN_FAMILIES[name]
    if f is not None and f != fixed_f:
        raise MalformedInstance(
            f"family {name!r} supports only f={capacity_to_json(fixed_f)!r}"
        )
    source = cls()
    return source, known_factor_chooser(source.declared_partners)


def schedule_violations(source: CountableGraphSource, prefix_length: int) -> list[str]:
    """Diagnostics for schedule discipline over a prefix: finite-capacity
    vertices must not be revisited (their first visit saturates them), and
    infinite-capacity vertices must recur within the documented gap bound."""
    if source.schedule_length is not None:
        prefix_length = min(prefix_length, source.schedule_length)
    problems: list[str] = []
    last_seen: dict[str, int] = {}
    distinct: set[str] = set()
    for position in range(prefix_length):
        v = source.vertex_at(position)
        distinct.add(v)
        if v in last_seen:
            if isinstance(source.capacity(v), int):
                problems.append(
                    f"position {position}: finite-capacity vertex {v!r} repeated"
                )
            else:
                gap = position - last_seen[v]
                bound = source.gap_bound(len(distinct))
                if gap > bound:
                    problems.append(
                        f"position {position}: gap {gap} for {v!r} exceeds bound {bound}"
                    )
        last_seen[v] = position
    return problems


def verify_schedule(source: CountableGraphSource, prefix_length: int) -> bool:
    return not schedule_violations(source, prefix_length)
