"""Graph, capacity, and factor data model shared by the whole package.

A problem instance is a finite simple graph together with a per-vertex
capacity.  A factor is an edge subset whose degree at every vertex stays
within that vertex's capacity; it is perfect when equality holds everywhere.
Instances are only admissible when every capacity is at most the vertex
degree, so a perfect factor is never ruled out by counting alone.

Vertices are opaque strings.  Insertion order assigns each vertex a
canonical index, and every deterministic choice in the package (neighbor
order, edge order, tie-breaking) is made in canonical-index order.  Edges
are stored as pairs oriented by canonical index, so an edge set compares
and iterates reproducibly.

All values are immutable after construction and safe to share across
threads or processes.
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping

from .errors import (
    ClassCViolation,
    InstanceParseError,
    MalformedEdge,
    MalformedInstance,
    NoSuchEdge,
    NotAFactor,
)

Vertex = str
Edge = tuple[str, str]
Factor = frozenset[Edge]


class _Omega:
    """Countably infinite capacity marker; strictly greater than every int."""

    __slots__ = ()
    _instance: "_Omega | None" = None

    def __new__(cls) -> "_Omega":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "OMEGA"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, _Omega)

    def __hash__(self) -> int:
        return hash("ffactor.OMEGA")

    def __lt__(self, other: object) -> bool:
        return False

    def __le__(self, other: object) -> bool:
        return isinstance(other, _Omega)

    def __gt__(self, other: object) -> bool:
        if isinstance(other, _Omega):
            return False
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other: object) -> bool:
        if isinstance(other, (_Omega, int)):
            return True
        return NotImplemented

    def __sub__(self, other: object) -> "_Omega":
        if isinstance(other, int) and other >= 0:
            return self
        return NotImplemented


OMEGA = _Omega()

Capacity = int | _Omega


def is_finite(cap: Capacity) -> bool:
    return isinstance(cap, int)


def cap_decrement(cap: Capacity) -> Capacity:
    """One unit less capacity.  Infinite capacity is unaffected; decrementing
    zero is a contract violation, never a silent clamp."""
    if isinstance(cap, _Omega):
        return cap
    if cap < 1:
        raise ValueError("cannot decrement capacity below zero")
    return cap - 1


def cap_sub(cap: Capacity, amount: int) -> Capacity:
    """Capacity minus a natural number; infinite capacity is unaffected."""
    if amount < 0:
        raise ValueError("amount must be a natural number")
    if isinstance(cap, _Omega):
        return cap
    if amount > cap:
        raise ValueError("capacity subtraction below zero")
    return cap - amount


def _check_capacity_value(v: str, cap: object) -> Capacity:
    if isinstance(cap, bool) or not isinstance(cap, (int, _Omega)):
        raise MalformedInstance(f"capacity of {v!r} must be a natural number or OMEGA")
    if isinstance(cap, int) and cap < 0:
        raise MalformedInstance(f"capacity of {v!r} must not be negative")
    return cap


class Graph:
    """Finite simple undirected graph with canonically indexed vertices."""

    __slots__ = ("vertices", "edges", "sorted_edges", "_index", "_adjacency")

    def __init__(self, vertices: Iterable[str], edges: Iterable[Iterable[str]]):
        self.vertices: tuple[str, ...] = tuple(vertices)
        index: dict[str, int] = {}
        for v in self.vertices:
            if not isinstance(v, str) or not v:
                raise MalformedInstance(f"vertex id {v!r} must be a non-empty string")
            if v in index:
                raise MalformedInstance(f"duplicate vertex {v!r}")
            index[v] = len(index)
        self._index = index

        canonical: set[Edge] = set()
        for e in edges:
            pair = tuple(e)
            if len(pair) != 2:
                raise MalformedEdge(f"edge {pair!r} must have exactly two endpoints")
            u, v = pair
            if u not in index or v not in index:
                raise MalformedEdge(f"edge {pair!r} references an unknown vertex")
            if u == v:
                raise MalformedEdge(f"loop at {u!r} is not allowed")
            key = (u, v) if index[u] < index[v] else (v, u)
            if key in canonical:
                raise MalformedEdge(f"duplicate edge {key!r}")
            canonical.add(key)
        self.edges: frozenset[Edge] = frozenset(canonical)
        self.sorted_edges: tuple[Edge, ...] = tuple(
            sorted(canonical, key=lambda e: (index[e[0]], index[e[1]]))
        )

        adjacency: dict[str, list[str]] = {v: [] for v in self.vertices}
        for u, v in self.sorted_edges:
            adjacency[u].append(v)
            adjacency[v].append(u)
        self._adjacency = {
            v: tuple(sorted(ns, key=index.__getitem__)) for v, ns in adjacency.items()
        }

    def index(self, v: str) -> int:
        return self._index[v]

    def has_vertex(self, v: str) -> bool:
        return v in self._index

    def neighbors(self, v: str) -> tuple[str, ...]:
        return self._adjacency[v]

    def degree(self, v: str) -> int:
        return len(self._adjacency[v])

    def edge_key(self, u: str, v: str) -> Edge:
        """Canonical orientation of the pair {u, v}; the pair need not be an edge."""
        if u not in self._index or v not in self._index:
            raise MalformedEdge(f"({u!r}, {v!r}) references an unknown vertex")
        if u == v:
            raise MalformedEdge(f"loop at {u!r} is not an edge")
        return (u, v) if self._index[u] < self._index[v] else (v, u)

    def has_edge(self, u: str, v: str) -> bool:
        return self.edge_key(u, v) in self.edges

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        return f"Graph({len(self.vertices)} vertices, {len(self.edges)} edges)"


class FactorProblem:
    """A graph plus capacities, admissible at every vertex.

    Finite graphs reject OMEGA capacities outright: an infinite demand can
    never be met by finitely many incident edges, so admissibility fails.
    OMEGA only occurs on streamed countable sources.
    """

    __slots__ = ("graph", "f", "_caps", "_edge_ids", "_incident")

    def __init__(self, graph: Graph, f: Mapping[str, Capacity]):
        if set(f) != set(graph.vertices):
            missing = set(graph.vertices) - set(f)
            extra = set(f) - set(graph.vertices)
            detail = []
            if missing:
                detail.append(f"missing capacities for {sorted(missing)}")
            if extra:
                detail.append(f"capacities for unknown vertices {sorted(extra)}")
            raise MalformedInstance("; ".join(detail))
        checked = {v: _check_capacity_value(v, f[v]) for v in graph.vertices}
        for v in graph.vertices:
            if not checked[v] <= graph.degree(v):
                raise ClassCViolation(v)
        self.graph = graph
        self.f = checked
        self._finish_init()

    def _finish_init(self) -> None:
        index = self.graph._index
        self._caps = tuple(self.f[v] for v in self.graph.vertices)
        self._edge_ids = {e: k for k, e in enumerate(self.graph.sorted_edges)}
        incident: list[list[tuple[int, int]]] = [[] for _ in self.graph.vertices]
        for k, (u, v) in enumerate(self.graph.sorted_edges):
            iu, iv = index[u], index[v]
            incident[iu].append((iv, k))
            incident[iv].append((iu, k))
        # neighbor order follows canonical vertex index
        self._incident = tuple(tuple(sorted(pairs)) for pairs in incident)

    @classmethod
    def _trusted(cls, graph: Graph, f: dict[str, Capacity]) -> "FactorProblem":
        """Construct from parts already known to be admissible (asserted)."""
        assert set(f) == set(graph.vertices)
        assert all(f[v] <= graph.degree(v) for v in graph.vertices)
        problem = object.__new__(cls)
        problem.graph = graph
        problem.f = f
        problem._finish_init()
        return problem

    def capacity(self, v: str) -> Capacity:
        return self.f[v]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FactorProblem):
            return NotImplemented
        return self.graph == other.graph and self.f == other.f

    def __hash__(self) -> int:
        return hash((self.graph, tuple(self.f[v] for v in self.graph.vertices)))

    def __repr__(self) -> str:
        return (
            f"FactorProblem({len(self.graph.vertices)} vertices, "
            f"{len(self.graph.edges)} edges)"
        )


def build_problem(
    vertices: Iterable[str],
    edges: Iterable[Iterable[str]],
    f: Mapping[str, Capacity],
) -> FactorProblem:
    """Validated constructor: rejects loops, duplicate edges, unknown
    endpoints, and any vertex whose capacity exceeds its degree."""
    return FactorProblem(Graph(vertices, edges), dict(f))


def degree(factor: Iterable[Edge], x: str) -> int:
    """Number of factor edges incident to x."""
    return sum(1 for e in factor if x == e[0] or x == e[1])


def make_factor(graph: Graph, pairs: Iterable[Iterable[str]]) -> Factor:
    """Canonicalize pairs into a factor edge set; every pair must be an edge."""
    out = set()
    for pair in pairs:
        u, v = tuple(pair)
        key = graph.edge_key(u, v)
        if key not in graph.edges:
            raise NoSuchEdge(f"({u!r}, {v!r}) is not an edge")
        out.add(key)
    return frozenset(out)


def factor_degrees(problem: FactorProblem, factor: Factor) -> dict[str, int]:
    degrees = {v: 0 for v in problem.graph.vertices}
    for u, v in factor:
        degrees[u] += 1
        degrees[v] += 1
    return degrees


def is_factor(problem: FactorProblem, factor: Factor) -> bool:
    """True iff the edge set lies in the graph and respects every capacity."""
    if not factor <= problem.graph.edges:
        return False
    degrees = factor_degrees(problem, factor)
    return all(degrees[v] <= problem.f[v] for v in problem.graph.vertices)


def is_perfect(problem: FactorProblem, factor: Factor) -> bool:
    if not factor <= problem.graph.edges:
        return False
    degrees = factor_degrees(problem, factor)
    return all(degrees[v] == problem.f[v] for v in problem.graph.vertices)


def remove_edge(problem: FactorProblem, x: str, y: str) -> FactorProblem:
    """Consume the edge {x, y}: drop it from the graph and decrement the
    finite positive capacities at its endpoints (infinite and zero
    capacities are left alone).  Admissibility is preserved: both endpoint
    degrees drop by exactly one."""
    key = problem.graph.edge_key(x, y)
    if key not in problem.graph.edges:
        raise NoSuchEdge(f"({x!r}, {y!r}) is not an edge")
    new_graph = Graph(problem.graph.vertices, problem.graph.edges - {key})
    new_f = dict(problem.f)
    for v in key:
        cap = new_f[v]
        if isinstance(cap, int) and cap >= 1:
            new_f[v] = cap - 1
    return FactorProblem._trusted(new_graph, new_f)


def residual(problem: FactorProblem, factor: Factor) -> FactorProblem:
    """The instance left over after committing to a factor: its edges leave
    the graph and its degrees are charged against the capacities."""
    if not factor <= problem.graph.edges:
        raise NotAFactor("factor contains edges outside the graph")
    degrees = factor_degrees(problem, factor)
    for v in problem.graph.vertices:
        if not degrees[v] <= problem.f[v]:
            raise NotAFactor(f"degree exceeds capacity at {v!r}")
    new_graph = Graph(problem.graph.vertices, problem.graph.edges - factor)
    new_f = {v: cap_sub(problem.f[v], degrees[v]) for v in problem.graph.vertices}
    return FactorProblem._trusted(new_graph, new_f)


def canonical_key(problem: FactorProblem) -> tuple:
    """Hashable canonical identity of an instance: the sorted edge list plus
    the (vertex, capacity) pairs of every vertex that could still matter.
    Isolated zero-capacity vertices are dropped; they cannot influence any
    factor, obstruction, or trail."""
    relevant = tuple(
        (v, problem.f[v])
        for v in problem.graph.vertices
        if problem.f[v] > 0 or problem.graph.degree(v) > 0
    )
    return (problem.graph.sorted_edges, relevant)


# --- instance files -------------------------------------------------------
#
# {"vertices": ["a", "b"], "edges": [["a", "b"]], "f": {"a": 1, "b": 1}}
#
# Capacities are naturals; the string "omega" encodes an infinite capacity
# (only meaningful for streamed sources; a finite instance rejects it as
# inadmissible).


def capacity_to_json(cap: Capacity) -> object:
    return "omega" if isinstance(cap, _Omega) else cap


def capacity_from_json(value: object, where: str) -> Capacity:
    if value == "omega":
        return OMEGA
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceParseError(f"{where}: expected a natural number or \"omega\"")
    if value < 0:
        raise InstanceParseError(f"{where}: capacity must not be negative")
    return value


def problem_to_json(problem: FactorProblem) -> dict:
    return {
        "vertices": list(problem.graph.vertices),
        "edges": [list(e) for e in problem.graph.sorted_edges],
        "f": {v: capacity_to_json(problem.f[v]) for v in problem.graph.vertices},
    }


def problem_from_json(doc: object) -> FactorProblem:
    if not isinstance(doc, dict):
        raise InstanceParseError("instance: expected a JSON object")
    for field in ("vertices", "edges", "f"):
        if field not in doc:
            raise InstanceParseError(f"instance: missing field {field!r}")
    unknown = set(doc) - {"vertices", "edges", "f"}
    if unknown:
        raise InstanceParseError(f"instance: unknown fields {sorted(unknown)}")

    vertices = doc["vertices"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise InstanceParseError("vertices: expected a list of strings")

    edges = doc["edges"]
    if not isinstance(edges, list):
        raise InstanceParseError("edges: expected a list of pairs")
    for i, e in enumerate(edges):
        if (
            not isinstance(e, list)
            or len(e) != 2
            or not all(isinstance(v, str) for v in e)
        ):
            raise InstanceParseError(f"edges[{i}]: expected a pair of vertex ids")

    f_doc = doc["f"]
    if not isinstance(f_doc, dict):
        raise InstanceParseError("f: expected an object mapping vertex to capacity")
    f = {v: capacity_from_json(cap, f"f[{v!r}]") for v, cap in f_doc.items()}

    return build_problem(vertices, [tuple(e) for e in edges], f)


def parse_instance(text: str) -> FactorProblem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(
            f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from None
    return problem_from_json(doc)


def load_instance(path: str) -> FactorProblem:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_instance(handle.read())


# --- package-internal mask helpers ----------------------------------------
# Hot search code works over edge-id bitmasks instead of edge-key sets.


def factor_to_mask(problem: FactorProblem, factor: Factor) -> int:
    mask = 0
    for e in factor:
        k = problem._edge_ids.get(e)
        if k is None:
            raise NotAFactor(f"{e!r} is not an edge of the problem")
        mask |= 1 << k
    return mask


def mask_to_factor(problem: FactorProblem, mask: int) -> Factor:
    edges = problem.graph.sorted_edges
    return frozenset(edges[k] for k in range(len(edges)) if mask >> k & 1)


def validate_factor(problem: FactorProblem, factor: Factor) -> None:
    if not is_factor(problem, factor):
        raise NotAFactor("edge set violates a capacity or leaves the graph")
