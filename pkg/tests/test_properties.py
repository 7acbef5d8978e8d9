from __future__ import annotations

import pytest
from hypothesis import given

from ffactor import (
    BudgetExceeded,
    InternalHereditaryFailure,
    PropertyDoesNotHold,
    PropertyId,
    build_problem,
    check_p2,
    check_property,
    enumerate_factors,
    hereditary_step,
    perfect_factor_bruteforce,
    residual,
    saturate_finite_set,
)
from ffactor.core import factor_degrees, is_factor

from .conftest import problems
from .oracles import naive_factors, naive_perfect


class TestEnumerateFactors:
    def test_k2(self, k2):
        assert list(enumerate_factors(k2)) == [
            frozenset(),
            frozenset({("a", "b")}),
        ]

    def test_triangle_unit_capacity(self, triangle1):
        factors = list(enumerate_factors(triangle1))
        assert len(factors) == 4
        assert factors[0] == frozenset()
        assert all(len(f) <= 1 for f in factors)

    def test_edgeless(self):
        problem = build_problem(["a", "b"], [], {"a": 0, "b": 0})
        assert list(enumerate_factors(problem)) == [frozenset()]

    def test_edge_cap_budget(self, c4):
        with pytest.raises(BudgetExceeded):
            list(enumerate_factors(c4, max_edges=3))

    @given(problems(max_vertices=4))
    def test_matches_naive_order_and_content(self, problem):
        assert list(enumerate_factors(problem)) == naive_factors(problem)


class TestPerfectFactorOracle:
    def test_k2(self, k2):
        assert perfect_factor_bruteforce(k2) == frozenset({("a", "b")})

    def test_path(self, path3):
        assert perfect_factor_bruteforce(path3) is None

    def test_c4_canonical_first(self, c4):
        assert perfect_factor_bruteforce(c4) == frozenset(
            {("v0", "v1"), ("v2", "v3")}
        )

    @given(problems(max_vertices=5))
    def test_matches_naive_first_hit(self, problem):
        assert perfect_factor_bruteforce(problem) == naive_perfect(problem)

    def test_default_edge_cap(self):
        # complete graph on 7 vertices carries 21 edges, one past the default
        vertices = [f"v{i}" for i in range(7)]
        edges = [
            (vertices[i], vertices[j])
            for i in range(7)
            for j in range(i + 1, 7)
        ]
        big = build_problem(vertices, edges, {v: 1 for v in vertices})
        with pytest.raises(BudgetExceeded):
            perfect_factor_bruteforce(big)
        assert perfect_factor_bruteforce(big, max_edges=21) is None


class TestCheckProperty:
    def test_triangle_separation(self, triangle2):
        # factor existence holds, but the only perfect factor is a cycle
        assert check_property(PropertyId.P1, triangle2)
        assert not check_property(PropertyId.P3, triangle2)

    def test_acyclic_perfect_factor(self):
        problem = build_problem(
            ["a", "b", "c"], [("a", "b"), ("b", "c")], {"a": 1, "b": 2, "c": 1}
        )
        assert check_property(PropertyId.P3, problem)

    def test_path_fails_everything(self, path3):
        for pid in PropertyId:
            assert not check_property(pid, path3)

    def test_accepts_plain_strings(self, k2):
        assert check_property("p1", k2)

    @given(problems(max_vertices=5))
    def test_acyclic_factor_implies_factor(self, problem):
        if check_property(PropertyId.P3, problem):
            assert check_property(PropertyId.P1, problem)

    @given(problems(max_vertices=4))
    def test_equivalences_on_small_instances(self, problem):
        existence = check_property(PropertyId.P1, problem)
        assert check_property(PropertyId.P2, problem) == existence
        assert check_property(PropertyId.P4, problem) == existence

    def test_cache_is_used(self, k2):
        cache: dict = {}
        assert check_property(PropertyId.P1, k2, cache=cache)
        assert len(cache) == 1
        # a poisoned cache entry must be returned verbatim
        cache[next(iter(cache))] = False
        assert not check_property(PropertyId.P1, k2, cache=cache)


class TestHereditaryStep:
    def test_k2_witnesses(self, k2):
        report = hereditary_step(PropertyId.P1, k2)
        assert report.witnesses == {"a": "b", "b": "a"}
        assert report.ok

    def test_c4_obstruction_free_witnesses(self, c4):
        report = hereditary_step(PropertyId.P2, c4)
        assert sorted(report.witnesses) == ["v0", "v1", "v2", "v3"]
        assert report.ok

    def test_triangle_capacity_two_witnesses(self, triangle2):
        report = hereditary_step(PropertyId.P2, triangle2)
        assert sorted(report.witnesses) == ["a", "b", "c"]

    def test_requires_property(self, path3):
        with pytest.raises(PropertyDoesNotHold):
            hereditary_step(PropertyId.P1, path3)

    @given(problems(max_vertices=4))
    def test_covers_positive_vertices_exactly_once(self, problem):
        if not check_property(PropertyId.P1, problem):
            return
        report = hereditary_step(PropertyId.P1, problem)
        positive = {v for v in problem.graph.vertices if problem.f[v] > 0}
        covered = set(report.witnesses) | set(report.counterexamples)
        assert covered == positive
        assert not set(report.witnesses) & set(report.counterexamples)

    @given(problems(max_vertices=4))
    def test_no_counterexamples_for_hereditary_properties(self, problem):
        for pid in (PropertyId.P1, PropertyId.P2, PropertyId.P4):
            if check_property(pid, problem):
                assert hereditary_step(pid, problem).ok


class TestSaturateFiniteSet:
    def test_empty_target_set(self, c4):
        assert saturate_finite_set(PropertyId.P2, c4, []) == frozenset()

    def test_c4_single_target(self, c4):
        factor = saturate_finite_set(PropertyId.P2, c4, ["v0"])
        assert factor == frozenset({("v0", "v1")})
        assert check_p2(residual(c4, factor))

    def test_triangle_two_edges_at_target(self, triangle2):
        factor = saturate_finite_set(PropertyId.P2, triangle2, ["a"])
        assert factor == frozenset({("a", "b"), ("a", "c")})
        assert factor_degrees(triangle2, factor)["a"] == 2

    def test_requires_property(self, path3):
        with pytest.raises(PropertyDoesNotHold):
            saturate_finite_set(PropertyId.P2, path3, ["a"])

    def test_unknown_target_rejected(self, c4):
        from ffactor import MalformedInstance

        with pytest.raises(MalformedInstance):
            saturate_finite_set(PropertyId.P2, c4, ["nope"])

    @given(problems(max_vertices=5))
    def test_saturates_targets_and_preserves_property(self, problem):
        if not check_property(PropertyId.P2, problem):
            return
        targets = [v for v in problem.graph.vertices if problem.f[v] > 0][:2]
        factor = saturate_finite_set(PropertyId.P2, problem, targets)
        assert is_factor(problem, factor)
        degrees = factor_degrees(problem, factor)
        for x in targets:
            assert degrees[x] == problem.f[x]
        assert check_p2(residual(problem, factor))

    def test_broken_hereditary_chain_is_reported(self, path3):
        # force the precondition through a poisoned cache; every actual
        # extension step then fails and must surface as the dedicated error
        from ffactor.core import canonical_key

        cache = {(PropertyId.P1, canonical_key(path3)): True}
        with pytest.raises(InternalHereditaryFailure):
            saturate_finite_set(PropertyId.P1, path3, ["a"], cache=cache)
