"""Two-phase simplex solver against brute-force vertex enumeration."""

import itertools

import numpy as np
import pytest

from densetest.errors import DimensionMismatch, LpIterationLimit
from densetest.lp import EQ, GE, LE, LpProblem, solve_lp


def brute_force_minimum(problem, tol=1e-9):
    """Enumerate basic feasible points of an LP over a bounded box.

    Collects every constraint (including bounds) as a hyperplane, intersects
    all size-n subsets, keeps feasible intersection points, and returns the
    minimal objective value.  Exponential, so only usable for tiny problems.
    """
    n = problem.num_vars
    planes = []  # (row, rhs) treated as equalities when selected
    ineqs = []  # (row, rhs) meaning row @ x <= rhs
    for row, rel, b in problem.constraints:
        row = np.asarray(row, dtype=float)
        if rel in (LE, EQ):
            ineqs.append((row, float(b)))
        if rel in (GE, EQ):
            ineqs.append((-row, -float(b)))
        planes.append((row, float(b)))
    for j, (lo, hi) in enumerate(problem.var_bounds):
        e = np.zeros(n)
        e[j] = 1.0
        if np.isfinite(lo):
            ineqs.append((-e, -float(lo)))
            planes.append((e, float(lo)))
        if np.isfinite(hi):
            ineqs.append((e, float(hi)))
            planes.append((e, float(hi)))
    c = np.asarray(problem.objective, dtype=float)
    best = None
    for combo in itertools.combinations(range(len(planes)), n):
        A = np.array([planes[k][0] for k in combo])
        b = np.array([planes[k][1] for k in combo])
        if abs(np.linalg.det(A)) < 1e-12:
            continue
        x = np.linalg.solve(A, b)
        if all(row @ x <= rhs + tol for row, rhs in ineqs):
            val = float(c @ x)
            if best is None or val < best:
                best = val
    return best


def random_box_lp(rng, max_vars=5, max_cons=8):
    """A random LP with a bounded box, so an optimum always exists."""
    n = int(rng.integers(1, max_vars + 1))
    m = int(rng.integers(0, max_cons + 1))
    cons = []
    for _ in range(m):
        row = rng.standard_normal(n)
        rel = rng.choice([LE, GE])
        # Anchor the rhs at a random interior point so feasibility is likely.
        x0 = rng.uniform(-1, 1, n)
        slack = rng.uniform(0, 2)
        b = float(row @ x0) + (slack if rel == LE else -slack)
        cons.append((row, rel, b))
    bounds = []
    for _ in range(n):
        lo = rng.uniform(-3, 0)
        bounds.append((lo, lo + rng.uniform(0.5, 6)))
    return LpProblem(num_vars=n, objective=rng.standard_normal(n),
                     constraints=cons, var_bounds=bounds)


class TestBasicCases:
    def test_textbook_maximization(self):
        # min -3x - 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18, x, y >= 0.
        prob = LpProblem(
            num_vars=2,
            objective=np.array([-3.0, -5.0]),
            constraints=[
                (np.array([1.0, 0.0]), LE, 4.0),
                (np.array([0.0, 2.0]), LE, 12.0),
                (np.array([3.0, 2.0]), LE, 18.0),
            ],
            var_bounds=[(0.0, np.inf)] * 2,
        )
        sol = solve_lp(prob)
        assert sol.status == "optimal"
        assert sol.objective_value == pytest.approx(-36.0, abs=1e-9)
        assert np.allclose(sol.x, [2.0, 6.0], atol=1e-8)

    def test_equality_constraint(self):
        prob = LpProblem(
            num_vars=2,
            objective=np.array([1.0, 2.0]),
            constraints=[(np.array([1.0, 1.0]), EQ, 3.0)],
            var_bounds=[(0.0, np.inf)] * 2,
        )
        sol = solve_lp(prob)
        assert sol.status == "optimal"
        assert np.allclose(sol.x, [3.0, 0.0], atol=1e-8)

    def test_free_variable(self):
        prob = LpProblem(
            num_vars=1,
            objective=np.array([1.0]),
            constraints=[(np.array([1.0]), GE, -7.5)],
            var_bounds=[(-np.inf, np.inf)],
        )
        sol = solve_lp(prob)
        assert sol.status == "optimal"
        assert sol.x[0] == pytest.approx(-7.5, abs=1e-8)

    def test_negative_lower_bounds(self):
        prob = LpProblem(
            num_vars=2,
            objective=np.array([1.0, 1.0]),
            constraints=[(np.array([1.0, -1.0]), LE, 1.0)],
            var_bounds=[(-2.0, 5.0), (-4.0, -1.0)],
        )
        sol = solve_lp(prob)
        assert sol.status == "optimal"
        # x2 = -4 would violate x1 - x2 <= 1 at the x1 lower bound.
        assert np.allclose(sol.x, [-2.0, -3.0], atol=1e-8)

    def test_upper_bounded_free_variable(self):
        prob = LpProblem(
            num_vars=1,
            objective=np.array([-1.0]),
            constraints=[],
            var_bounds=[(-np.inf, 2.5)],
        )
        sol = solve_lp(prob)
        assert sol.status == "optimal"
        assert sol.x[0] == pytest.approx(2.5, abs=1e-9)

    def test_infeasible(self):
        prob = LpProblem(
            num_vars=1,
            objective=np.array([1.0]),
            constraints=[
                (np.array([1.0]), GE, 2.0),
                (np.array([1.0]), LE, 1.0),
            ],
            var_bounds=[(0.0, np.inf)],
        )
        assert solve_lp(prob).status == "infeasible"

    def test_unbounded(self):
        prob = LpProblem(
            num_vars=1,
            objective=np.array([-1.0]),
            constraints=[],
            var_bounds=[(0.0, np.inf)],
        )
        assert solve_lp(prob).status == "unbounded"

    def test_degenerate_vertex_terminates(self):
        # Many constraints active at the optimum; stalls must not cycle.
        prob = LpProblem(
            num_vars=2,
            objective=np.array([-1.0, -1.0]),
            constraints=[
                (np.array([1.0, 0.0]), LE, 1.0),
                (np.array([0.0, 1.0]), LE, 1.0),
                (np.array([1.0, 1.0]), LE, 2.0),
                (np.array([2.0, 1.0]), LE, 3.0),
                (np.array([1.0, 2.0]), LE, 3.0),
            ],
            var_bounds=[(0.0, np.inf)] * 2,
        )
        sol = solve_lp(prob)
        assert sol.status == "optimal"
        assert sol.objective_value == pytest.approx(-2.0, abs=1e-9)

    def test_iteration_limit_is_distinct_from_infeasible(self):
        rng = np.random.default_rng(3)
        prob = random_box_lp(rng, max_vars=5, max_cons=8)
        with pytest.raises(LpIterationLimit):
            solve_lp(prob, max_iters=1)

    def test_validate_rejects_bad_shapes(self):
        with pytest.raises(DimensionMismatch):
            LpProblem(num_vars=2, objective=np.ones(3), constraints=[],
                      var_bounds=[(0, 1)] * 2).validate()
        with pytest.raises(DimensionMismatch):
            LpProblem(num_vars=2, objective=np.ones(2),
                      constraints=[(np.ones(1), LE, 0.0)],
                      var_bounds=[(0, 1)] * 2).validate()
        with pytest.raises(DimensionMismatch):
            LpProblem(num_vars=1, objective=np.ones(1), constraints=[],
                      var_bounds=[(2.0, 1.0)]).validate()


class TestAgainstVertexEnumeration:
    def test_hundred_random_lps(self):
        rng = np.random.default_rng(20240817)
        checked = 0
        while checked < 100:
            prob = random_box_lp(rng)
            expected = brute_force_minimum(prob)
            sol = solve_lp(prob)
            if expected is None:
                assert sol.status == "infeasible"
                continue
            assert sol.status == "optimal"
            assert sol.objective_value == pytest.approx(expected, abs=1e-7)
            # The reported point must itself be feasible.
            for row, rel, b in prob.constraints:
                lhs = float(np.dot(row, sol.x))
                if rel == LE:
                    assert lhs <= b + 1e-7
                elif rel == GE:
                    assert lhs >= b - 1e-7
                else:
                    assert lhs == pytest.approx(b, abs=1e-7)
            for xj, (lo, hi) in zip(sol.x, prob.var_bounds):
                assert lo - 1e-7 <= xj <= hi + 1e-7
            checked += 1

    def test_equality_heavy_random_lps(self):
        rng = np.random.default_rng(99)
        checked = 0
        while checked < 25:
            n = int(rng.integers(2, 4))
            x0 = rng.uniform(-1, 1, n)
            cons = [(rng.standard_normal(n), LE, 0.0) for _ in range(3)]
            cons = [(row, rel, float(row @ x0) + rng.uniform(0, 1))
                    for row, rel, _ in cons]
            eq_row = rng.standard_normal(n)
            cons.append((eq_row, EQ, float(eq_row @ x0)))
            prob = LpProblem(num_vars=n, objective=rng.standard_normal(n),
                             constraints=cons,
                             var_bounds=[(-3.0, 3.0)] * n)
            expected = brute_force_minimum(prob)
            sol = solve_lp(prob)
            if expected is None:
                assert sol.status == "infeasible"
                continue
            assert sol.status == "optimal"
            assert sol.objective_value == pytest.approx(expected, abs=1e-7)
            checked += 1
