"""Penalty-based pattern-search kernel on analytic and model problems."""

import pytest

from relot import CostModel, ScalarProgram, lattice_starts, minimize

from conftest import floor_params, unconstrained_params


def _quadratic(cx, cy):
    return lambda x, y: (x - cx) ** 2 + (y - cy) ** 2


class TestUnconstrained:
    def test_interior_minimum(self):
        """minimize (x-3)^2 + (y-4)^2 on [0.5,10]^2 => (3, 4)"""
        prog = ScalarProgram(objective=_quadratic(3.0, 4.0),
                             lower=(0.5, 0.5), upper=(10.0, 10.0))
        res = minimize(prog)
        assert res.feasible
        assert res.decision.Qp == pytest.approx(3.0, abs=1e-6)
        assert res.decision.Qr == pytest.approx(4.0, abs=1e-6)
        assert res.value == pytest.approx(0.0, abs=1e-10)

    def test_boundary_minimum(self):
        """minimizer outside the box clips to the nearest corner"""
        prog = ScalarProgram(objective=_quadratic(3.0, 4.0),
                             lower=(0.25, 0.25), upper=(1.0, 1.0))
        res = minimize(prog)
        assert res.decision.Qp == pytest.approx(1.0, abs=1e-8)
        assert res.decision.Qr == pytest.approx(1.0, abs=1e-8)


class TestConstrained:
    def test_linear_constraint(self):
        """minimize (x-3)^2 + (y-4)^2 s.t. x + y <= 5 => (2, 3)"""
        prog = ScalarProgram(
            objective=_quadratic(3.0, 4.0),
            lower=(0.5, 0.5), upper=(10.0, 10.0),
            constraints=(lambda x, y: x + y - 5.0,),
        )
        res = minimize(prog, lattice=(5, 5))
        assert res.feasible
        assert res.decision.Qp == pytest.approx(2.0, abs=1e-5)
        assert res.decision.Qr == pytest.approx(3.0, abs=1e-5)
        assert res.value == pytest.approx(2.0, rel=1e-6)

    def test_active_constraint_is_met_exactly(self):
        """The penalty does not let the solution drift outside the region."""
        prog = ScalarProgram(
            objective=_quadratic(3.0, 4.0),
            lower=(0.5, 0.5), upper=(10.0, 10.0),
            constraints=(lambda x, y: x + y - 5.0,),
        )
        res = minimize(prog, lattice=(5, 5))
        violation = res.decision.Qp + res.decision.Qr - 5.0
        assert violation <= 1e-8
        assert abs(violation) < 1e-5

    def test_infeasible_program_reports_violation(self):
        """x <= 1 and x >= 2 cannot hold; best compromise sits at x = 1.5."""
        prog = ScalarProgram(
            objective=lambda x, y: y,
            lower=(0.5, 0.5), upper=(10.0, 10.0),
            constraints=(lambda x, y: x - 1.0, lambda x, y: 2.0 - x),
        )
        res = minimize(prog, lattice=(9, 3))
        assert not res.feasible
        assert res.max_violation == pytest.approx(0.5, abs=1e-3)

    def test_nonpositive_lower_bound_rejected(self):
        with pytest.raises(ValueError):
            ScalarProgram(objective=lambda x, y: y, lower=(0.0, 1.0), upper=(10.0, 10.0))


class TestOnCostModel:
    def test_matches_closed_form(self):
        """Pattern search lands on the analytic optimum within 0.1%."""
        from relot import solve_unconstrained

        p = unconstrained_params(45.0)
        cm = CostModel(p)
        prog = ScalarProgram(objective=cm.average_cost,
                             lower=(1.0, 1.0), upper=(200.0, 400.0))
        res = minimize(prog)
        star = solve_unconstrained(p)
        assert res.value == pytest.approx(star.f1, rel=1e-3)
        assert res.decision.Qp == pytest.approx(star.decision.Qp, rel=5e-3)
        assert res.decision.Qr == pytest.approx(star.decision.Qr, rel=5e-3)

    def test_matches_floor_case_analysis(self):
        """Floor constraints as penalty terms reproduce the case solution."""
        from relot import solve_constrained

        p = floor_params(60.0)
        cm = CostModel(p)
        prog = ScalarProgram(
            objective=cm.average_cost,
            lower=(1.0, 1.0), upper=(200.0, 400.0),
            constraints=(
                lambda qp, qr: p.p1 * qp - p.k1,
                lambda qp, qr: cm.repair_load(qp, qr) - p.k2,
            ),
        )
        res = minimize(prog)
        kkt = solve_constrained(p)
        assert res.feasible
        assert res.value == pytest.approx(kkt.f1, rel=1e-2)
        assert cm.repair_load(*res.decision.as_tuple()) <= p.k2 + 1e-6


class TestDeterminism:
    def test_bit_identical_repeats(self):
        prog = ScalarProgram(
            objective=_quadratic(3.0, 4.0),
            lower=(0.5, 0.5), upper=(10.0, 10.0),
            constraints=(lambda x, y: x + y - 5.0,),
        )
        a = minimize(prog, lattice=(5, 5))
        b = minimize(prog, lattice=(5, 5))
        assert a.decision == b.decision
        assert a.value == b.value
        assert a.iterations == b.iterations

    def test_result_bookkeeping(self):
        prog = ScalarProgram(objective=_quadratic(1.0, 1.0),
                             lower=(0.25, 0.25), upper=(2.0, 2.0))
        res = minimize(prog)
        assert res.iterations > 0
        assert res.starts > 0
        assert res.feasible and res.max_violation == 0.0


class TestLatticeStarts:
    def test_grid_shape_and_bounds(self):
        pts = lattice_starts((1.0, 2.0), (100.0, 400.0), (4, 3))
        assert len(pts) == 12
        for x, y in pts:
            assert 1.0 <= x <= 100.0
            assert 2.0 <= y <= 400.0

    def test_deterministic(self):
        assert lattice_starts((1.0, 1.0), (9.0, 9.0), (3, 3)) == lattice_starts(
            (1.0, 1.0), (9.0, 9.0), (3, 3))
