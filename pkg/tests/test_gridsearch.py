"""Brute-force lattice oracle: exhaustive minimum and coarse front."""

import random

import pytest

from relot import (
    CostModel,
    EmptyFeasibleGridError,
    GridSpec,
    ModelParams,
    ParameterError,
    average_cost,
    check_feasibility,
    decision_box,
    default_grid,
    grid_front,
    grid_min,
    solve_constrained,
    solve_unconstrained,
)

from conftest import LAMBDAS, SUSTAIN, floor_params, unconstrained_params


def _oracle_filter(triples):
    kept = []
    for i, a in enumerate(triples):
        if not any(
            all(x <= y for x, y in zip(b, a)) and any(x < y for x, y in zip(b, a))
            for j, b in enumerate(triples) if j != i
        ):
            kept.append(i)
    return kept


class TestGridSpec:
    def test_axes_inclusive(self):
        spec = GridSpec((1.0, 2.0), (1.0, 3.0), 0.5)
        assert list(spec.qp_axis()) == [1.0, 1.5, 2.0]
        assert list(spec.qr_axis()) == [1.0, 1.5, 2.0, 2.5, 3.0]
        assert spec.cells == 15

    @pytest.mark.parametrize("qp_range,qr_range,step", [
        ((2.0, 1.0), (1.0, 3.0), 0.5),
        ((1.0, 2.0), (1.0, 3.0), 0.0),
        ((1.0, 2.0), (1.0, 3.0), -1.0),
        ((-1.0, 2.0), (1.0, 3.0), 0.5),
    ])
    def test_bad_spec_rejected(self, qp_range, qr_range, step):
        with pytest.raises(ParameterError):
            GridSpec(qp_range, qr_range, step)

    def test_cell_budget_guard(self):
        """[1,60]x[1,200] at a 0.01 scan step is 1.17e8 cells: over budget."""
        with pytest.raises(ParameterError):
            GridSpec((1.0, 60.0), (1.0, 200.0), 0.01)

    def test_default_grid_spans_three_optima(self):
        p = unconstrained_params(45.0)
        star = solve_unconstrained(p).decision
        spec = default_grid(p)
        assert spec.qp_range[1] == pytest.approx(3.0 * star.Qp, rel=1e-12)
        assert spec.qr_range[1] == pytest.approx(3.0 * star.Qr, rel=1e-12)
        assert spec.step == 1.0


class TestGridMin:
    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_two_stage_matches_closed_form(self, lam):
        p = unconstrained_params(lam)
        dec, val = grid_min(p, default_grid(p))
        star = solve_unconstrained(p)
        assert val == pytest.approx(star.f1, rel=1e-6)
        assert dec.Qp == pytest.approx(star.decision.Qp, abs=0.01)
        assert dec.Qr == pytest.approx(star.decision.Qr, abs=0.01)

    @pytest.mark.parametrize("lam", LAMBDAS)
    def test_constrained_matches_case_analysis(self, lam):
        p = floor_params(lam)
        dec, val = grid_min(p, default_grid(p), constrained=True)
        kkt = solve_constrained(p)
        assert val == pytest.approx(kkt.f1, rel=1e-4)
        cm = CostModel(p)
        assert cm.supply_slack(dec.Qp) >= 0.0
        assert cm.repair_slack(dec.Qp, dec.Qr) >= 0.0

    def test_coarse_scan_without_refinement(self):
        p = unconstrained_params(45.0)
        dec, val = grid_min(p, default_grid(p), refine=False)
        star = solve_unconstrained(p)
        assert val == pytest.approx(star.f1, rel=1e-3)
        assert dec.Qp == pytest.approx(star.decision.Qp, abs=1.0)

    def test_single_cell_grid(self):
        p = unconstrained_params(45.0)
        dec, val = grid_min(p, GridSpec((30.83, 30.84), (115.10, 115.11), 1.0))
        assert dec.Qp == 30.83 and dec.Qr == 115.10
        assert val == pytest.approx(average_cost(p, 30.83, 115.10), rel=1e-12)

    def test_no_feasible_cell_raises(self):
        p = ModelParams.from_mapping(
            {**floor_params(60.0).to_mapping(), "k1": 0.001})
        with pytest.raises(EmptyFeasibleGridError):
            grid_min(p, default_grid(p), constrained=True)

    def test_exhaustive_against_plain_loop(self):
        """Vectorised scan equals a literal double loop on random windows."""
        p = unconstrained_params(45.0)
        cm = CostModel(p)
        rng = random.Random(42)
        for _ in range(20):
            lo_p = rng.uniform(5.0, 40.0)
            lo_r = rng.uniform(10.0, 150.0)
            spec = GridSpec((lo_p, lo_p + rng.uniform(2.0, 20.0)),
                            (lo_r, lo_r + rng.uniform(2.0, 50.0)),
                            rng.uniform(0.3, 2.0))
            dec, val = grid_min(p, spec, refine=False)
            best = min(
                (cm.average_cost(float(qp), float(qr)), float(qp), float(qr))
                for qp in spec.qp_axis() for qr in spec.qr_axis()
            )
            assert val == pytest.approx(best[0], rel=1e-12)
            assert dec.Qp == pytest.approx(best[1], rel=1e-12)
            assert dec.Qr == pytest.approx(best[2], rel=1e-12)


class TestGridFront:
    def test_needs_sustainability_terms(self):
        p = unconstrained_params(45.0)
        with pytest.raises(ParameterError):
            grid_front(p, default_grid(p))

    def test_coarse_front_properties(self):
        p = ModelParams(**SUSTAIN)
        lo, hi = decision_box(p)
        front = grid_front(p, GridSpec((lo[0], hi[0]), (lo[1], hi[1]), 5.0))
        assert front
        triples = [tuple(v) for _, v in front]
        assert _oracle_filter(triples) == list(range(len(triples)))
        for dec, vec in front:
            rep = check_feasibility(p, dec, include_emissions_domain=True)
            assert rep.all_ok
            assert vec.f1 == pytest.approx(average_cost(p, dec.Qp, dec.Qr), rel=1e-12)

    def test_front_trades_cost_against_emissions(self):
        """Sorted by Qp, f1 and f3 rise while f2 falls toward its minimum."""
        p = ModelParams(**SUSTAIN)
        lo, hi = decision_box(p)
        front = sorted(grid_front(p, GridSpec((lo[0], 72.3), (lo[1], hi[1]), 0.25)),
                       key=lambda item: item[0].Qp)
        assert len(front) >= 3
        qps = [dec.Qp for dec, _ in front]
        f2s = [vec.f2 for _, vec in front]
        f3s = [vec.f3 for _, vec in front]
        assert qps == sorted(qps)
        assert all(a > b for a, b in zip(f2s, f2s[1:]))
        assert all(a < b for a, b in zip(f3s, f3s[1:]))

    def test_degenerate_instance_single_point(self):
        deg = ModelParams.from_mapping({
            **ModelParams(**SUSTAIN).to_mapping(),
            "ap": 0.0, "bp": 0.0, "Wp": 0.0, "Wr": 0.0, "Kp": 0.0, "Kr": 0.0,
        })
        lo, hi = decision_box(ModelParams(**SUSTAIN))
        front = grid_front(deg, GridSpec((lo[0], hi[0]), (lo[1], hi[1]), 5.0))
        assert len(front) == 1
        dec, vec = front[0]
        assert vec.f2 == 1.4 and vec.f3 == 0.0

    def test_empty_feasible_region_raises(self):
        p = ModelParams(**SUSTAIN)
        with pytest.raises(EmptyFeasibleGridError):
            grid_front(p, GridSpec((1.0, 60.0), (1.0, 60.0), 5.0))
