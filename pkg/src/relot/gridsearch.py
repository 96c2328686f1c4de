"""Brute-force grid verification of the optimizers.

Exhaustive scans over a (Qp, Qr) lattice serve as an independent check on
the closed-form and numeric solvers: ``grid_min`` finds the best feasible
cell for the average cost f1 (two-stage by default: a full scan at
``step`` followed by a rescan at ``step/100`` in a window of 2.5 steps
around the incumbent), and ``grid_front`` returns the non-dominated
feasible cells of the three-objective model on a single-stage lattice.

Rows are evaluated vectorized over Qr; memory stays proportional to one
row.  ``grid_front`` materializes every feasible cell and is meant for
coarse lattices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analytic import solve_unconstrained
from .model import EPS_M, BatchDecision, CostModel, ModelParams, ParameterError
from .pareto import ObjectiveVector, dominance_filter

__all__ = [
    "EmptyFeasibleGridError",
    "GridSpec",
    "default_grid",
    "grid_min",
    "grid_front",
]

# Second-stage refinement: step shrinks by this factor inside a window of
# WINDOW_STEPS first-stage steps around the incumbent.
REFINE_RATIO = 100
WINDOW_STEPS = 2.5
_MAX_CELLS = 1e8


class EmptyFeasibleGridError(RuntimeError):
    """Raised when no grid cell satisfies the requested constraints."""


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


@dataclass(frozen=True)
class GridSpec:
    """Scan lattice: closed ranges per axis and the first-stage step."""

    qp_range: tuple[float, float]
    qr_range: tuple[float, float]
    step: float

    def __post_init__(self) -> None:
        for name, (lo, hi) in (("qp_range", self.qp_range), ("qr_range", self.qr_range)):
            if not (lo > 0.0 and math.isfinite(lo)):
                raise ParameterError(f"{name} lower bound must be positive, got {lo!r}")
            if not (hi > lo and math.isfinite(hi)):
                raise ParameterError(f"{name} upper bound must exceed {lo!r}, got {hi!r}")
        if not (self.step > 0.0 and math.isfinite(self.step)):
            raise ParameterError(f"step must be positive, got {self.step!r}")
        if self.cells > _MAX_CELLS:
            raise ParameterError(
                f"grid holds {self.cells:.3g} cells, above the {_MAX_CELLS:.0e} guard"
            )

    @property
    def cells(self) -> float:
        n1 = math.floor((self.qp_range[1] - self.qp_range[0]) / self.step + 1e-9) + 1
        n2 = math.floor((self.qr_range[1] - self.qr_range[0]) / self.step + 1e-9) + 1
        return float(n1) * float(n2)

    def qp_axis(self) -> np.ndarray:
        return _axis(self.qp_range[0], self.qp_range[1], self.step)

    def qr_axis(self) -> np.ndarray:
        return _axis(self.qr_range[0], self.qr_range[1], self.step)


def default_grid(params: ModelParams, *, step: float = 1.0, span: float = 3.0) -> GridSpec:
    """Lattice centered on the closed-form optimum: [0.1, span*Qp*] x [0.1, span*Qr*]."""
    star = solve_unconstrained(params).decision
    return GridSpec(
        qp_range=(0.1, max(span * star.Qp, 0.2)),
        qr_range=(0.1, max(span * star.Qr, 0.2)),
        step=step,
    )


def _scan_min(
    cm: CostModel,
    qp_axis: np.ndarray,
    qr_axis: np.ndarray,
    constrained: bool,
):
    """Best feasible cell of f1, ties broken lexicographically by (Qp, Qr)."""
    best = None
    for qp in qp_axis:
        qr = qr_axis
        if constrained:
            if cm.supply_slack(qp) < 0.0:
                continue
            mask = cm.repair_slack(qp, qr) >= 0.0
            if not mask.any():
                continue
            qr = qr[mask]
        values = cm.average_cost(qp, qr)
        pos = int(np.argmin(values))  # first hit keeps the smallest Qr on ties
        cand = (float(values[pos]), float(qp), float(qr[pos]))
        if best is None or cand < best:
            best = cand
    return best


def grid_min(
    params: ModelParams,
    grid: GridSpec,
    constrained: bool = False,
    *,
    refine: bool = True,
) -> tuple[BatchDecision, float]:
    """Exhaustive minimum of f1 over the lattice's feasible cells.

    ``constrained`` applies the floor-space constraints per cell.  With
    ``refine`` (the default) the first-stage incumbent is re-scanned at
    step/100 within 2.5 steps, so the effective resolution is step/100.
    """
    cm = CostModel(params)
    best = _scan_min(cm, grid.qp_axis(), grid.qr_axis(), constrained)
    if best is None:
        raise EmptyFeasibleGridError("no feasible cell in the scan lattice")
    if refine:
        fine = grid.step / REFINE_RATIO
        half = WINDOW_STEPS * grid.step
        qp_axis = _axis(
            max(grid.qp_range[0], best[1] - half),
            min(grid.qp_range[1], best[1] + half),
            fine,
        )
        qr_axis = _axis(
            max(grid.qr_range[0], best[2] - half),
            min(grid.qr_range[1], best[2] + half),
            fine,
        )
        refined = _scan_min(cm, qp_axis, qr_axis, constrained)
        if refined is not None and refined < best:
            best = refined
    return BatchDecision(Qp=best[1], Qr=best[2]), best[0]


def grid_front(
    params: ModelParams,
    grid: GridSpec,
    *,
    eps_m: float = EPS_M,
) -> list[tuple[BatchDecision, ObjectiveVector]]:
    """Non-dominated feasible cells of (f1, f2, f3), scan order preserved.

    Feasibility means both floor constraints and production factor
    M >= eps_m, matching the three-objective model's constraint set.
    """
    if not params.has_sustainability:
        raise ParameterError(
            "the three-objective front needs the emissions and energy coefficients"
        )
    cm = CostModel(params)
    qr_axis = grid.qr_axis()
    decisions: list[tuple[float, float]] = []
    triples: list[tuple[float, float, float]] = []
    for qp in grid.qp_axis():
        if cm.production_factor(qp) < eps_m or cm.supply_slack(qp) < 0.0:
            continue
        mask = cm.repair_slack(qp, qr_axis) >= 0.0
        if not mask.any():
            continue
        qr = qr_axis[mask]
        f1 = cm.average_cost(qp, qr)
        f2 = float(cm.ghg_value(qp))
        f3 = cm.energy_value(qp, qr)
        f3 = np.broadcast_to(np.asarray(f3, dtype=float), f1.shape)
        for j in range(len(qr)):
            decisions.append((float(qp), float(qr[j])))
            triples.append((float(f1[j]), f2, float(f3[j])))
    if not triples:
        raise EmptyFeasibleGridError("no feasible cell in the scan lattice")
    keep = dominance_filter(triples)
    return [
        (BatchDecision(Qp=decisions[i][0], Qr=decisions[i][1]), ObjectiveVector(*triples[i]))
        for i in keep
    ]
