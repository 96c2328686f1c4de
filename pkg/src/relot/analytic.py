"""Closed-form solvers for the reverse-logistics cost model.

``solve_unconstrained`` evaluates the stationary batch sizes of f1.
``solve_constrained`` enumerates the four KKT configurations of the two
floor-space constraints (none / supply / repair / both active), keeps every
configuration whose multipliers are positive and whose point is feasible,
and returns the cheapest one.  Multipliers below MULTIPLIER_TOL are treated
as zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import BatchDecision, CostModel, DomainError, ModelParams, derive_constants

__all__ = [
    "SolverError",
    "NoKktPointError",
    "UnconstrainedSolution",
    "KktSolution",
    "solve_unconstrained",
    "solve_constrained",
    "kkt_residual",
    "gradient_norm",
]

MULTIPLIER_TOL = 1e-12
_FD_STEP = 1e-5
_FEAS_TOL = 1e-7  # relative slack tolerance when accepting a KKT candidate
_CASE_ORDER = {"I": 0, "II": 1, "III": 2, "IV": 3}


class SolverError(RuntimeError):
    """Raised when a solver cannot certify its own output."""


class NoKktPointError(RuntimeError):
    """Raised when no KKT configuration admits positive multipliers and a
    feasible point, e.g. inconsistent floor constraints."""


@dataclass(frozen=True)
class UnconstrainedSolution:
    decision: BatchDecision
    f1: float
    grad_norm: float


@dataclass(frozen=True)
class KktSolution:
    case: str          # "I", "II", "III" or "IV"
    decision: BatchDecision
    lambda1: float
    lambda2: float
    f1: float
    feasible: bool
    kkt_residual: float


# -- stationarity formulas ----------------------------------------------------


def _stationary_qp(params: ModelParams, C3: float, lambda1: float, lambda2: float) -> float:
    """Qp from the procurement stationarity condition (supply multiplier
    lambda1, repair multiplier lambda2)."""
    pr = params.p * params.r
    denom = (
        params.h1
        + 2.0 * lambda1 * params.Dp * C3 * params.p1
        + params.h2 * pr
        + 2.0 * lambda2 * params.Dp * C3 * params.p * params.p2 * params.r
    )
    return math.sqrt(2.0 * params.Ap * params.Dp / denom)


def _stationary_qr(params: ModelParams, C1: float, C2: float, C3: float, lambda2: float) -> float:
    """Qr from the repair stationarity condition."""
    pr = params.p * params.r
    inner = (
        C1 * C2 * params.h1
        + 4.0 * params.h2 * pr
        + 2.0 * lambda2 * params.Dp * C3 * params.p * params.p2 * params.r
        + C1 * C2 * params.Dp * params.h2 * pr / params.Dr
    )
    denom = (
        C1 * C2 * params.Dr * (params.h1 + params.h2)
        + 2.0 * params.Dr * params.h2 * pr
        + params.lam * C1 * inner
    )
    return math.sqrt(2.0 * params.lam * C2 * params.Ar * params.Dr / denom)


def _theorem_decision(params: ModelParams) -> BatchDecision:
    dc = derive_constants(params)
    return BatchDecision(
        Qp=_stationary_qp(params, dc.C3, 0.0, 0.0),
        Qr=_stationary_qr(params, dc.C1, dc.C2, dc.C3, 0.0),
    )


# -- finite-difference machinery ----------------------------------------------


def _fd_first_second(f, x: float, other: float, first_coord: bool) -> tuple[float, float]:
    """Central first and second difference of f along one coordinate."""
    h = _FD_STEP * max(1.0, abs(x))
    if first_coord:
        fp, fm, f0 = f(x + h, other), f(x - h, other), f(x, other)
    else:
        fp, fm, f0 = f(other, x + h), f(other, x - h), f(other, x)
    return (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)


def gradient_norm(params: ModelParams, d: BatchDecision) -> float:
    """Relative magnitude of the finite-difference gradient of f1 at d,
    measured as the norm of (df1/dQi * Qi / f1)."""
    cm = CostModel(params)
    f = cm.average_cost
    gp, _ = _fd_first_second(f, d.Qp, d.Qr, True)
    gr, _ = _fd_first_second(f, d.Qr, d.Qp, False)
    f1 = f(d.Qp, d.Qr)
    return math.hypot(gp * d.Qp / f1, gr * d.Qr / f1)


def kkt_residual(
    params: ModelParams,
    d: BatchDecision,
    lambda1: float = 0.0,
    lambda2: float = 0.0,
) -> float:
    """Stationarity defect of the floor-space Lagrangian at d.

    The objective gradient is taken by central finite differences, the
    constraint gradients analytically.  Each Lagrangian component is scaled
    by the local curvature times the coordinate (the length of the
    coordinate-wise Newton step relative to the coordinate), which makes the
    residual dimension-free.
    """
    cm = CostModel(params)
    f = cm.average_cost
    gp, hpp = _fd_first_second(f, d.Qp, d.Qr, True)
    gr, hrr = _fd_first_second(f, d.Qr, d.Qp, False)
    rp = params.r * params.p
    lp = gp + lambda1 * params.p1 + lambda2 * params.p2 * rp
    lr = gr + lambda2 * params.p2 * params.return_inflow * cm.C1 / params.Dr
    scale_p = abs(hpp) * d.Qp
    scale_r = abs(hrr) * d.Qr
    res_p = abs(lp) / scale_p if scale_p > 0.0 else math.inf
    res_r = abs(lr) / scale_r if scale_r > 0.0 else math.inf
    return max(res_p, res_r)


# -- solvers -------------------------------------------------------------------


def solve_unconstrained(params: ModelParams) -> UnconstrainedSolution:
    """Optimal batch sizes ignoring the floor constraints."""
    d = _theorem_decision(params)
    cm = CostModel(params)
    gnorm = gradient_norm(params, d)
    if not (gnorm < 1e-4):
        raise SolverError(
            f"stationarity check failed at {d}: relative gradient {gnorm!r}"
        )
    return UnconstrainedSolution(decision=d, f1=cm.average_cost(d.Qp, d.Qr), grad_norm=gnorm)


def _floor_qr(params: ModelParams, C1: float, qp: float) -> float:
    """Qr putting the repair floor exactly at capacity for a given Qp."""
    inflow = params.return_inflow
    rp = params.r * params.p
    return params.Dr * (params.k2 - rp * qp * params.p2) / (inflow * C1 * params.p2)


def _case3_multiplier(params: ModelParams, dc) -> float | None:
    """Repair multiplier solving the coupled stationarity/active-floor system.

    gap(l2) = floor-Qr(Qp(l2)) - stationary-Qr(l2) is strictly increasing,
    so a sign change brackets the unique root; bisection to 1e-10 relative.
    """

    def gap(l2: float) -> float:
        qp = _stationary_qp(params, dc.C3, 0.0, l2)
        return _floor_qr(params, dc.C1, qp) - _stationary_qr(params, dc.C1, dc.C2, dc.C3, l2)

    if gap(0.0) >= 0.0:
        return None  # repair floor not binding at the stationary point
    hi = 1.0
    while gap(hi) < 0.0:
        hi *= 2.0
        if hi > 1e12:
            return None
    lo = 0.0
    while hi - lo > 1e-10 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _cond_2x2_upper(a: float, b: float, c: float) -> float:
    """Condition number of [[a, b], [0, c]] in the spectral norm."""
    det = abs(a * c)
    if det == 0.0:
        return math.inf
    s = a * a + b * b + c * c
    disc = math.sqrt(max(s * s - 4.0 * det * det, 0.0))
    smax = math.sqrt((s + disc) / 2.0)
    smin = math.sqrt(max((s - disc) / 2.0, 0.0))
    return math.inf if smin == 0.0 else smax / smin


def solve_constrained(params: ModelParams) -> KktSolution:
    """Cheapest KKT configuration of the floor-space constrained problem.

    All four constraint-activity patterns are evaluated; a candidate is kept
    when its multipliers exceed MULTIPLIER_TOL and its point satisfies both
    floors.  With both floors infinite this reduces exactly to the
    unconstrained solution (Case I).
    """
    dc = derive_constants(params)
    cm = CostModel(params)
    rp = params.r * params.p

    def feasible(qp: float, qr: float) -> bool:
        ok1 = cm.supply_slack(qp) >= -_FEAS_TOL * max(1.0, abs(params.k1))
        if math.isinf(params.k1):
            ok1 = True
        ok2 = True
        if not math.isinf(params.k2):
            ok2 = cm.repair_slack(qp, qr) >= -_FEAS_TOL * max(1.0, abs(params.k2))
        return ok1 and ok2

    candidates: list[KktSolution] = []

    def add(case: str, qp: float, qr: float, l1: float, l2: float) -> None:
        d = BatchDecision(Qp=qp, Qr=qr)
        candidates.append(
            KktSolution(
                case=case,
                decision=d,
                lambda1=l1,
                lambda2=l2,
                f1=cm.average_cost(qp, qr),
                feasible=True,
                kkt_residual=kkt_residual(params, d, l1, l2),
            )
        )

    # Case I: neither floor active.
    qp0 = _stationary_qp(params, dc.C3, 0.0, 0.0)
    qr0 = _stationary_qr(params, dc.C1, dc.C2, dc.C3, 0.0)
    if feasible(qp0, qr0):
        add("I", qp0, qr0, 0.0, 0.0)

    # Case II: supply floor active.
    if math.isfinite(params.k1):
        qp = params.k1 / params.p1
        num = 2.0 * params.Ap * params.Dp - qp * qp * (params.h1 + params.h2 * rp)
        l1 = num / (2.0 * qp * qp * params.Dp * dc.C3 * params.p1)
        qr = _stationary_qr(params, dc.C1, dc.C2, dc.C3, 0.0)
        if l1 > MULTIPLIER_TOL and feasible(qp, qr):
            add("II", qp, qr, l1, 0.0)

    # Case III: repair floor active.
    if math.isfinite(params.k2):
        l2 = _case3_multiplier(params, dc)
        if l2 is not None and l2 > MULTIPLIER_TOL:
            qp = _stationary_qp(params, dc.C3, 0.0, l2)
            qr = _floor_qr(params, dc.C1, qp)
            if qr > 0.0 and feasible(qp, qr):
                add("III", qp, qr, 0.0, l2)

    # Case IV: both floors active.
    if math.isfinite(params.k1) and math.isfinite(params.k2):
        qp = params.k1 / params.p1
        qr = _floor_qr(params, dc.C1, qp)
        if qr > 0.0:
            gp, _ = _fd_first_second(cm.average_cost, qp, qr, True)
            gr, _ = _fd_first_second(cm.average_cost, qr, qp, False)
            a = params.p1
            b = params.p2 * rp
            c = params.p2 * params.return_inflow * dc.C1 / params.Dr
            if _cond_2x2_upper(a, b, c) <= 1e12:
                l2 = -gr / c
                l1 = -(gp + l2 * b) / a
                if l1 > MULTIPLIER_TOL and l2 > MULTIPLIER_TOL and feasible(qp, qr):
                    add("IV", qp, qr, l1, l2)

    if not candidates:
        raise NoKktPointError(
            "no constraint-activity pattern yields positive multipliers and a "
            "feasible point; the floor constraints are likely inconsistent"
        )

    best = min(candidates, key=lambda s: (s.f1, _CASE_ORDER[s.case]))
    _validate(params, cm, best)
    return best


def _validate(params: ModelParams, cm: CostModel, sol: KktSolution) -> None:
    """Defensive certification of the returned KKT point."""
    if sol.kkt_residual >= 1e-6:
        raise SolverError(
            f"case {sol.case} solution has stationarity residual {sol.kkt_residual!r}"
        )
    d = sol.decision
    if math.isfinite(params.k1):
        comp1 = sol.lambda1 * cm.supply_slack(d.Qp)
        if abs(comp1) >= 1e-6 * max(1.0, abs(params.k1)):
            raise SolverError(f"complementary slackness violated on the supply floor: {comp1!r}")
    if math.isfinite(params.k2):
        comp2 = sol.lambda2 * cm.repair_slack(d.Qp, d.Qr)
        if abs(comp2) >= 1e-6 * max(1.0, abs(params.k2)):
            raise SolverError(f"complementary slackness violated on the repair floor: {comp2!r}")
