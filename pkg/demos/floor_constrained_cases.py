"""
Floor-space constraints and the KKT case walkthrough
====================================================

With limited floor space at the depots the optimum moves off the
closed-form point.  The solver enumerates the four activity patterns of
the two constraints and returns the best KKT point; this script shows
which case wins as the limits tighten.
"""

from relot import CostModel, ModelParams, solve_constrained, solve_unconstrained

BASE = dict(Dp=100.0, Dr=43.0, p=0.6, r=0.7, Ap=10.0, Ar=30.0, h1=1.6, h2=1.2)


def report(tag, params):
    sol = solve_constrained(params)
    cm = CostModel(params)
    qp, qr = sol.decision.Qp, sol.decision.Qr
    print(
        f"{tag:<28} case {sol.case:<4} Qp={qp:8.4f} Qr={qr:9.4f} f1={sol.f1:9.4f}"
        f"  l1={sol.lambda1:.4f} l2={sol.lambda2:.4f}"
        f"  slack=({cm.supply_slack(qp):.4f}, {params.k2 - float(cm.repair_load(qp, qr)):.4f})"
    )


# generous floors: both slack, the unconstrained optimum survives (case I)
report("k1=100, k2=100", ModelParams(lam=60.0, **BASE, p1=0.5, p2=0.5, k1=100.0, k2=100.0))

# tight supply floor only (case II): Qp pinned at k1/p1
report("k1=10,  k2=100", ModelParams(lam=60.0, **BASE, p1=0.5, p2=0.5, k1=10.0, k2=100.0))

# tight repair floor (case III), the published setting
for lam in (45.0, 60.0, 75.0, 90.0, 105.0):
    report(f"k1=20, k2=10, lam={lam:.0f}", ModelParams(lam=lam, **BASE, p1=0.5, p2=0.5, k1=20.0, k2=10.0))

# both floors active at once (case IV) needs a much smaller supply cap,
# because tightening k2 already drags Qp down and frees the supply floor
report("k1=2,   k2=4.5, lam=45", ModelParams(lam=45.0, **BASE, p1=0.5, p2=0.5, k1=2.0, k2=4.5))

star = solve_unconstrained(ModelParams(lam=60.0, **BASE))
print(f"\nunconstrained reference at lam=60: Qp={star.decision.Qp:.4f} "
      f"Qr={star.decision.Qr:.4f} f1={star.f1:.4f}")
