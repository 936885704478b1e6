"""Multiple Charlier with two weights: from the weights to recurrence coefficients.

Run: python3 walkthroughs/01_charlier_pipeline.py
"""
from mops.families import FamilySpec, charlier_closed_form, family_to_weight_system
from mops.kernel import fmt
from mops.pipeline import run_pipeline

fs = FamilySpec("charlier", 2, ("1/3", "1/5"))
n = 8
pl = run_pipeline(family_to_weight_system(fs), n, "1e-40")
print(f"truncation K={pl.tm.K}, certified tail <= {float(pl.tm.tail_bound):.3e}")
print(f"tolerance budget for tail-tier checks: {float(pl.budget.bound):.3e}")

# alpha^(0) from the factorization against the closed form; the difference is pure truncation
closed = charlier_closed_form(fs, n - 1)
print("\n m  alpha0 (closed)  |factorization - closed|")
for m in range(n):
    diff = abs(pl.rd.alphas[0][m] - closed[0][m])
    print(f"{m:2d}  {fmt(closed[0][m]):>14}  {float(diff):.2e}")

# pivots of the Gauss-Borel factorization build the tau functions
tau = 1
for m in range(4):
    print(f"H_{m} = {float(pl.f.H[m]):.12f}   tau_{m} = {float(tau):.6e}")
    tau *= pl.f.H[m]
