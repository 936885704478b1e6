"""Euler-derivative flows on the factorization, carried exactly as truncated jets.

Run: python3 walkthroughs/03_toda_flows.py   (about half a minute)
"""
from mops.families import FamilySpec, family_to_weight_system
from mops.pipeline import run_pipeline
from mops.toda import (build_jet, verify_finite_differences, verify_multiple_toda, verify_sw_relations,
                       verify_tau_routes)

n = 5
pl = run_pipeline(family_to_weight_system(FamilySpec("charlier", 2, ("1/3", "1/5"))), n, jet_order=3)
jet = build_jet(pl.ms, pl.f, 2, n, pl.ws)

# the log-derivative of each pivot is the main diagonal of the recurrence matrix
dH = jet.dH()
print("d log H_m == alpha^(0)_m:", all(dH[m] / pl.f.H[m] == pl.rd.alphas[0][m] for m in range(n)))

for rep in (verify_sw_relations(jet, pl.rd), verify_multiple_toda(jet), verify_tau_routes(pl.ms, jet, n),
            verify_finite_differences(pl.ws, pl.tm, jet, n)):
    print(rep.summary(), "\n")
