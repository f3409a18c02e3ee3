"""Finite-size collapse of uniform p-wave ramps on L = 8, 12, 16, 20.

Curves of d L^a against tau_total / L^b fall on top of each other for
a = b = 3/2. Prints the collapse quality over a small exponent grid.
"""
import numpy as np

from kzramp import pwave, simulate
from kzramp.analysis import collapse_scan
from kzramp.schedule import RampDrive

data = {}
for L in (8, 12, 16, 20):
    taus = np.geomspace(0.01, 0.2, 7) * L ** 1.5
    recs = [simulate(pwave(L), RampDrive.uniform(t)) for t in taus]
    data[L] = (np.array([r.tau_total for r in recs]), np.array([r.d for r in recs]))
    print(L, " ".join(f"{r.d:.2e}" for r in recs))

grid = [1.0, 1.5, 2.0]
Q = collapse_scan(data, grid, grid)
print("Q[a, b] (rows a, columns b):", grid)
for a, row in zip(grid, Q):
    print(f"a={a}: " + "  ".join(f"{q:.2e}" for q in row))
