"""Time to reach a target defect density: uniform ramp vs a subsonic front.

A 200-site chain keeps this to a couple of minutes. The front (alpha = 1/16)
is swept in velocity; the uniform ramp in tau.
"""
import numpy as np

from kzramp import ising_chain, simulate
from kzramp.analysis import advantage_table
from kzramp.schedule import RampDrive

L = 200
model = ising_chain(L)

uni = [simulate(model, RampDrive.uniform(t), dt=0.1) for t in (4, 8, 16, 32, 64, 128, 256)]
front = [simulate(model, RampDrive.inhomogeneous(1 / 16, v), dt=0.1)
         for v in (3.0, 2.5, 2.0, 1.75, 1.5, 1.25, 1.0)]

for name, recs in (("uniform", uni), ("front", front)):
    print(name)
    for r in recs:
        print(f"  tau_total={r.tau_total:8.1f}  d={r.d:.3e}")

pts = lambda recs: (np.array([r.tau_total for r in recs]), np.array([r.d for r in recs]))
for row in advantage_table(pts(uni), pts(front), [1e-3, 3e-4]):
    print(f"d={row.target:g}: uniform {row.tau_uniform:.1f}, front {row.tau_inhomo:.1f}, "
          f"speedup {row.ratio:.2f}")
