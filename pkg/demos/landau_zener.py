"""Nonlinear Landau-Zener probabilities and the supersonic constant A_2."""
import numpy as np

from kzramp import lzoracle

for delta, p in lzoracle.lz_table(2.0, np.geomspace(0.1, 10, 9)):
    print(f"delta={delta:7.3f}  p_2={p:.6f}")

for eps0 in (0.25, 0.5):
    print(f"A_2(eps0={eps0}) = {lzoracle.mode_integral_constant(2.0, eps0):.4f}")
