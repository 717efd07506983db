"""
Exact spectra against floating point
====================================

The exact multiplier polynomial is compared with multipliers found by
simultaneous root finding on ``f^n(z) - z``.
"""

import numpy as np

from multispec import Poly, multiplier_charpoly, numeric_multipliers, superattracting_cycle_count

z = Poly.z()
f = z ** 3 - z / 2 + 1

for n in (1, 2, 3):
    exact = multiplier_charpoly(f, n).charpoly
    mult = numeric_multipliers(f, n)
    coeffs = np.poly(mult)[::-1]
    ref = np.array([float(c) for c in exact.coeffs])
    err = np.max(np.abs(coeffs - ref) / np.maximum(1.0, np.abs(ref)))
    print(f"level {n}: {exact.degree} multipliers, worst relative coefficient error {err:.1e}")

# a cycle through a critical point has multiplier 0
for g in (z ** 2 - 1, z ** 2 + 1, z ** 2 - 2):
    rep = superattracting_cycle_count(g, 6)
    print(g, "->", rep.count, "superattracting cycles, certified:", rep.certified_complete)
